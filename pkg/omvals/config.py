"""
Configuration constants for omvals.

This module centralizes all configuration values, magic numbers, and defaults
to make them easily discoverable and modifiable. Values that can be overridden
from the environment are read through the small accessor functions at the
bottom, at call time.
"""

import os

# ============================================================================
# Logging
# ============================================================================

# Default log level for the command line tools
DEFAULT_LOG_LEVEL = "INFO"

# Environment variable overriding the log level
LOG_LEVEL_ENV = "OMVALS_LOG_LEVEL"


# ============================================================================
# Working Precision
# ============================================================================

# Initial p-adic working precision: coefficients are kept modulo p^nu
DEFAULT_START_PRECISION = 30

# Hard cap for the precision doubling loop
DEFAULT_MAX_PRECISION = 1 << 16

START_PRECISION_ENV = "OMVALS_START_PRECISION"
MAX_PRECISION_ENV = "OMVALS_MAX_PRECISION"


# ============================================================================
# Randomness
# ============================================================================

# Global seed mixed into every per-call PRNG used by the finite field factorizer
DEFAULT_SEED = 0

SEED_ENV = "OMVALS_SEED"


# ============================================================================
# Squarefree Pre-check
# ============================================================================

# Large prime for the modular gcd(g, g') fast path (2^61 - 1)
SQUAREFREE_CHECK_PRIME = 2305843009213693951


# ============================================================================
# Exit Codes
# ============================================================================

class ExitCode:
    """Process exit codes of the omvals command."""
    OK = 0
    FAILURE = 1
    PARSE_ERROR = 2
    NOT_MONIC = 3
    INFINITY = 4


# ============================================================================
# Benchmark Suites
# ============================================================================

class Suite:
    """Identifiers of the example families."""
    EX1 = "ex1"
    EX2 = "ex2"
    EX3 = "ex3"
    EX4 = "ex4"
    EX5 = "ex5"

    ALL = (EX1, EX2, EX3, EX4, EX5)


# Default (prime, parameter) configurations per suite, matching the published tables
DEFAULT_SUITE_PARAMS = {
    Suite.EX1: [{"p": 2, "n": 20}, {"p": 2, "n": 50}, {"p": 59, "n": 20}],
    Suite.EX2: [{"p": 7, "m": 3}, {"p": 23, "m": 5}],
    Suite.EX3: [{"p": 5, "j": 5}, {"p": 5, "j": 6}, {"p": 61, "j": 5}],
    Suite.EX4: [{"p": 7, "m": 3}, {"p": 11, "m": 5}],
    Suite.EX5: [{"p": 5, "i": 5, "j": 6}, {"p": 5, "i": 6, "j": 7}],
}

# CSV columns written by the benchmark harness
BENCH_CSV_FIELDS = ["example", "p", "deg", "value", "engine_ms", "naive_value", "naive_ms"]


# ============================================================================
# Environment Accessors
# ============================================================================

def log_level() -> str:
    return os.environ.get(LOG_LEVEL_ENV, DEFAULT_LOG_LEVEL)


def start_precision() -> int:
    return int(os.environ.get(START_PRECISION_ENV, DEFAULT_START_PRECISION))


def max_precision() -> int:
    return int(os.environ.get(MAX_PRECISION_ENV, DEFAULT_MAX_PRECISION))


def global_seed() -> int:
    return int(os.environ.get(SEED_ENV, DEFAULT_SEED))
