"""
Benchmark harness for the example families.

Each configuration is generated, evaluated by the engine (p_discriminant for
single polynomials, p_resultant for pairs) and optionally by the exact
oracle. Rows run one after another so timings do not interfere.
"""

import csv
import logging
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, TextIO, Tuple, TypeVar, Union

from omvals import config
from omvals.diffdisc import p_discriminant
from omvals.examples import expected_value, generate_example, is_pair
from omvals.exceptions import InvariantViolation, ParamOutOfRange
from omvals.oracle import naive_disc_valuation, naive_res_valuation
from omvals.polyz import INF, Val
from omvals.presultant import p_resultant

logger = logging.getLogger(__name__)

T = TypeVar("T")


@dataclass(frozen=True)
class BenchRow:
    example: str
    p: int
    deg: str
    value: Val
    engine_ms: float
    naive_value: Optional[Val] = None
    naive_ms: Optional[float] = None

    def as_row(self) -> Dict[str, str]:
        def text(v: Optional[Val]) -> str:
            if v is None:
                return ""
            return "infinity" if v == INF else str(v)

        return {
            "example": self.example,
            "p": str(self.p),
            "deg": self.deg,
            "value": text(self.value),
            "engine_ms": f"{self.engine_ms:.3f}",
            "naive_value": text(self.naive_value),
            "naive_ms": "" if self.naive_ms is None else f"{self.naive_ms:.3f}",
        }


def _timed(func: Callable[[], T], repeat: int) -> Tuple[T, float]:
    """Result of func and its best wall-clock time over repeat runs, in ms."""
    best = float("inf")
    result = None
    for _ in range(max(1, repeat)):
        start = time.perf_counter()
        result = func()
        best = min(best, (time.perf_counter() - start) * 1000.0)
    return result, best


def run_row(
    example: str, params: Dict[str, int], with_naive: bool = False, repeat: int = 1
) -> BenchRow:
    """
    Evaluate one configuration.

    Raises:
        ParamOutOfRange: invalid example parameters
        InvariantViolation: engine and oracle disagree
    """
    p = params["p"]
    generated = generate_example(example, **params)
    if is_pair(example):
        f, g = generated
        deg = f"{f.degree}x{g.degree}"
        value, engine_ms = _timed(lambda: p_resultant(f, g, p), repeat)
        naive = (lambda: naive_res_valuation(f, g, p)) if with_naive else None
    else:
        deg = str(generated.degree)
        value, engine_ms = _timed(lambda: p_discriminant(generated, p).v_disc, repeat)
        naive = (lambda: naive_disc_valuation(generated, p)) if with_naive else None

    naive_value, naive_ms = None, None
    if naive is not None:
        naive_value, naive_ms = _timed(naive, 1)
        if naive_value != value:
            raise InvariantViolation(
                f"{example} {params}: engine {value} differs from oracle {naive_value}"
            )

    expected = expected_value(example, **params)
    if expected is not None and expected != value:
        logger.warning(f"{example} {params}: value {value}, published {expected}")
    logger.info(f"{example} {params}: deg {deg}, value {value}, {engine_ms:.1f} ms")
    return BenchRow(example, p, deg, value, engine_ms, naive_value, naive_ms)


def run_bench(
    suite: str,
    params: Optional[Iterable[Dict[str, int]]] = None,
    with_naive: bool = False,
    repeat: int = 1,
) -> List[BenchRow]:
    """
    One BenchRow per configuration of a suite.

    Args:
        suite: Example family identifier (ex1 ... ex5)
        params: Parameter dictionaries; the published configurations by default
        with_naive: Also time the exact oracle and cross-check its value
        repeat: Engine runs per row; the best time is kept

    Returns:
        List of BenchRow in configuration order
    """
    if suite not in config.Suite.ALL:
        raise ParamOutOfRange(f"unknown suite {suite!r}; expected one of {config.Suite.ALL}")
    configurations = list(params) if params is not None else config.DEFAULT_SUITE_PARAMS[suite]
    return [run_row(suite, dict(conf), with_naive, repeat) for conf in configurations]


def write_csv(rows: Iterable[BenchRow], target: Union[str, Path, TextIO]) -> None:
    """Write rows with the BENCH_CSV_FIELDS header to a path or an open text stream."""
    if isinstance(target, (str, Path)):
        with open(target, "w", newline="") as f:
            write_csv(rows, f)
        return
    writer = csv.DictWriter(target, fieldnames=config.BENCH_CSV_FIELDS)
    writer.writeheader()
    for row in rows:
        writer.writerow(row.as_row())
