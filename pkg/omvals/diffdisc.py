"""
Local differents and the p-adic valuation of polynomial discriminants.

v_p(Disc g) = 2 ind_p(g) + sum over the irreducible factors F of
f(F) (e(F) - 1 + rho(F)), where rho(F) = v_{r+1}(F') - e mu vanishes exactly
for tame factors.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from sympy import Poly, symbols

from omvals import config
from omvals.exceptions import InvariantViolation, NotMonic, ZeroLeadingCoefficient
from omvals.montes import OMFactorization, montes_factorize
from omvals.omtype import OMRep, multiadic_value
from omvals.polyz import (
    INF,
    PIntPoly,
    Val,
    as_coeffs,
    derivative,
    multiadic_expansion,
    require_prime,
    smallest_power_at_least,
    vp_int,
)
from omvals.sfl import sfl_to_target

logger = logging.getLogger(__name__)

_x = symbols("x")


@dataclass(frozen=True)
class DifferentResult:
    e: int
    f: int
    mu: Fraction
    rho: int

    @property
    def diff_exponent(self) -> int:
        return self.e - 1 + self.rho

    @property
    def local_disc_valuation(self) -> int:
        return self.f * self.diff_exponent


@dataclass(frozen=True)
class DiscResult:
    sum_local_disc: Val
    ind: Val
    v_disc: Val
    factorization: Optional[OMFactorization] = None
    local_results: Tuple[DifferentResult, ...] = ()

    @property
    def is_infinite(self) -> bool:
        return self.v_disc == INF


# ============================================================================
# Different
# ============================================================================

def different_valuation(f: Union[PIntPoly, Sequence[int]], rep: OMRep) -> DifferentResult:
    """
    Exponent data of the local different of the factor represented by rep.

    Wild factors are first lifted until h >= e v_p(e); rho is then the
    v_{r+1}-value of phi' read off its multiadic expansion, minus e mu.

    Raises:
        InvariantViolation: rho is not an integer in [0, e v_p(e)]
    """
    f = as_coeffs(f)
    p = rep.frame.p
    inv = rep.invariants
    wild = vp_int(p, inv.e)
    if wild == 0:
        return DifferentResult(inv.e, inv.f, inv.mu, 0)
    precision = inv.e * wild
    rep = sfl_to_target(rep, f, precision)
    chain = rep.frame.chain()
    terms = multiadic_expansion(derivative(rep.phi), chain)
    rho = multiadic_value(rep.frame, terms) - inv.e * inv.mu
    if rho.denominator != 1 or not 0 <= rho <= precision:
        raise InvariantViolation(f"rho = {rho} outside [0, {precision}] for e = {inv.e}")
    return DifferentResult(inv.e, inv.f, inv.mu, int(rho))


def local_discriminants(
    g: Union[PIntPoly, Sequence[int]], p: int
) -> List[Tuple[OMRep, DifferentResult]]:
    """Different data of every irreducible factor of a squarefree monic g."""
    g = as_coeffs(g)
    factorization = montes_factorize(g, p)
    return [(rep, different_valuation(g, rep)) for rep in factorization.reps]


# ============================================================================
# Bounds and normalization
# ============================================================================

def disc_valuation_bound(g: Union[PIntPoly, Sequence[int]], p: int) -> int:
    """
    Strict upper bound for a finite v_p(Disc g) from Mahler's inequality
    |Disc g| < n^n ||g||^(2n-2), with ||g|| the sum of absolute values.
    """
    g = as_coeffs(g)
    n = len(g) - 1
    norm = sum(abs(c) for c in g)
    log_value = (n * math.log(n) + (2 * n - 2) * math.log(norm)) / math.log(p) if n else 0.0
    if n <= 64:
        return smallest_power_at_least(p, log_value, n**n * norm ** (2 * n - 2)) + 1
    # the exact product is large; one extra unit absorbs rounding in the logarithm
    return math.ceil(log_value) + 2


def normalize_nonmonic_disc(
    g: Sequence[Union[int, Fraction]], p: int
) -> Tuple[PIntPoly, int]:
    """
    Monic integer polynomial with the same discriminant up to a known power of p.

    Rational coefficients are cleared with their common denominator D first
    (v_p(Disc D g) = v_p(Disc g) + (2n - 2) v_p(D)); then
    g_hat = a_n^(n-1) g(x / a_n), with v_p(Disc g_hat) = v_p(Disc g) + offset.

    Raises:
        ZeroLeadingCoefficient: the leading coefficient is zero
    """
    coeffs = [Fraction(c) for c in g]
    if not coeffs or coeffs[-1] == 0:
        raise ZeroLeadingCoefficient("leading coefficient must be non-zero")
    n = len(coeffs) - 1
    if n < 1:
        raise NotMonic("discriminant needs degree >= 1")
    offset = 0
    denominator = math.lcm(*(c.denominator for c in coeffs))
    if denominator != 1:
        offset += (2 * n - 2) * vp_int(p, denominator)
    ints = [int(c * denominator) for c in coeffs]
    lead = ints[-1]
    monic = tuple(ints[k] * lead ** (n - 1 - k) for k in range(n)) + (1,)
    offset += (n - 1) * (n - 2) * vp_int(p, lead)
    return PIntPoly(monic), offset


# ============================================================================
# p-discriminant
# ============================================================================

def is_squarefree(g: Sequence[int]) -> bool:
    """
    gcd(g, g') == 1 over Q. A unit gcd modulo a large prime settles it;
    otherwise the exact gcd decides.
    """
    g = as_coeffs(g)
    if len(g) <= 2:
        return True
    q = config.SQUAREFREE_CHECK_PRIME
    if g[-1] % q:
        ring = Poly(list(reversed(g)), _x, modulus=q)
        if ring.gcd(ring.diff(_x)).degree() == 0:
            return True
    exact = Poly(list(reversed(g)), _x)
    return exact.gcd(exact.diff(_x)).degree() == 0


def p_discriminant(
    g: Union[PIntPoly, Sequence[int]], p: int, guard_only: bool = False, trace: bool = False
) -> DiscResult:
    """
    v_p(Disc g) for monic g, as the sum of the local discriminants plus
    twice the p-index.

    Args:
        g: Monic integer polynomial
        p: Prime number
        guard_only: Skip the squarefree pre-check and rely on the index bound alone
        trace: Keep the per-node trace of the branching run

    Returns:
        DiscResult; v_disc is inf when Disc g = 0
    """
    poly = g if isinstance(g, PIntPoly) else PIntPoly(as_coeffs(g))
    poly.require_monic("g")
    require_prime(p)
    coeffs = poly.coeffs
    if not guard_only and not is_squarefree(coeffs):
        logger.debug("g is not squarefree; discriminant vanishes")
        return DiscResult(INF, INF, INF)
    bound = disc_valuation_bound(coeffs, p)
    factorization = montes_factorize(coeffs, p, index_bound=bound, trace=trace)
    if not factorization.is_complete:
        return DiscResult(INF, INF, INF, factorization)
    locals_ = tuple(different_valuation(coeffs, rep) for rep in factorization.reps)
    total = sum(d.local_disc_valuation for d in locals_)
    v_disc = total + 2 * factorization.ind
    logger.debug(f"v_{p}(Disc) = {total} + 2 * {factorization.ind} = {v_disc}")
    return DiscResult(total, factorization.ind, v_disc, factorization, locals_)


def field_discriminant_valuation(result: DiscResult) -> Val:
    """v_p of the discriminant of the etale algebra Q_p[x]/(g): the local sum."""
    return result.sum_local_disc
