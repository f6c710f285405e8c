"""
Single-factor lifting.

Given an Okutsu approximation phi to an irreducible factor F of f, with
f = a_0 + a_1 phi + ..., one step replaces phi by Phi = phi + b where
b a_1 = a_0 (mod phi). A correction raises the quality
h = v(a_0) - v(a_1) - V_{r+1} to at least 2h - cs, where cs is the slope
already cut off by the driver; an iteration repeats it until h doubles.
"""

import logging
from math import ceil
from typing import List, Optional, Sequence, Tuple

from omvals.exceptions import (
    ExactFactor,
    InsufficientPrecision,
    InvariantViolation,
    with_precision_restart,
)
from omvals.omtype import OMRep, OMType, maclane_value, modulus_for
from omvals.polyz import (
    INF,
    Coeffs,
    Val,
    as_coeffs,
    divmod_monic,
    phi_expansion,
    reduce_mod_power,
    require_exact,
    vp_int,
)

logger = logging.getLogger(__name__)


# ============================================================================
# Approximation quality
# ============================================================================

def approximation_quality(
    frame: OMType, phi: Sequence[int], f: Sequence[int], nu: Optional[int] = None
) -> int:
    """
    h of phi as an approximation to a factor of f, measured at v_{r+1}.

    Raises:
        ExactFactor: phi divides f over the integers
        InsufficientPrecision: v(a_0) or v(a_1) undetermined at precision nu
    """
    phi, f = as_coeffs(phi), as_coeffs(f)
    r = frame.order
    modulus = modulus_for(frame.p, nu)
    expansion = phi_expansion(f, phi, count=1, modulus=modulus)
    v0 = maclane_value(frame, r + 1, expansion[0], nu)
    if not v0.exact or v0.value == INF:
        if not divmod_monic(f, phi)[1]:
            raise ExactFactor(f"approximation of degree {len(phi) - 1} divides f")
        raise InsufficientPrecision(f"phi-adic constant term vanishes modulo p^{nu}")
    v1 = require_exact(maclane_value(frame, r + 1, expansion[1], nu), "v(a_1)")
    h = v0.value - v1 - frame.next_V()
    if h <= 0:
        raise InvariantViolation(f"approximation quality {h} is not positive")
    return h


def measure_h(rep: OMRep, f: Sequence[int], nu: Optional[int] = None) -> Val:
    """h of the representation's approximation; inf when phi is an exact factor."""
    try:
        return approximation_quality(rep.frame, rep.phi, f, nu)
    except ExactFactor:
        return INF


# ============================================================================
# p-adic linear algebra
# ============================================================================

def solve_padic(
    matrix: Sequence[Sequence[int]], rhs: Sequence[int], p: int, nu: int
) -> Tuple[List[int], int]:
    """
    Solve matrix x = rhs over Z_p from entries known modulo p^nu.

    Elimination uses full pivoting on the smallest valuation. Returns the
    solution and the precision it is known to.

    Raises:
        InsufficientPrecision: the matrix is singular at this precision
        InvariantViolation: the system has no integral solution
    """
    n = len(rhs)
    mod = p**nu
    a = [[c % mod for c in row] for row in matrix]
    b = [c % mod for c in rhs]
    rhs_prec = nu
    free_rows, free_cols = set(range(n)), set(range(n))
    pivots: List[Tuple[int, int, int]] = []
    for _ in range(n):
        best = None
        for i in free_rows:
            for j in free_cols:
                if a[i][j]:
                    k = vp_int(p, a[i][j])
                    if best is None or k < best[0]:
                        best = (k, i, j)
        if best is None:
            raise InsufficientPrecision(f"singular system modulo p^{nu}")
        k, i, j = best
        if k >= nu:
            raise InsufficientPrecision(f"pivot valuation {k} reaches precision {nu}")
        unit_inv = pow(a[i][j] // p**k, -1, mod)
        free_rows.discard(i)
        free_cols.discard(j)
        for r in free_rows:
            if a[r][j]:
                factor = (a[r][j] // p**k) * unit_inv % mod
                a[r] = [(x - factor * y) % mod for x, y in zip(a[r], a[i])]
                b[r] = (b[r] - factor * b[i]) % mod
        rhs_prec = min(rhs_prec, nu - k)
        pivots.append((i, j, k))

    x = [0] * n
    x_prec = [nu] * n
    solved: List[Tuple[int, int]] = []
    for i, j, k in reversed(pivots):
        num = b[i]
        prec = rhs_prec
        for col, _ in solved:
            if a[i][col]:
                num -= a[i][col] * x[col]
                prec = min(prec, k + x_prec[col])
        if prec <= k:
            raise InsufficientPrecision(f"back substitution exhausted precision {nu}")
        num %= p**prec
        if num and vp_int(p, num) < k:
            raise InvariantViolation("linear system has no integral solution")
        x_prec[j] = prec - k
        modulus = p**x_prec[j]
        x[j] = (num // p**k) * pow(a[i][j] // p**k, -1, modulus) % modulus
        solved.append((j, i))
    return x, min(x_prec) if n else nu


def _multiplication_matrix(a1: Coeffs, phi: Coeffs, modulus: int) -> List[List[int]]:
    """Matrix of b -> b a1 mod phi in the monomial basis (columns x^j a1 mod phi)."""
    m = len(phi) - 1
    columns = []
    col = divmod_monic(a1, phi, modulus)[1]
    for _ in range(m):
        columns.append(list(col) + [0] * (m - len(col)))
        col = divmod_monic((0,) + col, phi, modulus)[1]
    return [[columns[j][i] for j in range(m)] for i in range(m)]


# ============================================================================
# Lifting
# ============================================================================

def _newton_step(rep: OMRep, f: Coeffs, precision: int) -> OMRep:
    """One Newton correction of phi; the quality reaches at least 2h - cs."""
    phi = rep.phi
    m = len(phi) - 1
    frame, p = rep.frame, rep.frame.p
    target = 2 * rep.h - rep.cs
    keep = (rep.V + target) // rep.e + 1
    modulus = modulus_for(p, precision)
    expansion = phi_expansion(f, phi, count=1, modulus=modulus)
    matrix = _multiplication_matrix(expansion[1], phi, modulus)
    rhs = list(expansion[0]) + [0] * (m - len(expansion[0]))
    b, known = solve_padic(matrix, rhs, p, precision)
    if known < keep:
        raise InsufficientPrecision(f"correction known to p^{known}, need p^{keep}")

    corrected = tuple(phi[k] + b[k] for k in range(m)) + (1,)
    new_phi = reduce_mod_power(corrected, p, keep).coeffs
    try:
        h = approximation_quality(frame, new_phi, f, precision)
    except ExactFactor:
        h = INF
    if h < target:
        raise InsufficientPrecision(f"lifted quality {h} below {target} at precision {precision}")
    return rep.with_phi(new_phi, h)


@with_precision_restart
def sfl_iteration(rep: OMRep, f: Sequence[int], *, precision: int) -> OMRep:
    """
    One lifting step: the returned approximation has the same degree and at
    least twice the quality. A single Newton correction only guarantees
    2h - cs, so corrections repeat until 2h is reached.

    Raises:
        InsufficientPrecision: retried by the restart loop at doubled precision
        InvariantViolation: a correction did not raise the quality
    """
    f = as_coeffs(f)
    if rep.is_exact:
        return rep
    m = len(rep.phi) - 1
    if len(f) - 1 == m:
        return rep.with_phi(f, INF)

    goal = 2 * rep.h
    current = rep
    while current.h < goal:
        lifted = _newton_step(current, f, precision)
        if lifted.h <= current.h:
            raise InvariantViolation(f"SFL step left h at {current.h} (cs {rep.cs})")
        current = lifted
    logger.debug(f"SFL degree {m}: h {rep.h} -> {current.h}")
    return current


def sfl_to_target(rep: OMRep, f: Sequence[int], target_h: int) -> OMRep:
    """Iterate until h >= target_h; unchanged when already there."""
    while rep.h < target_h:
        rep = sfl_iteration(rep, f)
    return rep


def sfl_to_precision(rep: OMRep, f: Sequence[int], nu: int) -> OMRep:
    """Lift until the approximation determines the factor to precision nu: h >= e(nu - nu_r)."""
    nu_r = rep.invariants.nu[-1] if rep.invariants.nu else 0
    return sfl_to_target(rep, f, max(1, ceil(rep.e * (nu - nu_r))))
