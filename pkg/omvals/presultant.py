"""
p-adic valuation of resultants by simultaneous OM branching.

Only the types dividing both f and g are followed. At every node the
partial resultant of the two cut polygons is accumulated; a branch is
continued through the sides of f whose slope also occurs for g and the
residual factors shared by both residual polynomials.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from omvals.exceptions import (
    InsufficientPrecision,
    InvariantViolation,
    ZeroLeadingCoefficient,
    double_precision,
)
from omvals.ffield import TowerField, reduce_mod_p
from omvals.montes import NodeTrace, starting_precision
from omvals.newton import (
    NewtonData,
    Polygon,
    build_polygon,
    cut_polygon,
    describe,
    partial_resultant,
    residual_polynomial,
)
from omvals.omtype import OMRep, OMType, build_representative
from omvals.polyz import (
    INF,
    Coeffs,
    PIntPoly,
    Val,
    as_coeffs,
    require_prime,
    smallest_power_at_least,
    vp_int,
)
from omvals.sfl import sfl_iteration

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ResultantRun:
    value: Val
    bound: Optional[int]
    swapped: bool = False
    trace: Tuple[NodeTrace, ...] = ()

    @property
    def is_infinite(self) -> bool:
        return self.value == INF


def res_valuation_bound(
    f: Union[PIntPoly, Sequence[int]], g: Union[PIntPoly, Sequence[int]], p: int
) -> int:
    """
    Strict upper bound for a finite v_p(Res(f, g)) from
    |Res(f, g)| <= ||f||_2^m ||g||_2^n, with n = deg f and m = deg g.
    """
    f, g = as_coeffs(f), as_coeffs(g)
    n, m = len(f) - 1, len(g) - 1
    f2 = sum(c * c for c in f)
    g2 = sum(c * c for c in g)
    log_value = (m * math.log(f2) + n * math.log(g2)) / (2 * math.log(p))
    if n + m <= 128:
        # smallest k with p^(2k) >= f2^m g2^n
        return smallest_power_at_least(p * p, log_value, f2**m * g2**n) + 1
    return math.ceil(log_value) + 2


def normalize_nonmonic_res(
    f: Sequence[Union[int, Fraction]], g: Sequence[Union[int, Fraction]], p: int
) -> Tuple[PIntPoly, PIntPoly, int]:
    """
    Monic integer pair with the same resultant up to a known power of p.

    With a, b the leading coefficients and L = a b, f_hat = (L^n / a) f(x / L)
    and g_hat = (L^m / b) g(x / L) are monic and integral, and
    v_p(Res(f_hat, g_hat)) = v_p(Res(f, g)) + offset.

    Raises:
        ZeroLeadingCoefficient: a leading coefficient is zero
    """
    fs, gs = [Fraction(c) for c in f], [Fraction(c) for c in g]
    if not fs or not gs or fs[-1] == 0 or gs[-1] == 0:
        raise ZeroLeadingCoefficient("leading coefficients must be non-zero")
    n, m = len(fs) - 1, len(gs) - 1
    df = math.lcm(*(c.denominator for c in fs))
    dg = math.lcm(*(c.denominator for c in gs))
    fi = [int(c * df) for c in fs]
    gi = [int(c * dg) for c in gs]
    a, b = fi[-1], gi[-1]
    f_hat = tuple(fi[k] * a ** (n - k - 1) * b ** (n - k) for k in range(n)) + (1,)
    g_hat = tuple(gi[k] * b ** (m - k - 1) * a ** (m - k) for k in range(m)) + (1,)
    offset = (
        m * vp_int(p, df)
        + n * vp_int(p, dg)
        + m * (n - 1) * vp_int(p, a)
        + n * (m - 1) * vp_int(p, b)
    )
    return PIntPoly(f_hat), PIntPoly(g_hat), offset


def resultant_run(
    f: Union[PIntPoly, Sequence[int]],
    g: Union[PIntPoly, Sequence[int]],
    p: int,
    bound: Optional[int] = None,
    trace: bool = False,
) -> ResultantRun:
    """
    Full run of the resultant routine, keeping the node trace on request.

    Raises:
        NotMonic: f or g is not monic
        NotPrime: p is not prime
    """
    fp = f if isinstance(f, PIntPoly) else PIntPoly(as_coeffs(f))
    gp = g if isinstance(g, PIntPoly) else PIntPoly(as_coeffs(g))
    fp.require_monic("f")
    gp.require_monic("g")
    require_prime(p)
    swapped = fp.degree > gp.degree
    if swapped:
        fp, gp = gp, fp
    if fp.degree < 1:
        return ResultantRun(0, bound, swapped)
    if bound is None:
        bound = res_valuation_bound(fp, gp, p)
    nu = starting_precision(p, fp.coeffs, gp.coeffs)
    value, nodes = _p_resultant(fp.coeffs, gp.coeffs, p, bound, trace, precision=nu)
    return ResultantRun(value, bound, swapped, nodes)


def p_resultant(
    f: Union[PIntPoly, Sequence[int]],
    g: Union[PIntPoly, Sequence[int]],
    p: int,
    bound: Optional[int] = None,
) -> Val:
    """v_p(Res(f, g)) for monic f and g; inf when they share a factor."""
    return resultant_run(f, g, p, bound).value


def _pres_branch(
    t: OMType,
    data_f: NewtonData,
    data_g: NewtonData,
    nf: Polygon,
    ng: Polygon,
    f: Coeffs,
    nu: int,
) -> List[OMType]:
    lvl = t.top
    branches: List[OMType] = []
    g_sides = {side.slope: side for side in ng.finite_sides()}
    level = len(t.levels)
    for side in nf.finite_sides():
        g_side = g_sides.get(side.slope)
        if g_side is None:
            continue
        rf = residual_polynomial(t, side, data_f, nu)
        rg = residual_polynomial(t, g_side, data_g, nu)
        for psi, a in t.tower.factor(level, rf):
            b = t.tower.ord(level, rg, psi)
            if b == 0:
                continue
            if lvl.omega > 1:
                closed = t.close(side.h, side.e, psi)
                phi_next = build_representative(closed)
                if side.e * closed.top.f == 1:
                    branches.append(t.refine(phi_next, cs=side.h, omega=a, alpha=b))
                else:
                    branches.append(closed.open(phi_next, omega=a, alpha=b))
            else:
                rep = OMRep.build(t.frame(), lvl.phi, side.h, lvl.cs)
                lifted = sfl_iteration(rep, f, precision=nu)
                branches.append(t.refine(lifted.phi, cs=side.h, omega=1, alpha=b))
    return branches


def _p_resultant(
    f: Coeffs, g: Coeffs, p: int, bound: Optional[int], trace: bool, *, precision: int
) -> Tuple[Val, Tuple[NodeTrace, ...]]:
    nu = precision
    base = TowerField(p)
    g_bar = reduce_mod_p(base, g)
    stack: List[OMType] = []
    for psi, a in base.factor(0, reduce_mod_p(base, f)):
        b = base.ord(0, g_bar, psi)
        if b:
            stack.append(OMType.seed(p, psi, a, b))

    value: Val = 0
    nodes: List[NodeTrace] = []
    while stack:
        t = stack.pop()
        lvl = t.top
        try:
            data_f = build_polygon(t, lvl.omega, f, nu)
            data_g = build_polygon(t, lvl.alpha, g, nu)
            nf = cut_polygon(data_f.polygon, lvl.cs)
            ng = cut_polygon(data_g.polygon, lvl.cs)
            if nf.length != lvl.omega or ng.length > lvl.alpha:
                raise InvariantViolation(f"cut polygon lengths disagree at {t.describe()}")
            contribution = partial_resultant(nf, ng, lvl.cs, t.residual_degree())
            total = value + contribution
            tripped = total == INF or (bound is not None and total >= bound)
            branches = [] if tripped else _pres_branch(t, data_f, data_g, nf, ng, f, nu)
        except InsufficientPrecision as e:
            nu = double_precision(nu, e, "p_resultant")
            stack.append(t)
            continue

        value = total
        text = f"f {describe(data_f, nf)} | g {describe(data_g, ng)}"
        logger.debug(f"node {t.describe()}: {text}, res +{contribution}")
        if trace:
            nodes.append(NodeTrace(len(t.levels), lvl.m, lvl.cs, text, contribution))
        if tripped:
            logger.debug(f"resultant guard tripped at {value} (bound {bound})")
            return INF, tuple(nodes)
        stack.extend(branches)

    return value, tuple(nodes)
