"""
The Montes branching algorithm.

Starting from the irreducible factors of f mod p, every branch of the
stack carries an OM type with an open top level. A node computes the cut
polygon of f at that level, adds its lattice count to the index, and then
either emits a complete representation or pushes the branches opened by
the irreducible factors of the residual polynomials of its sides.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

from omvals import config
from omvals.exceptions import (
    ExactFactor,
    InsufficientPrecision,
    InvariantViolation,
    NotMonic,
    double_precision,
)
from omvals.ffield import TowerField, reduce_mod_p
from omvals.newton import (
    NewtonData,
    Polygon,
    Side,
    build_polygon,
    cut_polygon,
    describe,
    polygon_index,
    residual_polynomial,
)
from omvals.omtype import OMRep, OMType, build_representative
from omvals.polyz import INF, Coeffs, PIntPoly, Val, as_coeffs, require_prime, vp_int
from omvals.sfl import approximation_quality

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NodeTrace:
    """Contribution of one processed node; polygon holds the describe() dump."""
    level: int
    degree: int
    cs: int
    polygon: str
    contribution: Val


@dataclass(frozen=True)
class OMFactorization:
    p: int
    f: Coeffs
    reps: Tuple[OMRep, ...]
    ind: Val
    trace: Tuple[NodeTrace, ...] = ()

    @property
    def is_complete(self) -> bool:
        return self.ind != INF

    @property
    def degree_sum(self) -> int:
        return sum(rep.degree for rep in self.reps)


def _quality(frame: OMType, phi: Coeffs, f: Coeffs, nu: int) -> Val:
    try:
        return approximation_quality(frame, phi, f, nu)
    except ExactFactor:
        return INF


def complete_rep(
    t: OMType, closed: OMType, side: Side, phi_next: Coeffs, f: Coeffs, nu: int
) -> OMRep:
    """
    Representation of the factor singled out by a residual factor of
    multiplicity one. With e f > 1 the closed level belongs to the frame;
    otherwise phi_next only refines phi_i and the frame stops below it.
    """
    if side.e * closed.top.f > 1:
        return OMRep.build(closed, phi_next, _quality(closed, phi_next, f, nu), 0)
    frame = t.frame()
    return OMRep.build(frame, phi_next, _quality(frame, phi_next, f, nu), side.h)


def montes_factorize(
    f: Union[PIntPoly, Sequence[int]],
    p: int,
    index_bound: Optional[int] = None,
    trace: bool = False,
) -> OMFactorization:
    """
    OM representations of the irreducible p-adic factors of a monic f and its
    p-index.

    Args:
        f: Monic polynomial of degree >= 1
        p: Prime number
        index_bound: Stop with ind = inf once the accumulated index reaches it
        trace: Record the contribution of every node

    Returns:
        OMFactorization with canonically sorted reps

    Raises:
        NotMonic: f is not monic or is constant
        NotPrime: p is not prime
    """
    poly = f if isinstance(f, PIntPoly) else PIntPoly(as_coeffs(f))
    poly.require_monic("f")
    if poly.degree < 1:
        raise NotMonic("f must have degree >= 1")
    require_prime(p)
    return _montes(
        poly.coeffs, p, index_bound, trace, precision=starting_precision(p, poly.coeffs)
    )


def starting_precision(p: int, *polys: Sequence[int]) -> int:
    """
    First working precision for the inputs: the configured start, raised so
    that every nonzero coefficient is known beyond its own valuation.
    """
    values = [vp_int(p, c) for g in polys for c in g if c]
    return max([config.start_precision()] + [int(v) + 1 for v in values])


@dataclass(frozen=True)
class _Node:
    data: NewtonData
    polygon: Polygon
    contribution: Val


def _measure(t: OMType, f: Coeffs, nu: int) -> _Node:
    lvl = t.top
    data = build_polygon(t, lvl.omega, f, nu)
    polygon = cut_polygon(data.polygon, lvl.cs)
    if polygon.length != lvl.omega:
        raise InvariantViolation(
            f"cut polygon of length {polygon.length}, expected {lvl.omega} at {t.describe()}"
        )
    count = polygon_index(polygon, lvl.cs)
    contribution = count if count == INF else t.residual_degree() * count
    return _Node(data, polygon, contribution)


def _branch(
    t: OMType, node: _Node, f: Coeffs, nu: int
) -> Tuple[List[OMRep], List[OMType]]:
    lvl = t.top
    polygon = node.polygon
    reps: List[OMRep] = []
    branches: List[OMType] = []
    if lvl.omega == 1 or polygon.has_infinite_side:
        # a single side of length one, or phi_i divides f exactly
        reps.append(OMRep.build(t.frame(), lvl.phi, polygon.sides[0].h, lvl.cs))
        if lvl.omega == 1:
            return reps, branches

    level = len(t.levels)
    for side in polygon.finite_sides():
        residual = residual_polynomial(t, side, node.data, nu)
        for psi, mult in t.tower.factor(level, residual):
            closed = t.close(side.h, side.e, psi)
            phi_next = build_representative(closed)
            if mult == 1:
                reps.append(complete_rep(t, closed, side, phi_next, f, nu))
            elif side.e * closed.top.f == 1:
                branches.append(t.refine(phi_next, cs=side.h, omega=mult))
            else:
                branches.append(closed.open(phi_next, omega=mult))
    return reps, branches


def _guard_tripped(index: Val, index_bound: Optional[int]) -> bool:
    return index == INF or (index_bound is not None and index >= index_bound)


def _montes(
    f: Coeffs, p: int, index_bound: Optional[int], trace: bool, *, precision: int
) -> OMFactorization:
    """
    Depth-first Montes loop. A node that runs out of precision is retried
    alone at twice the precision; finished branches are kept.
    """
    nu = precision
    base = TowerField(p)
    stack: List[OMType] = [
        OMType.seed(p, psi, mult) for psi, mult in base.factor(0, reduce_mod_p(base, f))
    ]
    reps: List[OMRep] = []
    nodes: List[NodeTrace] = []
    index: Val = 0

    def finish(ind: Val) -> OMFactorization:
        ordered = tuple(sorted(reps, key=OMRep.sort_key))
        return OMFactorization(p, f, ordered, ind, tuple(nodes))

    while stack:
        t = stack.pop()
        try:
            node = _measure(t, f, nu)
            tripped = _guard_tripped(index + node.contribution, index_bound)
            found, branches = ([], []) if tripped else _branch(t, node, f, nu)
        except InsufficientPrecision as e:
            nu = double_precision(nu, e, "montes")
            stack.append(t)
            continue

        index += node.contribution
        text = describe(node.data, node.polygon)
        logger.debug(f"node {t.describe()}: {text}, index +{node.contribution}")
        if trace:
            lvl = t.top
            nodes.append(NodeTrace(len(t.levels), lvl.m, lvl.cs, text, node.contribution))
        if tripped:
            logger.debug(f"index guard tripped at {index} (bound {index_bound})")
            return finish(INF)
        reps.extend(found)
        stack.extend(branches)

    logger.debug(f"montes at p={p} (precision {nu}): {len(reps)} factors, index {index}")
    return finish(index)
