"""
Newton polygons of higher order.

A polygon is the lower convex hull of points (s, u_s) with u_s = v_i(a_s) +
s V_i, where a_s runs over the phi_i-expansion coefficients of g. When g is
divisible by phi_i the left end of the hull lies at (ord_phi g, u); the
polygon then starts with a formal side of slope -infinity from (0, inf).
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import floor, gcd
from typing import List, Optional, Sequence, Tuple

from omvals.exceptions import InsufficientPrecision, InvariantViolation
from omvals.ffield import FFPoly
from omvals.omtype import OMType, coeff_residue, maclane_value, modulus_for
from omvals.polyz import (
    INF,
    Coeffs,
    ExpansionResult,
    PVal,
    Val,
    as_coeffs,
    divmod_monic,
    phi_expansion,
    vp_int,
)

logger = logging.getLogger(__name__)


# ============================================================================
# Sides and polygons
# ============================================================================

@dataclass(frozen=True)
class Side:
    """A side from (s0, u0) to (s1, u1); u0 is inf for the slope -inf side."""
    s0: int
    u0: Val
    s1: int
    u1: int

    @property
    def length(self) -> int:
        return self.s1 - self.s0

    @property
    def height(self) -> Val:
        return self.u0 - self.u1

    @property
    def is_infinite(self) -> bool:
        return self.u0 == INF

    @property
    def slope(self):
        if self.is_infinite:
            return -INF
        return Fraction(self.u1 - self.u0, self.length)

    @property
    def degree(self) -> int:
        """Number of lattice slots E / e."""
        if self.is_infinite:
            return 1
        return gcd(self.length, self.height)

    @property
    def e(self) -> int:
        return self.length // self.degree

    @property
    def h(self) -> Val:
        if self.is_infinite:
            return INF
        return self.height // self.degree

    def ordinate(self, s: int) -> Fraction:
        return self.u0 + Fraction(self.u1 - self.u0, self.length) * (s - self.s0)

    def __str__(self) -> str:
        left = "inf" if self.is_infinite else str(self.u0)
        return f"({self.s0},{left})-({self.s1},{self.u1})"


@dataclass(frozen=True)
class Polygon:
    """Sides ordered from the steepest; ``end`` is the right endpoint."""
    sides: Tuple[Side, ...]
    end: Tuple[int, Val]

    @property
    def length(self) -> int:
        return sum(side.length for side in self.sides)

    @property
    def left(self) -> int:
        """Abscissa where the finite part of the polygon starts."""
        if self.sides and self.sides[0].is_infinite:
            return self.sides[0].s1
        return self.sides[0].s0 if self.sides else self.end[0]

    @property
    def has_infinite_side(self) -> bool:
        return bool(self.sides) and self.sides[0].is_infinite

    def finite_sides(self) -> Tuple[Side, ...]:
        return tuple(side for side in self.sides if not side.is_infinite)

    def slopes(self) -> set:
        return {side.slope for side in self.sides}

    def ordinate(self, s: int) -> Fraction:
        for side in self.sides:
            if not side.is_infinite and side.s0 <= s <= side.s1:
                return side.ordinate(s)
        if s == self.end[0]:
            return Fraction(self.end[1])
        raise ValueError(f"abscissa {s} is outside the finite part of the polygon")

    def __str__(self) -> str:
        if not self.sides:
            return "empty"
        return " ".join(str(side) for side in self.sides)


def lower_hull(ordinates: Sequence[Val]) -> Polygon:
    """
    Lower convex hull of the points (s, ordinates[s]); infinite ordinates are
    above everything. Sides of every slope are kept.
    """
    points = [(s, u) for s, u in enumerate(ordinates) if u != INF]
    if not points:
        return Polygon((), (len(ordinates) - 1, INF))
    hull: List[Tuple[int, int]] = []
    for point in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point unless it is strictly below the chord
            if (x2 - x1) * (point[1] - y1) - (y2 - y1) * (point[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(point)
    sides: List[Side] = []
    if hull[0][0] > 0:
        sides.append(Side(0, INF, hull[0][0], hull[0][1]))
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        sides.append(Side(x1, y1, x2, y2))
    return Polygon(tuple(sides), hull[-1])


def cut_polygon(polygon: Polygon, h: int) -> Polygon:
    """Sub-polygon of the sides of slope < -h; h = 0 gives the principal part."""
    if not polygon.sides:
        return polygon
    kept = tuple(side for side in polygon.sides if side.slope < -h)
    if not kept:
        return Polygon((), (polygon.left, polygon.ordinate(polygon.left)))
    last = kept[-1]
    return Polygon(kept, (last.s1, last.u1))


def principal_polygon(polygon: Polygon) -> Polygon:
    return cut_polygon(polygon, 0)


# ============================================================================
# Polygons of a polynomial with respect to a type
# ============================================================================

@dataclass(frozen=True)
class NewtonData:
    """The polygon of g at the open level of a type, with its expansion."""
    polygon: Polygon
    expansion: ExpansionResult
    points: Tuple[PVal, ...]


def phi_adic_order(g: Sequence[int], phi: Sequence[int], limit: int) -> int:
    """Exact ord_phi(g) over the integers, capped at ``limit``."""
    g = as_coeffs(g)
    k = 0
    while g and k < limit:
        q, r = divmod_monic(g, phi)
        if r:
            break
        g, k = q, k + 1
    return k


def build_polygon(t: OMType, omega: int, g: Sequence[int], nu: Optional[int] = None) -> NewtonData:
    """
    Newton polygon of g over the abscissas [0, omega] at the open top level.

    g holds exact coefficients; with ``nu`` the expansion runs modulo p^nu and
    every point that is only bounded must lie strictly above the hull.

    Raises:
        InsufficientPrecision: a bounded point could touch the polygon
    """
    i = len(t.levels)
    lvl = t.top
    g = as_coeffs(g)
    modulus = modulus_for(t.p, nu)
    expansion = phi_expansion(g, lvl.phi, count=omega, modulus=modulus)
    points = []
    for s in range(omega + 1):
        v = maclane_value(t, i, expansion[s], nu)
        points.append(PVal(v.value + s * lvl.V, v.exact))

    left = 0
    if not points[0].exact or points[0].value == INF:
        left = phi_adic_order(g, lvl.phi, omega + 1)
        if left == 0:
            raise InsufficientPrecision(f"phi-adic constant term undetermined at precision {nu}")
    if not points[omega].exact or points[omega].value == INF:
        raise InsufficientPrecision(f"end point of the polygon undetermined at precision {nu}")

    ordinates = [INF] * left + [pt.value if pt.exact else INF for pt in points[left:]]
    polygon = lower_hull(ordinates)
    for s in range(left, omega + 1):
        pt = points[s]
        if pt.exact:
            continue
        if s < polygon.left or pt.value <= polygon.ordinate(s):
            raise InsufficientPrecision(f"point {s} touches the polygon at precision {nu}")
    return NewtonData(polygon, expansion, tuple(points))


def residual_polynomial(
    t: OMType, side: Side, data: NewtonData, nu: Optional[int] = None
) -> FFPoly:
    """
    R_i(g) attached to a finite side, a polynomial over F_i of degree E/e.

    Coefficient k comes from abscissa s0 + k e: the residue of a_s at level
    i - 1 when the point lies on the side, zero when it lies above.
    """
    i = len(t.levels)
    tower = t.tower
    e, h = side.e, side.h
    coeffs = []
    for k in range(side.degree + 1):
        s = side.s0 + k * e
        pt = data.points[s]
        if pt.exact and pt.value == side.u0 - k * h:
            coeffs.append(coeff_residue(t, i - 1, data.expansion[s], nu))
        else:
            coeffs.append(tower.zero(i))
    poly = tower.poly_trim(i, coeffs)
    if len(poly) != side.degree + 1 or tower.is_zero(i, poly[0]):
        raise InvariantViolation(f"residual polynomial of side {side} lost an end point")
    return poly


def reduction_residual(g: Sequence[int], p: int) -> Coeffs:
    """R_0(g): g / p^v_1(g) reduced modulo p."""
    g = as_coeffs(g)
    v = min(vp_int(p, c) for c in g if c)
    q = p**v
    return tuple((c // q) % p for c in g)


# ============================================================================
# Resultants of sides and partial indices
# ============================================================================

def res_of_sides(s: Side, t: Side, h: int = 0) -> Val:
    """Res^h(S, T) = min(E H', E' H) - h E E'."""
    if s.is_infinite and t.is_infinite:
        return INF
    return min(s.length * t.height, t.length * s.height) - h * s.length * t.length


def partial_resultant(nf: Polygon, ng: Polygon, h: int, residual_degree: int) -> Val:
    """f_0...f_{i-1} times the sum of Res^h over all pairs of sides of two cut polygons."""
    if nf.length == 0 or ng.length == 0:
        return 0
    total: Val = 0
    for s in nf.sides:
        for t in ng.sides:
            total += res_of_sides(s, t)
    if total == INF:
        return INF
    return residual_degree * (total - h * nf.length * ng.length)


def res_partial(
    t: OMType, f: Sequence[int], g: Sequence[int], h: int, nu: Optional[int] = None
) -> Val:
    """Partial resultant at the open level, using its omega and alpha as polygon lengths."""
    lvl = t.top
    nf = cut_polygon(build_polygon(t, lvl.omega, f, nu).polygon, h)
    ng = cut_polygon(build_polygon(t, lvl.alpha, g, nu).polygon, h)
    return partial_resultant(nf, ng, h, t.residual_degree())


def polygon_index(polygon: Polygon, cs: int = 0) -> Val:
    """
    Lattice points (a, b), a >= 1, b >= 1, on or under the polygon after the
    shear (a, b) -> (a, b + cs a), measured from the right end point.
    """
    if not polygon.sides:
        return 0
    left = polygon.left
    if left >= 2:
        return INF
    omega, u_end = polygon.end
    base = u_end + cs * omega
    total = 0
    for a in range(max(1, left), omega):
        total += floor(polygon.ordinate(a) + cs * a - base)
    return total


def describe_side(side: Side) -> str:
    if side.is_infinite:
        return f"{side} slope -inf"
    return f"{side} slope {side.slope} length {side.length} height {side.height}"


def describe(data: NewtonData, polygon: Optional[Polygon] = None) -> str:
    """
    Point and side dump used by the polygon debug trace. Bounded points carry
    a trailing "+"; ``polygon`` defaults to the full hull.
    """
    if polygon is None:
        polygon = data.polygon
    pts = ", ".join(
        f"{s}:{pt.value}{'' if pt.exact else '+'}" for s, pt in enumerate(data.points)
    )
    sides = "; ".join(describe_side(side) for side in polygon.sides) or "empty"
    return f"points [{pts}] sides [{sides}]"
