import random
from dataclasses import replace
from fractions import Fraction

import pytest

from omvals.examples import ex1, ex2, ladder
from omvals.ffield import TowerField, extend_tower, reduce_mod_p
from omvals.montes import montes_factorize
from omvals.newton import (
    Side,
    build_polygon,
    cut_polygon,
    describe,
    lower_hull,
    partial_resultant,
    polygon_index,
    principal_polygon,
    reduction_residual,
    res_of_sides,
    res_partial,
    residual_polynomial,
)
from omvals.omtype import Level, OMType, build_representative, maclane_value
from omvals.oracle import naive_resultant
from omvals.polyz import INF, mul, vp_int

P = 5
Y = (0, 1)


def test_lower_hull_principal_part():
    polygon = principal_polygon(lower_hull([5, 2, 1, 0, 0]))
    assert [side.slope for side in polygon.sides] == [-3, -1]
    assert polygon.length == 3
    assert polygon.end == (3, 0)


def test_lower_hull_merges_collinear_points():
    polygon = lower_hull([4, 2, 0])
    assert len(polygon.sides) == 1
    assert polygon.sides[0].degree == 2
    assert polygon.sides[0].e == 1 and polygon.sides[0].h == 2


def test_lower_hull_infinite_side():
    polygon = lower_hull([INF, INF, 0])
    assert polygon.has_infinite_side
    assert polygon.left == 2
    assert polygon.finite_sides() == ()


@pytest.mark.parametrize("h, slopes, length", [(0, [-3, -1], 3), (1, [-3], 1), (3, [], 0)])
def test_cut_polygon(h, slopes, length):
    cut = cut_polygon(lower_hull([5, 2, 1, 0, 0]), h)
    assert [side.slope for side in cut.sides] == slopes
    assert cut.length == length


def test_polygon_of_ex1_shape():
    p, n = 2, 3
    c = sum(p**k for k in range(1, 21))
    tower = extend_tower(TowerField(p), Y)
    t = OMType(p, tower, (Level(phi=(c, 1), V=0, omega=n),))
    f = (c**3 + p ** (20 * n + 1), 3 * c**2, 3 * c, 1)
    polygon = build_polygon(t, n, f).polygon
    assert [str(side) for side in polygon.sides] == [f"(0,{20 * n + 1})-({n},0)"]


def test_residual_polynomial_of_ramified_side():
    t = OMType.seed(P, Y, 2)
    data = build_polygon(t, 2, (P, 0, 1))
    (side,) = data.polygon.sides
    assert (side.e, side.h, side.degree) == (2, 1, 1)
    assert residual_polynomial(t, side, data) == ((1,), (1,))


def test_residual_polynomial_skips_points_above_side():
    t = OMType.seed(P, Y, 2)
    data = build_polygon(t, 2, (P**2, P**3, 1))
    (side,) = data.polygon.sides
    assert side.degree == 2
    assert residual_polynomial(t, side, data) == ((1,), (0,), (1,))


def test_reduction_residual():
    assert reduction_residual((4, 0, 2, 0, 1), 2) == (0, 0, 0, 0, 1)
    assert reduction_residual((9, 3, 6), 3) == (0, 1, 2)


@pytest.mark.parametrize(
    "s, t, h, expected",
    [
        (Side(0, 3, 2, 0), Side(0, 1, 1, 0), 0, 2),
        (Side(0, 3, 2, 0), Side(0, 1, 1, 0), 1, 0),
        (Side(0, INF, 1, 0), Side(0, 5, 2, 0), 0, 5),
        (Side(0, INF, 1, 0), Side(0, INF, 2, 0), 0, INF),
    ],
)
def test_res_of_sides(s, t, h, expected):
    assert res_of_sides(s, t, h) == expected


def test_res_partial_order_zero():
    t = OMType.seed(P, Y, 2, alpha=1)
    assert res_partial(t, (P, 0, 1), (P, 1), 0) == 1
    assert res_partial(t, (P, 0, 1), (P, 1), 1) == 0


def test_res_partial_common_factor():
    t = OMType.seed(P, Y, 2, alpha=1)
    assert res_partial(t, (0, 0, 1), (0, 1), 0) == INF


def test_partial_resultant_scales_by_residual_degree():
    nf = lower_hull([1, INF, 0])
    ng = lower_hull([1, 0])
    assert partial_resultant(nf, ng, 0, 3) == 3


@pytest.mark.parametrize(
    "ordinates, cs, expected",
    [
        ([1, INF, 0], 0, 0),
        ([3, INF, 0], 0, 1),
        ([2, INF, 0], 0, 1),
        ([7, INF, INF, 0], 0, 6),
        ([INF, INF, 0], 0, INF),
        ([0], 0, 0),
    ],
)
def test_polygon_index(ordinates, cs, expected):
    assert polygon_index(lower_hull(ordinates), cs) == expected


def test_side_ordinates():
    side = Side(1, 4, 3, 1)
    assert side.slope == Fraction(-3, 2)
    assert side.ordinate(2) == Fraction(5, 2)


def test_describe_marks_bounded_points():
    t = OMType.seed(P, Y, 2)
    data = build_polygon(t, 2, (P, P**40, 1), nu=30)
    text = describe(data)
    assert "1:30+" in text
    assert "sides [" in text
    assert "slope" in text and "length" in text and "height" in text


def test_describe_restricted_to_a_cut_polygon():
    t = OMType.seed(P, Y, 2)
    data = build_polygon(t, 2, (P**3, P, 1), nu=30)
    cut = cut_polygon(data.polygon, 1)
    expected = "points [0:3, 1:1, 2:0] sides [(0,3)-(1,1) slope -2 length 1 height 2]"
    assert describe(data, cut) == expected


# ----------------------------------------------------------------------------
# Properties over the types produced by montes_factorize
# ----------------------------------------------------------------------------

def _sources():
    rng = random.Random(1009)
    polys = [
        ((P**3, 0, 1), P),
        ((2, 0, 0, 1), 2),
        (mul((2, 0, 1), (6, 1)), 2),
        (ladder(5, 3)[1], 5),
        (ladder(5, 3)[2], 5),
        (ex1(3, 4).coeffs, 3),
        (ex2(7, 1).coeffs, 7),
    ]
    for _ in range(14):
        p = rng.choice([2, 3, 5])
        deg = rng.randint(2, 6)
        g = tuple(p ** rng.randint(0, 3) * rng.randint(-20, 20) for _ in range(deg)) + (1,)
        polys.append((g, p))
    return polys


def _reps():
    for f, p in _sources():
        if naive_resultant(f, tuple(k * c for k, c in enumerate(f))[1:]) == 0:
            continue
        for rep in montes_factorize(f, p).reps:
            yield f, rep


def _opened(frame, i, phi):
    """Truncation of a frame to order i with phi opened as level i + 1."""
    tower = TowerField(frame.p, frame.tower.psis[: i + 1])
    return replace(frame, tower=tower, levels=frame.levels[:i]).open(phi, omega=1)


def _polygon(frame, i, phi, g):
    opened = _opened(frame, i, phi)
    return opened, build_polygon(opened, (len(g) - 1) // (len(phi) - 1), g)


def _residual_order(frame, i, g):
    """ord of psi_i in R_i(g); psi_0 in g mod p when i = 0."""
    if i == 0:
        base = TowerField(frame.p)
        return base.ord(0, reduce_mod_p(base, g), frame.psi0)
    lvl = frame.level(i)
    if len(g) - 1 < lvl.m:
        return 0
    opened, data = _polygon(frame, i - 1, lvl.phi, g)
    sides = [side for side in data.polygon.finite_sides() if side.slope == lvl.slope]
    if not sides:
        return 0
    residual = residual_polynomial(opened, sides[0], data)
    return frame.tower.ord(i, residual, frame.tower.psis[i])


def _samples(rng, f, p, phi):
    yield f
    yield mul(f, phi)
    for _ in range(3):
        deg = rng.randint(len(phi) - 1, 2 * (len(phi) - 1) + 2)
        yield tuple(p ** rng.randint(0, 4) * rng.randint(-30, 30) for _ in range(deg)) + (1,)


def test_principal_length_equals_residual_order():
    rng = random.Random(4242)
    checked = 0
    for f, rep in _reps():
        frame = rep.frame
        p = frame.p
        chain = [lvl.phi for lvl in frame.levels] + [rep.phi]
        for i, phi in enumerate(chain):
            for g in _samples(rng, f, p, phi):
                if len(g) - 1 < len(phi) - 1 or all(c % p == 0 for c in g):
                    continue
                _, data = _polygon(frame, i, phi, g)
                assert cut_polygon(data.polygon, 0).length == _residual_order(frame, i, g), (
                    g,
                    frame.describe(),
                    i,
                )
                checked += 1
    assert checked >= 100


def _irreducible_reps():
    for f, p in [((P**3, 0, 1), P), ((2, 0, 0, 1), 2)] + [(e, 5) for e in ladder(5, 3)]:
        (rep,) = montes_factorize(f, p).reps
        yield f, rep


def test_touching_line_dichotomy():
    rng = random.Random(77)
    for f, rep in _irreducible_reps():
        frame = rep.frame
        p, n = frame.p, len(f) - 1
        chain = [lvl.phi for lvl in frame.levels] + [rep.phi]
        for i in range(1, len(frame.levels) + 1):
            m = frame.level(i).m
            candidates = [chain[i], mul(chain[i], (1, 1))]
            for _ in range(6):
                deg = rng.randint(m, 2 * n)
                candidates.append(
                    tuple(p ** rng.randint(0, 3) * rng.randint(-30, 30) for _ in range(deg)) + (1,)
                )
            for g in candidates:
                v = vp_int(p, naive_resultant(f, g))
                on_theta = INF if v == INF else Fraction(v, n)
                touching = Fraction(maclane_value(frame, i + 1, g).value, frame.ramification(i))
                divides = _residual_order(frame, i, g) > 0
                assert on_theta >= touching
                assert (on_theta == touching) == (not divides), (g, i)


def test_residual_polynomial_is_multiplicative():
    for _, rep in _irreducible_reps():
        frame = rep.frame
        for i in range(1, len(frame.levels) + 1):
            lvl = frame.level(i)
            base = _opened(frame, i - 1, lvl.phi)
            tower = frame.tower
            linear = [(tower.from_int(i, c), tower.one(i)) for c in (1, 2)]
            psis = [tower.psis[i]] + [psi for psi in linear if psi != tower.psis[i]]
            reps = [build_representative(base.close(lvl.h, lvl.e, psi)) for psi in psis]

            def residual(g):
                opened, data = _polygon(frame, i - 1, lvl.phi, g)
                (side,) = data.polygon.finite_sides()
                assert side.slope == lvl.slope
                return tower.poly_monic(i, residual_polynomial(opened, side, data))

            for psi, g in zip(psis, reps):
                assert residual(g) == psi
            for g, h in zip(reps, reps[1:]):
                expected = tower.poly_monic(i, tower.poly_mul(i, residual(g), residual(h)))
                assert residual(mul(g, h)) == expected
