import random

import pytest

from omvals.exceptions import NotMonic, PsiIsY, ReduciblePsi, ZeroPolynomial
from omvals.ffield import TowerField, extend_tower, ff_factorize, ff_ord, product, reduce_mod_p

F5 = TowerField(5)
F2 = TowerField(2)
# F_4 = F_2[z]/(z^2 + z + 1); level-1 elements are pairs (c0, c1) = c0 + c1 z
F4 = extend_tower(F2, (1, 1, 1))
ONE, Z, Z1 = (1, 0), (0, 1), (1, 1)


def test_extend_by_non_square():
    tower = extend_tower(F5, (2, 0, 1))
    assert tower.top == 1
    assert tower.cardinality(1) == 25
    z = tower.generator(1)
    psi_at_z = tower.add(1, tower.mul(1, z, z), tower.from_int(1, 2))
    assert tower.is_zero(1, psi_at_z)


def test_two_step_tower():
    tower = extend_tower(F4, (Z, ONE, ONE))
    assert tower.top == 2
    assert tower.absolute_degree(2) == 4
    assert tower.cardinality(2) == 16


def test_reducible_extension_rejected():
    with pytest.raises(ReduciblePsi):
        extend_tower(F5, (4, 0, 1))


def test_y_rejected_above_level_zero():
    with pytest.raises(PsiIsY):
        extend_tower(F4, ((0, 0), ONE))


def test_non_monic_extension_rejected():
    with pytest.raises(NotMonic):
        extend_tower(F5, (1, 0, 2))


@pytest.mark.parametrize(
    "tower, level, poly, expected",
    [
        (F5, 0, (1, 0, 1), [((2, 1), 1), ((3, 1), 1)]),
        (F2, 0, (1, 1, 1), [((1, 1, 1), 1)]),
        (F4, 1, (ONE, ONE, ONE), [((Z, ONE), 1), ((Z1, ONE), 1)]),
    ],
)
def test_factor(tower, level, poly, expected):
    assert ff_factorize(tower, level, poly) == expected


def test_factor_with_multiplicities():
    cube = product(F5, 0, [(2, 1)] * 3 + [(3, 1)])
    assert F5.factor(0, cube) == [((2, 1), 3), ((3, 1), 1)]


def test_factor_inseparable_part():
    # (y + 1)^2 over F_2 is a p-th power
    assert F2.factor(0, (1, 0, 1)) == [((1, 1), 2)]


def test_factor_is_reproducible():
    poly = reduce_mod_p(F5, (1, 3, 0, 2, 4, 1, 1))
    assert F5.factor(0, poly) == F5.factor(0, poly)


def test_factor_product_rebuilds_input():
    poly = reduce_mod_p(TowerField(7), (3, 1, 4, 1, 5, 2, 6, 1))
    tower = TowerField(7)
    factors = tower.factor(0, poly)
    rebuilt = product(tower, 0, [g for g, m in factors for _ in range(m)])
    assert rebuilt == poly


@pytest.mark.parametrize(
    "tower, poly, psi, expected",
    [
        (F5, product(F5, 0, [(2, 1)] * 3 + [(3, 1)]), (2, 1), 3),
        (F2, (1, 1, 1), (1, 1), 0),
        (F2, (1, 1, 1), (1, 1, 1), 1),
    ],
)
def test_ord(tower, poly, psi, expected):
    assert ff_ord(tower, 0, poly, psi) == expected


def test_zero_polynomial_errors():
    with pytest.raises(ZeroPolynomial):
        F5.factor(0, ())
    with pytest.raises(ZeroPolynomial):
        F5.ord(0, (), (1, 1))


def test_inverse_in_extension():
    tower = extend_tower(F5, (2, 0, 1))
    a = (3, 4)
    assert tower.mul(1, a, tower.inv(1, a)) == tower.one(1)


F25 = extend_tower(F5, (2, 0, 1))
F16 = extend_tower(F4, (Z, ONE, ONE))
TOWERS = [(F5, 0), (F25, 1), (F4, 1), (F16, 2)]


def _triples(tower, level, count=20):
    rng = random.Random(tower.cardinality(level))
    for _ in range(count):
        yield tuple(tower.random_element(level, rng) for _ in range(3))


@pytest.mark.parametrize("tower, level", TOWERS)
def test_field_axioms(tower, level):
    zero, one = tower.zero(level), tower.one(level)
    for a, b, c in _triples(tower, level):
        assert tower.add(level, a, b) == tower.add(level, b, a)
        assert tower.mul(level, a, b) == tower.mul(level, b, a)
        assert tower.mul(level, tower.mul(level, a, b), c) == tower.mul(
            level, a, tower.mul(level, b, c)
        )
        assert tower.mul(level, a, tower.add(level, b, c)) == tower.add(
            level, tower.mul(level, a, b), tower.mul(level, a, c)
        )
        assert tower.add(level, a, tower.neg(level, a)) == zero
        assert tower.mul(level, a, one) == a
        if not tower.is_zero(level, a):
            assert tower.mul(level, a, tower.inv(level, a)) == one


@pytest.mark.parametrize("tower, level", TOWERS)
def test_frobenius(tower, level):
    p, q = tower.p, tower.cardinality(level)
    for a, b, _ in _triples(tower, level):
        assert tower.pow(level, a, q) == a
        assert tower.pow(level, tower.add(level, a, b), p) == tower.add(
            level, tower.pow(level, a, p), tower.pow(level, b, p)
        )


@pytest.mark.parametrize(
    "tower, level, root, n",
    [(F5, 0, 3, 7), (F5, 0, 0, 12), (F25, 1, (1, 2), 4), (F16, 2, (Z, ONE), 3)],
)
def test_factor_pure_power(tower, level, root, n):
    linear = tower.poly_trim(level, (root, tower.one(level)))
    poly = product(tower, level, [linear] * n)
    assert tower.factor(level, poly) == [(linear, n)]
    assert tower._pure_power(level, poly) == (linear, n)


def test_pure_power_needs_a_unit_exponent():
    # (y + 1)^5 over F_5 goes through the squarefree decomposition
    poly = product(F5, 0, [(1, 1)] * 5)
    assert F5._pure_power(0, poly) is None
    assert F5.factor(0, poly) == [((1, 1), 5)]


def test_pure_power_rejects_other_shapes():
    poly = product(F5, 0, [(1, 1), (1, 1), (2, 1)])
    assert F5._pure_power(0, poly) is None
    assert F5.factor(0, poly) == [((1, 1), 2), ((2, 1), 1)]


def test_factor_results_are_independent_copies():
    poly = reduce_mod_p(F5, (1, 0, 1))
    first = F5.factor(0, poly)
    first.append(((0, 1), 9))
    assert F5.factor(0, poly) == [((2, 1), 1), ((3, 1), 1)]
