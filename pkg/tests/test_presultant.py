import random
from fractions import Fraction

import pytest

from omvals.examples import ex4, ex5
from omvals.exceptions import NotMonic, NotPrime, ZeroLeadingCoefficient
from omvals.oracle import naive_res_valuation
from omvals.polyz import INF, mul
from omvals.presultant import (
    normalize_nonmonic_res,
    p_resultant,
    res_valuation_bound,
    resultant_run,
)


@pytest.mark.parametrize(
    "f, g, p, expected",
    [
        ((1, 0, 1), (-2, 1), 5, 1),
        ((0, 1), (1, 1), 3, 0),
        ((5, 0, 1), (25, 0, 1), 5, 2),
        ((1, 0, 1), (1, 0, 1), 5, INF),
    ],
)
def test_small_resultants(f, g, p, expected):
    assert p_resultant(f, g, p) == expected


def test_shorter_polynomial_goes_first():
    run = resultant_run((1, 0, 1), (-2, 1), 5)
    assert run.swapped
    assert run.value == 1
    assert run.bound == 3


def test_constant_polynomial():
    assert p_resultant((1,), (1, 0, 1), 5) == 0


def test_res_valuation_bound():
    assert res_valuation_bound((1, 0, 1), (-2, 1), 5) == 3


def test_shared_factor_trips_the_bound():
    common = (3, 1)
    f = mul(common, (1, 0, 1))
    g = mul(common, (2, 1))
    assert p_resultant(f, g, 3) == INF
    assert p_resultant(f, g, 7) == INF


def test_agrees_with_oracle_on_random_pairs():
    rng = random.Random(7)
    for _ in range(25):
        p = rng.choice([2, 3, 5])
        f = tuple(rng.randint(-40, 40) for _ in range(rng.randint(1, 4))) + (1,)
        g = tuple(rng.randint(-40, 40) for _ in range(rng.randint(1, 4))) + (1,)
        assert p_resultant(f, g, p) == naive_res_valuation(f, g, p), (f, g, p)


def test_agrees_with_oracle_when_types_are_shared():
    p = 2
    f = mul((2, 0, 1), (6, 1))
    g = mul((10, 0, 1), (4, 0, 0, 1))
    assert p_resultant(f, g, p) == naive_res_valuation(f, g, p)


@pytest.mark.parametrize(
    "f, g, p",
    [
        ((-1, 2), (1, 0, 1), 2),
        ((3, 0, 2), (1, 4), 2),
        ((5, 1, 10), (15, 0, 3), 5),
    ],
)
def test_normalize_nonmonic_res(f, g, p):
    f_hat, g_hat, offset = normalize_nonmonic_res(f, g, p)
    assert f_hat.is_monic and g_hat.is_monic
    assert naive_res_valuation(f_hat, g_hat, p) == naive_res_valuation(f, g, p) + offset


def test_normalize_rational_coefficients():
    # Res(x - 1/2, x) = 1/2 up to sign
    f_hat, g_hat, offset = normalize_nonmonic_res((Fraction(-1, 2), 1), (0, 1), 2)
    assert naive_res_valuation(f_hat, g_hat, 2) - offset == -1


def test_normalize_errors():
    with pytest.raises(ZeroLeadingCoefficient):
        normalize_nonmonic_res((1, 0), (1, 1), 3)


def test_input_checks():
    with pytest.raises(NotMonic):
        p_resultant((1, 2), (1, 1), 3)
    with pytest.raises(NotPrime):
        p_resultant((1, 1), (2, 1), 9)


@pytest.mark.slow
def test_ex4():
    f, g = ex4(7, 3)
    assert p_resultant(f, g, 7) == 300


@pytest.mark.slow
def test_ex5():
    f, g = ex5(5, 5, 6)
    assert p_resultant(f, g, 5) == 9557


@pytest.mark.slow
@pytest.mark.parametrize("p, i, j, expected", [(5, 6, 7, 57343)])
def test_ex5_table(p, i, j, expected):
    f, g = ex5(p, i, j)
    assert p_resultant(f, g, p) == expected


@pytest.mark.slow
def test_ex4_larger_prime():
    f, g = ex4(11, 5)
    assert p_resultant(f, g, 11) == 500


def _random_monic(rng, p, max_degree, bound):
    deg = rng.randint(1, max_degree)
    coeffs = []
    for _ in range(deg):
        scale = p ** rng.randint(0, 3)
        if scale > bound:
            scale = 1
        coeffs.append(scale * rng.randint(-(bound // scale), bound // scale))
    return tuple(coeffs) + (1,)


def _oracle_sweep(seed, count, primes, max_degree, bound):
    rng = random.Random(seed)
    for _ in range(count):
        p = rng.choice(primes)
        f = _random_monic(rng, p, max_degree, bound)
        g = _random_monic(rng, p, max_degree, bound)
        assert p_resultant(f, g, p) == naive_res_valuation(f, g, p), (f, g, p)


def test_oracle_sweep_small():
    _oracle_sweep(17, 30, [2, 3, 5, 7, 13, 101], 5, 200)


@pytest.mark.slow
def test_oracle_sweep_full():
    _oracle_sweep(4096, 200, [2, 3, 5, 7, 13, 101], 12, 10**4)


def test_symmetry():
    rng = random.Random(99)
    for _ in range(20):
        p = rng.choice([2, 3, 5])
        f = _random_monic(rng, p, 5, 100)
        g = _random_monic(rng, p, 5, 100)
        assert p_resultant(f, g, p) == p_resultant(g, f, p), (f, g, p)


def test_multiplicativity():
    rng = random.Random(5)
    for _ in range(15):
        p = rng.choice([2, 3, 5])
        f, g, h = (_random_monic(rng, p, 4, 100) for _ in range(3))
        expected = naive_res_valuation(f, mul(g, h), p)
        split = p_resultant(f, g, p) + p_resultant(f, h, p)
        assert p_resultant(f, mul(g, h), p) == split == expected, (f, g, h, p)
