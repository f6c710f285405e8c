import json
import random
from fractions import Fraction

import pytest

from omvals.exceptions import ChainDegreeMismatch, NotMonic, NotPrime, PolynomialParseError
from omvals.polyz import (
    INF,
    PIntPoly,
    PVal,
    add,
    format_polynomial,
    load_rational_coefficients,
    mul,
    multiadic_expansion,
    parse_rational_polynomial,
    phi_expansion,
    power,
    pval_min,
    reduce_mod_power,
    require_prime,
    vp_int,
)


@pytest.mark.parametrize("p, n, expected", [(2, 48, 4), (7, 0, INF), (5, 3**10, 0), (3, -81, 4)])
def test_vp_int(p, n, expected):
    assert vp_int(p, n) == expected


def test_require_prime():
    assert require_prime(101) == 101
    with pytest.raises(NotPrime):
        require_prime(91)


@pytest.mark.parametrize(
    "g, phi, expected",
    [
        ((1, 2, 0, 0, 1), (0, 0, 1), ((1, 2), (), (1,))),
        ((0, 0, 1), (-1, 1), ((1,), (2,), (1,))),
        ((0, 0, 0, 0, 0, 1), (1, 0, 1), ((0, 1), (0, -2), (0, 1))),
    ],
)
def test_phi_expansion(g, phi, expected):
    expansion = phi_expansion(g, phi)
    assert expansion.coeffs == expected
    assert expansion.reconstruct() == g


def test_phi_expansion_count_and_modulus():
    expansion = phi_expansion((1, 2, 0, 0, 1), (0, 0, 1), count=1, modulus=2)
    assert expansion[0] == (1,)
    assert expansion[5] == ()


def test_phi_expansion_requires_monic():
    with pytest.raises(NotMonic):
        phi_expansion((1, 1), (1, 2))


def test_multiadic_expansion_of_x_cubed():
    p = 5
    terms = multiadic_expansion((0, 0, 0, 1), [(0, 1), (p, 0, 1)])
    assert terms == {(1, 1): (1,), (1, 0): (-p,)}


def test_multiadic_expansion_constant_term():
    assert multiadic_expansion((7,), [(0, 0, 1)]) == {(0,): (7,)}


def test_multiadic_expansion_rebuilds_random_polynomials():
    rng = random.Random(1234)
    phi2 = add(power((3, 1), 2), (25,))
    chain = [(3, 1), phi2, add(power(phi2, 2), (5,))]
    for _ in range(20):
        g = tuple(rng.randint(-50, 50) for _ in range(rng.randint(1, 12))) + (1,)
        rebuilt = ()
        for key, c in multiadic_expansion(g, chain).items():
            term = c
            for phi, j in zip(chain, key):
                term = mul(term, power(phi, j))
            rebuilt = add(rebuilt, term)
        assert rebuilt == g


def test_multiadic_chain_degrees_must_divide():
    with pytest.raises(ChainDegreeMismatch):
        multiadic_expansion((0, 0, 0, 0, 1), [(0, 0, 1), (0, 0, 0, 1)])


@pytest.mark.parametrize(
    "g, p, m, expected",
    [((100, 17, 1), 2, 4, (4, 1, 1)), ((-1, 0, 1), 3, 2, (8, 0, 1))],
)
def test_reduce_mod_power(g, p, m, expected):
    reduced = reduce_mod_power(g, p, m)
    assert reduced.coeffs == expected
    assert reduced.precision == m
    assert reduce_mod_power(reduced, p, m + 3) == reduced


def test_pval_min():
    assert pval_min([PVal(3, True), PVal(5, False)]) == PVal(3, True)
    assert pval_min([PVal(6, True), PVal(5, False)]) == PVal(5, False)
    assert pval_min([]) == PVal(INF, True)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("x^2 + 1", [1, 0, 1]),
        ("-x**3+2*x - 7", [-7, 2, 0, -1]),
        ("3/4*x^2 - 1/2", [Fraction(-1, 2), 0, Fraction(3, 4)]),
        ("x + x + 2x", [0, 4]),
        ("5x^2 - 5x^2 + x", [0, 1]),
    ],
)
def test_parse_rational_polynomial(text, expected):
    assert parse_rational_polynomial(text) == expected


@pytest.mark.parametrize("text", ["", "x^", "2y + 1", "x^2 +* 3"])
def test_parse_errors(text):
    with pytest.raises(PolynomialParseError):
        parse_rational_polynomial(text)


def test_pintpoly_parse_and_format():
    g = PIntPoly.parse("x^3 - 2*x + 10")
    assert g.coeffs == (10, -2, 0, 1)
    assert g.degree == 3 and g.is_monic
    assert str(g) == "x^3 - 2*x + 10"
    assert PIntPoly.parse(str(g)) == g


def test_pintpoly_rejects_fractions():
    with pytest.raises(PolynomialParseError):
        PIntPoly.parse("x^2 + 1/2")


def test_require_monic():
    with pytest.raises(NotMonic):
        PIntPoly((1, 0, 3)).require_monic("g")


def test_load_coefficient_file(tmp_path):
    path = tmp_path / "g.json"
    path.write_text(json.dumps(["3", "0", "123456789012345678901234567890", "1"]))
    g = PIntPoly.load(path)
    assert g.coeffs == (3, 0, 123456789012345678901234567890, 1)


def test_load_coefficient_file_errors(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"not": "a list"}')
    with pytest.raises(PolynomialParseError):
        load_rational_coefficients(path)
    with pytest.raises(PolynomialParseError):
        load_rational_coefficients(tmp_path / "missing.json")


def test_format_polynomial():
    assert format_polynomial(()) == "0"
    assert format_polynomial((-1, 0, -3)) == "-3*x^2 - 1"
