"""
Exact resultants and discriminants over the integers.

This is the slow reference path used to check the engine and as the
benchmark baseline; it goes through sympy's exact polynomial arithmetic.
"""

import logging
from typing import Sequence, Union

from sympy import Poly, symbols

from omvals.exceptions import ZeroPolynomial
from omvals.polyz import PIntPoly, Val, as_coeffs, vp_int

logger = logging.getLogger(__name__)

_x = symbols("x")


def _poly(coeffs: Sequence[int]) -> Poly:
    return Poly(list(reversed(coeffs)), _x, domain="ZZ")


def naive_resultant(f: Union[PIntPoly, Sequence[int]], g: Union[PIntPoly, Sequence[int]]) -> int:
    """
    Res(f, g) = a^m prod g(alpha) over the roots alpha of f.

    Raises:
        ZeroPolynomial: f or g is zero
    """
    f, g = as_coeffs(f), as_coeffs(g)
    if not f or not g:
        raise ZeroPolynomial("resultant of the zero polynomial")
    n, m = len(f) - 1, len(g) - 1
    if m == 0:
        return g[0] ** n
    if n == 0:
        return f[0] ** m
    return int(_poly(f).resultant(_poly(g)))


def naive_discriminant(g: Union[PIntPoly, Sequence[int]]) -> int:
    """Disc(g) = (-1)^(n(n-1)/2) Res(g, g') / a_n; 1 for linear g."""
    g = as_coeffs(g)
    if len(g) < 2:
        raise ZeroPolynomial("discriminant needs degree >= 1")
    if len(g) == 2:
        return 1
    return int(_poly(g).discriminant())


def naive_disc_valuation(g: Union[PIntPoly, Sequence[int]], p: int) -> Val:
    return vp_int(p, naive_discriminant(g))


def naive_res_valuation(
    f: Union[PIntPoly, Sequence[int]], g: Union[PIntPoly, Sequence[int]], p: int
) -> Val:
    return vp_int(p, naive_resultant(f, g))
