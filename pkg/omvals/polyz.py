"""
Integer polynomials with p-adic precision management.

Polynomials are dense coefficient sequences over the integers, in ascending
order of degree, with the zero polynomial represented by the empty sequence
and no trailing zeros otherwise. The low-level helpers work on plain tuples so
the hot loops of the engine avoid object overhead; ``PIntPoly`` is the value
type exchanged at module boundaries and carries the precision tag.
"""

import logging
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

from pydantic import TypeAdapter, ValidationError
from sympy import isprime, multiplicity

from omvals.exceptions import (
    ChainDegreeMismatch,
    InsufficientPrecision,
    NotMonic,
    NotPrime,
    PolynomialParseError,
    ZeroLeadingCoefficient,
)

logger = logging.getLogger(__name__)

INF = math.inf

Val = Union[int, float]
Coeffs = Tuple[int, ...]


class PVal(NamedTuple):
    """A valuation computed at finite precision: exact, or only a lower bound."""
    value: Val
    exact: bool


def vp_int(p: int, n: int) -> Val:
    """Largest k with p^k | n; infinity for n = 0."""
    if n == 0:
        return INF
    if n % p:
        return 0
    return int(multiplicity(p, abs(n)))


def require_prime(p: int) -> int:
    if not isprime(p):
        raise NotPrime(f"{p} is not a prime number")
    return p


def smallest_power_at_least(p: int, log_value: float, exact: int) -> int:
    """Smallest k >= 0 with p^k >= exact, seeded from a floating logarithm."""
    k = max(0, math.ceil(log_value) - 1)
    while p**k < exact:
        k += 1
    while k > 0 and p ** (k - 1) >= exact:
        k -= 1
    return k


def pval_min(values: Iterable[PVal]) -> PVal:
    """
    Minimum of precision-tracked values.

    The result is exact when the smallest exact value does not exceed any
    lower bound; otherwise only the smallest bound is known.
    """
    exact_min: Val = INF
    bound_min: Val = INF
    for v in values:
        if v.exact:
            exact_min = min(exact_min, v.value)
        else:
            bound_min = min(bound_min, v.value)
    if exact_min <= bound_min:
        return PVal(exact_min, True)
    return PVal(bound_min, False)


def require_exact(v: PVal, what: str = "value") -> Val:
    if not v.exact:
        raise InsufficientPrecision(f"{what} only known to be >= {v.value}")
    return v.value


# ============================================================================
# Coefficient tuple helpers
# ============================================================================

def trim(a: Iterable[int], modulus: Optional[int] = None) -> Coeffs:
    """Normalize to a tuple without trailing zeros, reducing modulo ``modulus`` if given."""
    if modulus is not None:
        a = [c % modulus for c in a]
    else:
        a = list(a)
    while a and not a[-1]:
        a.pop()
    return tuple(a)


def degree(a: Sequence[int]) -> int:
    return len(a) - 1


def add(a: Sequence[int], b: Sequence[int], modulus: Optional[int] = None) -> Coeffs:
    if len(a) < len(b):
        a, b = b, a
    c = list(a)
    for i, bi in enumerate(b):
        c[i] += bi
    return trim(c, modulus)


def sub(a: Sequence[int], b: Sequence[int], modulus: Optional[int] = None) -> Coeffs:
    c = list(a) + [0] * max(0, len(b) - len(a))
    for i, bi in enumerate(b):
        c[i] -= bi
    return trim(c, modulus)


def scale(a: Sequence[int], k: int, modulus: Optional[int] = None) -> Coeffs:
    return trim((k * c for c in a), modulus)


def mul(a: Sequence[int], b: Sequence[int], modulus: Optional[int] = None) -> Coeffs:
    if not a or not b:
        return ()
    c = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                c[i + j] += ai * bj
    return trim(c, modulus)


def power(a: Sequence[int], k: int, modulus: Optional[int] = None) -> Coeffs:
    result: Coeffs = (1,)
    base = trim(a, modulus)
    while k:
        if k & 1:
            result = mul(result, base, modulus)
        k >>= 1
        if k:
            base = mul(base, base, modulus)
    return result


def derivative(a: Sequence[int]) -> Coeffs:
    return trim(i * a[i] for i in range(1, len(a)))


def shift(a: Sequence[int], c: int) -> Coeffs:
    """Return a(x + c) by Horner's rule."""
    result: Coeffs = ()
    for coefficient in reversed(a):
        result = add(mul(result, (c, 1)), (coefficient,))
    return result


def monomial(k: int, c: int = 1) -> Coeffs:
    return trim([0] * k + [c])


def is_monic(a: Sequence[int]) -> bool:
    return bool(a) and a[-1] == 1


def divmod_monic(
    g: Sequence[int], phi: Sequence[int], modulus: Optional[int] = None
) -> Tuple[Coeffs, Coeffs]:
    """Quotient and remainder of g by the monic polynomial phi."""
    m = len(phi) - 1
    r = list(g)
    if len(r) <= m:
        return (), trim(r, modulus)
    q = [0] * (len(r) - m)
    low = phi[:m]
    for k in range(len(r) - 1, m - 1, -1):
        c = r[k]
        if modulus is not None:
            c %= modulus
        if c:
            q[k - m] = c
            base = k - m
            for j, pj in enumerate(low):
                if pj:
                    r[base + j] -= c * pj
    return trim(q, modulus), trim(r[:m], modulus)


@dataclass(frozen=True)
class ExpansionResult:
    """Canonical phi-expansion g = sum a_s phi^s, deg a_s < deg phi."""
    phi: Coeffs
    coeffs: Tuple[Coeffs, ...]

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, s: int) -> Coeffs:
        return self.coeffs[s] if s < len(self.coeffs) else ()

    def reconstruct(self) -> Coeffs:
        result: Coeffs = ()
        for a in reversed(self.coeffs):
            result = add(mul(result, self.phi), a)
        return result


def as_coeffs(g: Union["PIntPoly", Sequence[int]]) -> Coeffs:
    if isinstance(g, PIntPoly):
        return g.coeffs
    return trim(g)


def phi_expansion(
    g: Union["PIntPoly", Sequence[int]],
    phi: Union["PIntPoly", Sequence[int]],
    count: Optional[int] = None,
    modulus: Optional[int] = None,
) -> ExpansionResult:
    """
    Canonical phi-expansion of g by repeated division with remainder.

    Args:
        g: Polynomial to expand
        phi: Monic divisor of degree >= 1
        count: If given, only a_0 .. a_count are produced
        modulus: Optional p^nu; all arithmetic is then done modulo it

    Returns:
        ExpansionResult holding the coefficients a_s
    """
    g, phi = as_coeffs(g), as_coeffs(phi)
    if not is_monic(phi) or len(phi) < 2:
        raise NotMonic(f"expansion divisor must be monic of degree >= 1, got {phi}")
    coeffs: List[Coeffs] = []
    rest = trim(g, modulus)
    while rest and (count is None or len(coeffs) <= count):
        rest, a = divmod_monic(rest, phi, modulus)
        coeffs.append(a)
    return ExpansionResult(phi, tuple(coeffs))


def multiadic_expansion(
    g: Union["PIntPoly", Sequence[int]],
    chain: Sequence[Sequence[int]],
    modulus: Optional[int] = None,
) -> Dict[Tuple[int, ...], Coeffs]:
    """
    (phi_1, ..., phi_r)-multiadic expansion of g.

    Returns a mapping from exponent tuples (j_1, ..., j_r) to the coefficient
    c_J of degree < deg phi_1, with g = sum c_J phi_1^j_1 ... phi_r^j_r.
    Zero coefficients are omitted.
    """
    chain = [as_coeffs(phi) for phi in chain]
    for lower, upper in zip(chain, chain[1:]):
        m, big_m = len(lower) - 1, len(upper) - 1
        if m >= big_m or big_m % m:
            raise ChainDegreeMismatch(f"chain degrees {m} and {big_m} do not divide properly")

    def expand(poly: Coeffs, depth: int) -> Dict[Tuple[int, ...], Coeffs]:
        if depth == 0:
            return {(): poly} if poly else {}
        terms: Dict[Tuple[int, ...], Coeffs] = {}
        for s, a in enumerate(phi_expansion(poly, chain[depth - 1], modulus=modulus).coeffs):
            for key, c in expand(a, depth - 1).items():
                terms[key + (s,)] = c
        return terms

    return expand(trim(g, modulus), len(chain))


def reduce_mod_power(g: Union["PIntPoly", Sequence[int]], p: int, m: int) -> "PIntPoly":
    """Replace the coefficients by their canonical residues in [0, p^m)."""
    if m < 1:
        raise ValueError(f"precision exponent must be >= 1, got {m}")
    current = g.precision if isinstance(g, PIntPoly) else None
    if current is not None and current <= m:
        return g
    return PIntPoly(trim(as_coeffs(g), p**m), m)


# ============================================================================
# PIntPoly and the text grammar
# ============================================================================

_TERM = re.compile(
    r"(?P<sign>[+-])(?:"
    r"(?P<coef>\d+(?:/\d+)?)(?P<mono>\*?x(?:(?:\^|\*\*)(?P<exp1>\d+))?)?"
    r"|x(?:(?:\^|\*\*)(?P<exp2>\d+))?"
    r")"
)


def parse_rational_polynomial(text: str) -> List[Fraction]:
    """Parse the polynomial grammar into ascending rational coefficients."""
    compact = re.sub(r"\s+", "", text)
    if not compact:
        raise PolynomialParseError("empty polynomial")
    if compact[0] not in "+-":
        compact = "+" + compact
    coeffs: Dict[int, Fraction] = {}
    pos = 0
    while pos < len(compact):
        match = _TERM.match(compact, pos)
        if match is None:
            raise PolynomialParseError(f"cannot parse {text!r} at position {pos}")
        sign = -1 if match.group("sign") == "-" else 1
        if match.group("coef") is not None:
            c = Fraction(match.group("coef"))
            k = int(match.group("exp1") or 1) if match.group("mono") else 0
        else:
            c = Fraction(1)
            k = int(match.group("exp2") or 1)
        coeffs[k] = coeffs.get(k, Fraction(0)) + sign * c
        pos = match.end()
    top = max(coeffs)
    dense = [coeffs.get(k, Fraction(0)) for k in range(top + 1)]
    while dense and dense[-1] == 0:
        dense.pop()
    return dense


_COEFF_LIST = TypeAdapter(List[Union[int, str]])


def load_rational_coefficients(path: Union[str, Path]) -> List[Fraction]:
    """Read a JSON array of decimal coefficient strings (ascending degree)."""
    try:
        raw = _COEFF_LIST.validate_json(Path(path).read_text())
        dense = [Fraction(str(c).strip()) for c in raw]
    except (OSError, ValidationError, ValueError, ZeroDivisionError) as e:
        raise PolynomialParseError(f"invalid coefficient file {path}: {e}") from e
    while dense and dense[-1] == 0:
        dense.pop()
    return dense


def to_integers(dense: Sequence[Fraction], source: str) -> Coeffs:
    if any(c.denominator != 1 for c in dense):
        raise PolynomialParseError(f"{source} has non-integral coefficients; use --normalize")
    return tuple(int(c) for c in dense)


@dataclass(frozen=True)
class PIntPoly:
    """
    Dense integer polynomial with a precision tag.

    ``precision`` is None for exact coefficients, or nu when the coefficients
    are canonical residues modulo p^nu.
    """
    coeffs: Coeffs
    precision: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "coeffs", trim(self.coeffs))

    @classmethod
    def parse(cls, text: str) -> "PIntPoly":
        return cls(to_integers(parse_rational_polynomial(text), repr(text)))

    @classmethod
    def load(cls, path: Union[str, Path]) -> "PIntPoly":
        return cls(to_integers(load_rational_coefficients(path), str(path)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_monic(self) -> bool:
        return is_monic(self.coeffs)

    @property
    def leading(self) -> int:
        if not self.coeffs:
            raise ZeroLeadingCoefficient("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def require_monic(self, name: str = "polynomial") -> "PIntPoly":
        if not self.is_monic:
            raise NotMonic(f"{name} is not monic (leading coefficient {self.coeffs[-1:] or 0})")
        return self

    def derivative(self) -> "PIntPoly":
        return PIntPoly(derivative(self.coeffs))

    def reduce(self, p: int, m: int) -> "PIntPoly":
        return reduce_mod_power(self, p, m)

    def __mul__(self, other: "PIntPoly") -> "PIntPoly":
        return PIntPoly(mul(self.coeffs, other.coeffs))

    def __str__(self) -> str:
        return format_polynomial(self.coeffs)


def format_polynomial(a: Sequence[int]) -> str:
    """Render coefficients in the input grammar, highest degree first."""
    if not a:
        return "0"
    parts = []
    for k in range(len(a) - 1, -1, -1):
        c = a[k]
        if not c:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            power_part = "x" if k == 1 else f"x^{k}"
            body = power_part if mag == 1 else f"{mag}*{power_part}"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    text = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text
