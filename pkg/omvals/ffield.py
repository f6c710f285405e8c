"""
Finite prime fields, residue-field towers and polynomial factorization.

A tower F_0 = F_p, F_{i+1} = F_i[y]/(psi_i) is stored as the tuple of its
defining polynomials. Elements are nested: level 0 elements are integers in
[0, p), level i+1 elements are tuples of length deg psi_i holding the
coefficients (ascending, in z_i) of a level i polynomial. Polynomials over a
level are tuples of level elements, ascending, without trailing zeros.

Factorization runs squarefree decomposition, distinct-degree splitting and
randomized equal-degree splitting. The random source of every call is seeded
from a hash of the input and the global seed, so results are reproducible.
Results are memoized, and a pure power (y + s)^n with p not dividing n is
recognized before any splitting.
"""

import hashlib
import logging
import random
from dataclasses import dataclass, field
from functools import lru_cache, reduce
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple, Union

from omvals import config
from omvals.exceptions import NotMonic, PsiIsY, ReduciblePsi, ZeroPolynomial

logger = logging.getLogger(__name__)

Elem = Union[int, Tuple["Elem", ...]]
FFPoly = Tuple[Elem, ...]


@dataclass(frozen=True)
class TowerField:
    """Immutable residue field tower over F_p."""
    p: int
    psis: Tuple[FFPoly, ...] = ()
    _zeros: Tuple[Elem, ...] = field(init=False, repr=False, compare=False)
    _ones: Tuple[Elem, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        zeros: List[Elem] = [0]
        ones: List[Elem] = [1]
        for psi in self.psis:
            f = len(psi) - 1
            zeros.append((zeros[-1],) * f)
            ones.append((ones[-1],) + (zeros[-2],) * (f - 1))
        object.__setattr__(self, "_zeros", tuple(zeros))
        object.__setattr__(self, "_ones", tuple(ones))

    # ------------------------------------------------------------------
    # Structure
    # ------------------------------------------------------------------

    @property
    def top(self) -> int:
        """Index of the top level (number of extensions)."""
        return len(self.psis)

    def degree(self, i: int) -> int:
        """f_i = deg psi_i."""
        return len(self.psis[i]) - 1

    def absolute_degree(self, level: int) -> int:
        d = 1
        for i in range(level):
            d *= self.degree(i)
        return d

    def cardinality(self, level: int) -> int:
        return self.p ** self.absolute_degree(level)

    def zero(self, level: int) -> Elem:
        return self._zeros[level]

    def one(self, level: int) -> Elem:
        return self._ones[level]

    def is_zero(self, level: int, a: Elem) -> bool:
        return a == self._zeros[level]

    def embed(self, level: int, a: Elem) -> Elem:
        """Image of a level element in level + 1."""
        return (a,) + (self._zeros[level],) * (self.degree(level) - 1)

    def generator(self, i: int) -> Elem:
        """z_i, the class of y in level i + 1."""
        psi = self.psis[i]
        if len(psi) == 2:
            return (self.neg(i, psi[0]),)
        return (self._zeros[i], self._ones[i]) + (self._zeros[i],) * (len(psi) - 3)

    def from_int(self, level: int, n: int) -> Elem:
        a: Elem = n % self.p
        for i in range(level):
            a = self.embed(i, a)
        return a

    # ------------------------------------------------------------------
    # Element arithmetic
    # ------------------------------------------------------------------

    def add(self, level: int, a: Elem, b: Elem) -> Elem:
        if level == 0:
            return (a + b) % self.p
        return tuple(self.add(level - 1, x, y) for x, y in zip(a, b))

    def sub(self, level: int, a: Elem, b: Elem) -> Elem:
        if level == 0:
            return (a - b) % self.p
        return tuple(self.sub(level - 1, x, y) for x, y in zip(a, b))

    def neg(self, level: int, a: Elem) -> Elem:
        if level == 0:
            return -a % self.p
        return tuple(self.neg(level - 1, x) for x in a)

    def scale_int(self, level: int, a: Elem, n: int) -> Elem:
        if level == 0:
            return a * n % self.p
        return tuple(self.scale_int(level - 1, x, n) for x in a)

    def mul(self, level: int, a: Elem, b: Elem) -> Elem:
        if level == 0:
            return a * b % self.p
        below = level - 1
        product = self.poly_mul(below, self.poly_trim(below, a), self.poly_trim(below, b))
        return self._pad(below, self.poly_rem_monic(below, product, self.psis[below]))

    def inv(self, level: int, a: Elem) -> Elem:
        if self.is_zero(level, a):
            raise ZeroDivisionError("inverse of zero in a finite field")
        if level == 0:
            return pow(a, -1, self.p)
        below = level - 1
        g, s, _ = self.poly_xgcd(below, self.poly_trim(below, a), self.psis[below])
        # g is a non-zero constant because psi is irreducible
        s = self.poly_scale(below, s, self.inv(below, g[0]))
        return self._pad(below, s)

    def pow(self, level: int, a: Elem, n: int) -> Elem:
        if n < 0:
            a, n = self.inv(level, a), -n
        result = self.one(level)
        while n:
            if n & 1:
                result = self.mul(level, result, a)
            n >>= 1
            if n:
                a = self.mul(level, a, a)
        return result

    def random_element(self, level: int, rng: random.Random) -> Elem:
        if level == 0:
            return rng.randrange(self.p)
        return tuple(self.random_element(level - 1, rng) for _ in range(self.degree(level - 1)))

    def _pad(self, level: int, a: FFPoly) -> Elem:
        """Turn a level polynomial of degree < f_level into a level + 1 element."""
        return tuple(a) + (self._zeros[level],) * (self.degree(level) - len(a))

    # ------------------------------------------------------------------
    # Polynomials over a level
    # ------------------------------------------------------------------

    def poly_trim(self, level: int, a: Sequence[Elem]) -> FFPoly:
        a = list(a)
        zero = self._zeros[level]
        while a and a[-1] == zero:
            a.pop()
        return tuple(a)

    def poly_add(self, level: int, a: FFPoly, b: FFPoly) -> FFPoly:
        if len(a) < len(b):
            a, b = b, a
        c = list(a)
        for i, y in enumerate(b):
            c[i] = self.add(level, c[i], y)
        return self.poly_trim(level, c)

    def poly_sub(self, level: int, a: FFPoly, b: FFPoly) -> FFPoly:
        return self.poly_add(level, a, tuple(self.neg(level, y) for y in b))

    def poly_scale(self, level: int, a: FFPoly, c: Elem) -> FFPoly:
        return self.poly_trim(level, (self.mul(level, x, c) for x in a))

    def poly_mul(self, level: int, a: FFPoly, b: FFPoly) -> FFPoly:
        if not a or not b:
            return ()
        zero = self._zeros[level]
        c = [zero] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x != zero:
                for j, y in enumerate(b):
                    if y != zero:
                        c[i + j] = self.add(level, c[i + j], self.mul(level, x, y))
        return self.poly_trim(level, c)

    def poly_divmod(self, level: int, a: FFPoly, b: FFPoly) -> Tuple[FFPoly, FFPoly]:
        if not b:
            raise ZeroPolynomial("division by the zero polynomial")
        lead_inv = self.inv(level, b[-1])
        r = list(a)
        m = len(b) - 1
        if len(r) <= m:
            return (), self.poly_trim(level, r)
        zero = self._zeros[level]
        q = [zero] * (len(r) - m)
        for k in range(len(r) - 1, m - 1, -1):
            c = r[k]
            if c != zero:
                c = self.mul(level, c, lead_inv)
                q[k - m] = c
                for j in range(m + 1):
                    r[k - m + j] = self.sub(level, r[k - m + j], self.mul(level, c, b[j]))
        return self.poly_trim(level, q), self.poly_trim(level, r[:m])

    def poly_rem_monic(self, level: int, a: FFPoly, b: FFPoly) -> FFPoly:
        return self.poly_divmod(level, a, b)[1]

    def poly_monic(self, level: int, a: FFPoly) -> FFPoly:
        if not a:
            return a
        return self.poly_scale(level, a, self.inv(level, a[-1]))

    def poly_gcd(self, level: int, a: FFPoly, b: FFPoly) -> FFPoly:
        while b:
            a, b = b, self.poly_divmod(level, a, b)[1]
        return self.poly_monic(level, a)

    def poly_xgcd(self, level: int, a: FFPoly, b: FFPoly) -> Tuple[FFPoly, FFPoly, FFPoly]:
        """Return (g, s, t) with s*a + t*b = g (g not normalized)."""
        one = (self._ones[level],)
        r0, r1, s0, s1, t0, t1 = a, b, one, (), (), one
        while r1:
            q, r = self.poly_divmod(level, r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, self.poly_sub(level, s0, self.poly_mul(level, q, s1))
            t0, t1 = t1, self.poly_sub(level, t0, self.poly_mul(level, q, t1))
        return r0, s0, t0

    def poly_powmod(self, level: int, a: FFPoly, n: int, modulus: FFPoly) -> FFPoly:
        result: FFPoly = (self._ones[level],)
        a = self.poly_rem_monic(level, a, modulus)
        while n:
            if n & 1:
                result = self.poly_rem_monic(level, self.poly_mul(level, result, a), modulus)
            n >>= 1
            if n:
                a = self.poly_rem_monic(level, self.poly_mul(level, a, a), modulus)
        return result

    def poly_derivative(self, level: int, a: FFPoly) -> FFPoly:
        return self.poly_trim(level, (self.scale_int(level, a[i], i) for i in range(1, len(a))))

    def poly_x(self, level: int) -> FFPoly:
        return (self._zeros[level], self._ones[level])

    # ------------------------------------------------------------------
    # Factorization
    # ------------------------------------------------------------------

    def factor(self, level: int, poly: Sequence[Elem]) -> List[Tuple[FFPoly, int]]:
        """
        Factor a polynomial over the given level into monic irreducibles.
        Results are memoized per tower, level, monic input and global seed.

        Returns:
            List of (factor, multiplicity), sorted by degree then coefficients
        """
        poly = self.poly_trim(level, poly)
        if not poly:
            raise ZeroPolynomial("cannot factor the zero polynomial")
        monic = self.poly_monic(level, poly)
        return list(_factor_monic(self, level, monic, config.global_seed()))

    def _factor_uncached(self, level: int, monic: FFPoly) -> Tuple[Tuple[FFPoly, int], ...]:
        power = self._pure_power(level, monic)
        if power is not None:
            return (power,)
        rng = random.Random(self._seed(level, monic))
        result: Dict[FFPoly, int] = {}
        for part, mult in self._squarefree(level, monic):
            for block, d in self._distinct_degree(level, part):
                for irreducible in self._equal_degree(level, block, d, rng):
                    result[irreducible] = result.get(irreducible, 0) + mult
        return tuple(sorted(result.items(), key=lambda item: (len(item[0]), item[0])))

    def _pure_power(self, level: int, f: FFPoly) -> Optional[Tuple[FFPoly, int]]:
        """(y + s, n) when the monic f equals (y + s)^n and p does not divide n."""
        n = len(f) - 1
        if n < 1 or n % self.p == 0:
            return None
        s = self.mul(level, f[n - 1], self.inv(level, self.from_int(level, n)))
        term = self.one(level)
        for k in range(n - 1, -1, -1):
            term = self.mul(level, term, s)
            if f[k] != self.scale_int(level, term, comb(n, k)):
                return None
        return (self.poly_trim(level, (s, self.one(level))), n)

    def _seed(self, level: int, poly: FFPoly) -> int:
        payload = repr((self.p, self.psis, level, poly, config.global_seed())).encode()
        return int.from_bytes(hashlib.sha256(payload).digest()[:8], "big")

    def _pth_root(self, level: int, a: Elem) -> Elem:
        return self.pow(level, a, self.cardinality(level) // self.p)

    def _squarefree(self, level: int, f: FFPoly) -> List[Tuple[FFPoly, int]]:
        out: List[Tuple[FFPoly, int]] = []
        if len(f) <= 1:
            return out
        c = self.poly_gcd(level, f, self.poly_derivative(level, f))
        w = self.poly_divmod(level, f, c)[0]
        i = 1
        while len(w) > 1:
            y = self.poly_gcd(level, w, c)
            fac = self.poly_divmod(level, w, y)[0]
            if len(fac) > 1:
                out.append((fac, i))
            w = y
            c = self.poly_divmod(level, c, y)[0]
            i += 1
        if len(c) > 1:
            p = self.p
            root = self.poly_trim(
                level, (self._pth_root(level, c[k]) for k in range(0, len(c), p))
            )
            out.extend((g, m * p) for g, m in self._squarefree(level, root))
        return out

    def _distinct_degree(self, level: int, f: FFPoly) -> List[Tuple[FFPoly, int]]:
        q = self.cardinality(level)
        x = self.poly_x(level)
        out: List[Tuple[FFPoly, int]] = []
        h = x
        d = 1
        while len(f) - 1 >= 2 * d:
            h = self.poly_powmod(level, h, q, f)
            g = self.poly_gcd(level, f, self.poly_sub(level, h, x))
            if len(g) > 1:
                out.append((g, d))
                f = self.poly_divmod(level, f, g)[0]
                h = self.poly_rem_monic(level, h, f)
            d += 1
        if len(f) > 1:
            out.append((f, len(f) - 1))
        return out

    def _equal_degree(
        self, level: int, f: FFPoly, d: int, rng: random.Random
    ) -> List[FFPoly]:
        n = len(f) - 1
        if n == d:
            return [f]
        q = self.cardinality(level)
        while True:
            a = self.poly_trim(level, (self.random_element(level, rng) for _ in range(n)))
            if len(a) < 2:
                continue
            if q % 2:
                b = self.poly_sub(
                    level, self.poly_powmod(level, a, (q**d - 1) // 2, f), (self._ones[level],)
                )
            else:
                b = self._trace(level, a, d, f)
            g = self.poly_gcd(level, f, b)
            if 1 < len(g) < len(f):
                rest = self.poly_divmod(level, f, g)[0]
                return self._equal_degree(level, g, d, rng) + self._equal_degree(
                    level, rest, d, rng
                )

    def _trace(self, level: int, a: FFPoly, d: int, f: FFPoly) -> FFPoly:
        """Absolute trace a + a^2 + ... + a^(2^(k-1)) modulo f, where q^d = 2^k."""
        k = self.absolute_degree(level) * d
        term = self.poly_rem_monic(level, a, f)
        total = term
        for _ in range(k - 1):
            term = self.poly_rem_monic(level, self.poly_mul(level, term, term), f)
            total = self.poly_add(level, total, term)
        return total

    def ord(self, level: int, poly: Sequence[Elem], psi: FFPoly) -> int:
        """Largest k with psi^k dividing poly."""
        poly = self.poly_trim(level, poly)
        if not poly:
            raise ZeroPolynomial("order of the zero polynomial is undefined")
        k = 0
        while True:
            q, r = self.poly_divmod(level, poly, psi)
            if r:
                return k
            poly, k = q, k + 1

    # ------------------------------------------------------------------
    # Presentation
    # ------------------------------------------------------------------

    def to_nested(self, level: int, a: Elem):
        """JSON-friendly nested lists of integers."""
        if level == 0:
            return a
        return [self.to_nested(level - 1, x) for x in a]

    def format_element(self, level: int, a: Elem) -> str:
        if level == 0:
            return str(a)
        var = f"z{level - 1}"
        terms = []
        for k, c in enumerate(a):
            if self.is_zero(level - 1, c):
                continue
            body = self.format_element(level - 1, c)
            if level - 1 > 0 and k:
                body = f"({body})"
            if k == 0:
                terms.append(body)
            elif body == "1":
                terms.append(var if k == 1 else f"{var}^{k}")
            else:
                terms.append(f"{body}*{var}" if k == 1 else f"{body}*{var}^{k}")
        return " + ".join(reversed(terms)) or "0"

    def format_poly(self, level: int, a: FFPoly, var: str = "y") -> str:
        terms = []
        for k, c in enumerate(a):
            if self.is_zero(level, c):
                continue
            body = self.format_element(level, c)
            if " " in body and k:
                body = f"({body})"
            if k == 0:
                terms.append(body)
            elif body == "1":
                terms.append(var if k == 1 else f"{var}^{k}")
            else:
                terms.append(f"{body}*{var}" if k == 1 else f"{body}*{var}^{k}")
        return " + ".join(reversed(terms)) or "0"


@lru_cache(maxsize=4096)
def _factor_monic(
    tower: TowerField, level: int, monic: FFPoly, seed: int
) -> Tuple[Tuple[FFPoly, int], ...]:
    # seed is part of the key only; _seed reads it again from config
    return tower._factor_uncached(level, monic)


def extend_tower(tower: TowerField, psi: Sequence[Elem]) -> TowerField:
    """
    Extend a tower by a monic irreducible polynomial over its top level.

    Raises:
        NotMonic: psi is not monic or has degree < 1
        PsiIsY: psi = y above level zero
        ReduciblePsi: psi factors over the top level
    """
    level = tower.top
    psi = tower.poly_trim(level, psi)
    if len(psi) < 2 or psi[-1] != tower.one(level):
        raise NotMonic(f"extension polynomial must be monic of degree >= 1: {psi}")
    if level > 0 and psi == tower.poly_x(level):
        raise PsiIsY(f"psi = y is not allowed at level {level}")
    factors = tower.factor(level, psi)
    if factors != [(psi, 1)]:
        raise ReduciblePsi(
            f"{tower.format_poly(level, psi)} is reducible over level {level}: "
            f"{[(tower.format_poly(level, g), m) for g, m in factors]}"
        )
    return TowerField(tower.p, tower.psis + (psi,))


def ff_factorize(tower: TowerField, level: int, poly: Sequence[Elem]) -> List[Tuple[FFPoly, int]]:
    return tower.factor(level, poly)


def ff_ord(tower: TowerField, level: int, poly: Sequence[Elem], psi: FFPoly) -> int:
    return tower.ord(level, poly, psi)


def reduce_mod_p(tower: TowerField, coeffs: Sequence[int]) -> FFPoly:
    """Image of an integer polynomial in F_p[y]."""
    return tower.poly_trim(0, (c % tower.p for c in coeffs))


def product(tower: TowerField, level: int, polys: Sequence[FFPoly]) -> FFPoly:
    return reduce(lambda a, b: tower.poly_mul(level, a, b), polys, (tower.one(level),))
