"""
OM types: level data, MacLane valuations, residues, representatives and
Okutsu invariants.

Valuations are normalized to integers: v_1 is the p-adic valuation of the
coefficients and v_{i+1} restricted to the constants is e_1...e_i times v_p.
A value computed from coefficients known modulo p^nu is a ``PVal``; a
coefficient that vanishes modulo p^nu only yields the lower bound
nu * e_1...e_{i-1}.

Residues of level j live in F_{j+1}. The residue of a_s at level j >= 1 is
the sum, over the terms b_t phi_j^t of its phi_j-expansion that reach the
minimum value c, of res_{j-1}(b_t) * z_j^((t - c*l_j)/e_j), where l_j is the
inverse of h_j modulo e_j. Negative exponents are allowed; z_j is a unit.
This convention makes the residue multiplicative and is the one ``lift``
inverts, so R_i(phi_{i+1}) = psi_i holds exactly.
"""

import logging
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from math import floor
from typing import List, Optional, Sequence, Tuple

from omvals.exceptions import IncompleteType, InsufficientPrecision, InvariantViolation, PsiIsY
from omvals.ffield import Elem, FFPoly, TowerField, extend_tower
from omvals.polyz import (
    INF,
    Coeffs,
    PVal,
    Val,
    add,
    as_coeffs,
    mul,
    phi_expansion,
    power,
    pval_min,
    require_exact,
    trim,
    vp_int,
)

logger = logging.getLogger(__name__)


@lru_cache(maxsize=256)
def modulus_for(p: int, nu: Optional[int]) -> Optional[int]:
    """p^nu, or None for exact arithmetic."""
    return None if nu is None else p**nu


# ============================================================================
# Levels and types
# ============================================================================

@dataclass(frozen=True)
class Level:
    """
    One level (phi_i, lambda_i = -h/e, psi_i) of an OM type.

    A level is open while its slope and residual factor are still unknown;
    ``omega``, ``alpha`` and ``cs`` are the driver state of the open top level.
    """
    phi: Coeffs
    V: int
    omega: int = 1
    alpha: int = 0
    cs: int = 0
    h: Val = 0
    e: int = 1
    psi: Optional[FFPoly] = None

    @property
    def m(self) -> int:
        return len(self.phi) - 1

    @property
    def f(self) -> int:
        return len(self.psi) - 1 if self.psi is not None else 0

    @property
    def is_closed(self) -> bool:
        return self.psi is not None

    @property
    def slope(self) -> Fraction:
        return Fraction(-self.h, self.e)

    @property
    def ell(self) -> int:
        """Inverse of h modulo e (0 when e = 1)."""
        return pow(self.h, -1, self.e) if self.e > 1 else 0

    @property
    def step(self) -> int:
        """v_{i+1}(phi_i) = e_i V_i + h_i."""
        return self.e * self.V + self.h


@dataclass(frozen=True)
class OMType:
    """
    An OM type over Q_p: psi_0 (held as the first tower level) and a tuple of
    levels, every one closed except possibly the last.
    """
    p: int
    tower: TowerField
    levels: Tuple[Level, ...] = ()

    @classmethod
    def seed(cls, p: int, psi0: FFPoly, omega: int, alpha: int = 0) -> "OMType":
        """Order-0 type for a factor psi0 of f mod p, with phi_1 its integer lift."""
        tower = extend_tower(TowerField(p), psi0)
        phi = trim(tower.psis[0])
        return cls(p, tower, (Level(phi=phi, V=0, omega=omega, alpha=alpha),))

    @property
    def psi0(self) -> FFPoly:
        return self.tower.psis[0]

    @property
    def f0(self) -> int:
        return self.tower.degree(0)

    @property
    def order(self) -> int:
        """Number of closed levels."""
        return sum(1 for lvl in self.levels if lvl.is_closed)

    @property
    def is_open(self) -> bool:
        return bool(self.levels) and not self.levels[-1].is_closed

    @property
    def top(self) -> Level:
        return self.levels[-1]

    def level(self, i: int) -> Level:
        """Level i, counted from 1."""
        return self.levels[i - 1]

    def ramification(self, j: int) -> int:
        """e_1 ... e_j."""
        e = 1
        for lvl in self.levels[:j]:
            e *= lvl.e
        return e

    def residual_degree(self) -> int:
        """f_0 f_1 ... over the levels present in the tower."""
        return self.tower.absolute_degree(self.tower.top)

    def next_V(self) -> int:
        """V of the level following the last closed one."""
        closed = [lvl for lvl in self.levels if lvl.is_closed]
        if not closed:
            return 0
        last = closed[-1]
        return last.e * last.f * last.step

    def next_degree(self) -> int:
        closed = [lvl for lvl in self.levels if lvl.is_closed]
        if not closed:
            return self.f0
        last = closed[-1]
        return last.e * last.f * last.m

    def chain(self) -> Tuple[Coeffs, ...]:
        return tuple(lvl.phi for lvl in self.levels)

    def frame(self) -> "OMType":
        """The type restricted to its closed levels."""
        if self.is_open:
            return replace(self, levels=self.levels[:-1])
        return self

    def close(self, h: int, e: int, psi: FFPoly) -> "OMType":
        """Seal the open top level with slope -h/e and residual factor psi."""
        if not self.is_open:
            raise InvariantViolation("close() needs an open top level")
        tower = extend_tower(self.tower, psi)
        top = replace(self.top, h=h, e=e, psi=tower.psis[-1])
        return replace(self, tower=tower, levels=self.levels[:-1] + (top,))

    def open(self, phi: Sequence[int], omega: int, alpha: int = 0, cs: int = 0) -> "OMType":
        """Append a new open level with the given representative."""
        if self.is_open:
            raise InvariantViolation("open() needs a type whose levels are all closed")
        phi = as_coeffs(phi)
        if len(phi) - 1 != self.next_degree():
            raise InvariantViolation(
                f"representative of degree {len(phi) - 1}, expected {self.next_degree()}"
            )
        level = Level(phi=phi, V=self.next_V(), omega=omega, alpha=alpha, cs=cs)
        return replace(self, levels=self.levels + (level,))

    def refine(self, phi: Sequence[int], cs: int, omega: int, alpha: int = 0) -> "OMType":
        """Replace phi of the open top level, keeping its degree and value."""
        if not self.is_open:
            raise InvariantViolation("refine() needs an open top level")
        phi = as_coeffs(phi)
        if len(phi) != len(self.top.phi):
            raise InvariantViolation("refinement must keep the degree of phi")
        top = replace(self.top, phi=phi, cs=cs, omega=omega, alpha=alpha)
        return replace(self, levels=self.levels[:-1] + (top,))

    def describe(self) -> str:
        parts = [f"psi0={self.tower.format_poly(0, self.psi0)}"]
        for i, lvl in enumerate(self.levels, 1):
            if lvl.is_closed:
                parts.append(
                    f"(phi{i} deg {lvl.m}, -{lvl.h}/{lvl.e}, "
                    f"{self.tower.format_poly(i, lvl.psi)})"
                )
            else:
                parts.append(f"(phi{i} deg {lvl.m}, omega={lvl.omega}, cs={lvl.cs})")
        return "; ".join(parts)


# ============================================================================
# MacLane valuations
# ============================================================================

def _coefficient_value(p: int, c: int, nu: Optional[int]) -> PVal:
    if c:
        return PVal(vp_int(p, c), True)
    return PVal(INF, True) if nu is None else PVal(nu, False)


def zero_value(t: OMType, i: int, nu: Optional[int]) -> PVal:
    """Value of a coefficient that vanishes at the working precision."""
    if nu is None:
        return PVal(INF, True)
    return PVal(nu * t.ramification(i - 1), False)


def maclane_value(t: OMType, i: int, g: Sequence[int], nu: Optional[int] = None) -> PVal:
    """
    v_i(g) for 1 <= i <= order + 1.

    With ``nu`` given, g is read modulo p^nu and the result may be a bound.
    """
    modulus = modulus_for(t.p, nu)
    g = trim(g, modulus)
    if not g:
        return zero_value(t, i, nu)
    if i == 1:
        return pval_min(_coefficient_value(t.p, c, nu) for c in g)
    lvl = t.level(i - 1)
    expansion = phi_expansion(g, lvl.phi, modulus=modulus)
    terms = []
    for s, a in enumerate(expansion.coeffs):
        v = maclane_value(t, i - 1, a, nu)
        terms.append(PVal(lvl.e * v.value + s * lvl.step, v.exact))
    return pval_min(terms)


def theta_valuation(t: OMType, g: Sequence[int]) -> Fraction:
    """v(g(theta)) = v_{i+1}(g) / (e_1...e_i) for a type of order i and deg g < m_{i+1}."""
    g = as_coeffs(g)
    i = t.order
    if len(g) - 1 >= t.next_degree() and i > 0:
        raise ValueError(f"degree {len(g) - 1} is not below m_{i + 1} = {t.next_degree()}")
    v = maclane_value(t.frame(), i + 1, g).value
    return Fraction(v, t.ramification(i))


def multiadic_value(t: OMType, terms: dict) -> Val:
    """
    v_{r+1} of a polynomial given by its (phi_1, ..., phi_r)-multiadic
    expansion, as the minimum of the values of its terms.
    """
    r = t.order
    weights = []
    for k in range(1, r + 1):
        tail = 1
        for lvl in t.levels[k:r]:
            tail *= lvl.e
        weights.append(tail * t.level(k).step)
    scale = t.ramification(r)
    best: Val = INF
    for key, c in terms.items():
        value = scale * maclane_value(t, 1, c).value + sum(j * w for j, w in zip(key, weights))
        best = min(best, value)
    return best


# ============================================================================
# Residues and lifts
# ============================================================================

def coeff_residue(t: OMType, j: int, a: Sequence[int], nu: Optional[int] = None) -> Elem:
    """
    Residue in F_{j+1} of a polynomial a with deg a < m_{j+1}.

    Raises:
        InsufficientPrecision: the minimum value is not determined at precision nu
    """
    tower = t.tower
    modulus = modulus_for(t.p, nu)
    a = trim(a, modulus)
    if j == 0:
        v = require_exact(maclane_value(t, 1, a, nu), "residue valuation")
        q = t.p**v
        reduced = tower.poly_trim(0, ((c // q) % t.p for c in a))
        reduced = tower.poly_rem_monic(0, reduced, t.psi0)
        return tuple(reduced) + (0,) * (t.f0 - len(reduced))

    lvl = t.level(j)
    expansion = phi_expansion(a, lvl.phi, modulus=modulus)
    values = []
    for s, b in enumerate(expansion.coeffs):
        v = maclane_value(t, j, b, nu)
        values.append(PVal(lvl.e * v.value + s * lvl.step, v.exact))
    c = require_exact(pval_min(values), "residue value")
    if any(not v.exact and v.value <= c for v in values):
        raise InsufficientPrecision(f"residue at level {j} undetermined at precision {nu}")

    z = tower.generator(j)
    result = tower.zero(j + 1)
    for s, v in enumerate(values):
        if not v.exact or v.value != c:
            continue
        k, rest = divmod(s - c * lvl.ell, lvl.e)
        if rest:
            raise InvariantViolation(f"exponent {s} does not match value {c} at level {j}")
        r = coeff_residue(t, j - 1, expansion.coeffs[s], nu)
        term = tower.mul(j + 1, tower.embed(j, r), tower.pow(j + 1, z, k))
        result = tower.add(j + 1, result, term)
    return result


def lift(t: OMType, j: int, c: Elem, value: int) -> Coeffs:
    """
    Integer polynomial of degree < m_{j+1} with v_{j+1} equal to ``value`` and
    residue c at level j; the inverse of ``coeff_residue``.
    """
    tower = t.tower
    if tower.is_zero(j + 1, c):
        return ()
    if value < 0:
        raise InvariantViolation(f"cannot lift to negative value {value} at level {j}")
    if j == 0:
        q = t.p**value
        return trim(q * int(x) for x in c)

    lvl = t.level(j)
    e = lvl.e
    t0 = (value * lvl.ell) % e
    kappa = (t0 - value * lvl.ell) // e
    twisted = tower.mul(j + 1, c, tower.pow(j + 1, tower.generator(j), -kappa))
    result: Coeffs = ()
    phi_t = power(lvl.phi, t0)
    phi_e = power(lvl.phi, e)
    for k, ck in enumerate(twisted):
        s = t0 + k * e
        if not tower.is_zero(j, ck):
            w, rest = divmod(value - s * lvl.step, e)
            if rest or w < 0:
                raise InvariantViolation(f"no term of value {value} at exponent {s}, level {j}")
            result = add(result, mul(lift(t, j - 1, ck, w), phi_t))
        phi_t = mul(phi_t, phi_e)
    return result


def build_representative(t: OMType) -> Coeffs:
    """
    Representative phi_{i+1} of a type whose top level i is closed.

    phi_{i+1} = phi_i^(e f) + sum_k lift(c_k) phi_i^(k e), where c_k runs over
    the non-leading coefficients of psi_i; every term sits on the line of
    slope lambda_i through (e f, e f V_i), so N_i(phi_{i+1}) is one-sided and
    R_i(phi_{i+1}) = psi_i.
    """
    if not t.levels:
        return trim(t.psi0)
    if t.is_open:
        raise InvariantViolation("build_representative() needs a closed top level")
    i = len(t.levels)
    lvl = t.top
    psi = lvl.psi
    if psi == t.tower.poly_x(i):
        raise PsiIsY(f"psi = y is not allowed at level {i}")
    e, f = lvl.e, lvl.f
    phi_e = power(lvl.phi, e)
    result = power(phi_e, f)
    phi_ke: Coeffs = (1,)
    for k in range(f):
        b = lift(t, i - 1, psi[k], (f - k) * lvl.step)
        if b:
            result = add(result, mul(b, phi_ke))
        phi_ke = mul(phi_ke, phi_e)
    return result


# ============================================================================
# Okutsu invariants and representations
# ============================================================================

@dataclass(frozen=True)
class OkutsuInvariants:
    depth: int
    e: int
    f: int
    mu: Fraction
    nu: Tuple[Fraction, ...]
    mu_levels: Tuple[Fraction, ...]
    ind: Fraction
    exp: int
    conductor: Fraction

    @property
    def degree(self) -> int:
        return self.e * self.f


def okutsu_invariants(t: OMType) -> OkutsuInvariants:
    """
    Invariants of a complete type: e, f, mu, the nu_i and mu_i, the index,
    the exponent and the conductor exponent.

    Raises:
        IncompleteType: the top level is still open
    """
    if t.is_open:
        raise IncompleteType(f"type {t.describe()} has an open top level")
    r = len(t.levels)
    e = t.ramification(r)
    f = t.f0
    for lvl in t.levels:
        f *= lvl.f

    def mu_up_to(i: int) -> Fraction:
        total = Fraction(0)
        for j in range(1, i + 1):
            growth = 1
            for lvl in t.levels[j - 1 : i]:
                growth *= lvl.e * lvl.f
            total += Fraction((growth - 1) * t.level(j).h, t.ramification(j))
        return total

    nus: List[Fraction] = []
    acc = Fraction(0)
    for j in range(1, r + 1):
        acc += Fraction(t.level(j).h, t.ramification(j))
        nus.append(acc)
    mu = mu_up_to(r)
    n = e * f
    ind = Fraction(n, 2) * (mu - 1 + Fraction(1, e))
    return OkutsuInvariants(
        depth=r,
        e=e,
        f=f,
        mu=mu,
        nu=tuple(nus),
        mu_levels=tuple(mu_up_to(i) for i in range(1, r + 1)),
        ind=ind,
        exp=floor(mu),
        conductor=e * mu - e + 1,
    )


@dataclass(frozen=True)
class OMRep:
    """
    OM representation of one irreducible p-adic factor: a complete frame of
    depth r, its Okutsu approximation phi_{r+1} and the quality h of phi.
    """
    frame: OMType
    phi: Coeffs
    h: Val
    cs: int
    invariants: OkutsuInvariants

    @classmethod
    def build(cls, frame: OMType, phi: Sequence[int], h: Val, cs: int = 0) -> "OMRep":
        phi = as_coeffs(phi)
        invariants = okutsu_invariants(frame)
        if len(phi) - 1 != invariants.degree:
            raise InvariantViolation(
                f"approximation of degree {len(phi) - 1} for a type of degree {invariants.degree}"
            )
        return cls(frame=frame, phi=phi, h=h, cs=cs, invariants=invariants)

    @property
    def depth(self) -> int:
        return self.invariants.depth

    @property
    def e(self) -> int:
        return self.invariants.e

    @property
    def f(self) -> int:
        return self.invariants.f

    @property
    def degree(self) -> int:
        return self.invariants.degree

    @property
    def V(self) -> int:
        return self.frame.next_V()

    @property
    def is_exact(self) -> bool:
        return self.h == INF

    def with_phi(self, phi: Sequence[int], h: Val) -> "OMRep":
        return replace(self, phi=as_coeffs(phi), h=h)

    def sort_key(self) -> tuple:
        return (self.e, self.f, self.depth, self.frame.chain(), self.phi)
