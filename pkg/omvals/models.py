"""
JSON models for results and OM representations.

Rationals are written as "num/den", infinite values as "infinity" and
integers that may grow large (coefficients, valuations) as decimal strings,
so documents survive JSON readers without big integer support.
"""

import math
from fractions import Fraction
from typing import Annotated, Any, List, Optional, Sequence

from pydantic import BaseModel, ConfigDict, PlainSerializer, PlainValidator

from omvals.diffdisc import DifferentResult, DiscResult
from omvals.montes import NodeTrace, OMFactorization
from omvals.omtype import OkutsuInvariants, OMRep
from omvals.polyz import INF, Val, format_polynomial
from omvals.presultant import ResultantRun

INFINITY = "infinity"


def _parse_rational(value: Any) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(str(value).strip())
    raise ValueError(f"expected a rational 'num/den', got {value!r}")


def _dump_rational(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def _parse_int(value: Any) -> int:
    if isinstance(value, bool):
        raise ValueError("expected an integer")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        return int(value.strip())
    raise ValueError(f"expected a decimal integer, got {value!r}")


def _parse_val(value: Any) -> Val:
    if value == INFINITY or (isinstance(value, float) and math.isinf(value) and value > 0):
        return INF
    return _parse_int(value)


def _dump_val(value: Val) -> str:
    return INFINITY if value == INF else str(value)


Rational = Annotated[
    Fraction, PlainValidator(_parse_rational), PlainSerializer(_dump_rational, return_type=str)
]
BigInt = Annotated[int, PlainValidator(_parse_int), PlainSerializer(str, return_type=str)]
Valuation = Annotated[Any, PlainValidator(_parse_val), PlainSerializer(_dump_val, return_type=str)]


class _Model(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)


class LevelModel(_Model):
    """phi_i with its slope and residual factor; psi is rendered over F_i."""
    deg_phi: int
    phi: List[BigInt]
    V: int
    slope: Rational
    h: int
    e: int
    f: int
    psi: str


class OkutsuModel(_Model):
    depth: int
    e: int
    f: int
    mu: Rational
    nu: List[Rational]
    mu_levels: List[Rational]
    ind: Rational
    exp: int
    conductor: Rational

    @classmethod
    def from_invariants(cls, inv: OkutsuInvariants) -> "OkutsuModel":
        return cls(
            depth=inv.depth,
            e=inv.e,
            f=inv.f,
            mu=inv.mu,
            nu=list(inv.nu),
            mu_levels=list(inv.mu_levels),
            ind=inv.ind,
            exp=inv.exp,
            conductor=inv.conductor,
        )


class OMRepModel(_Model):
    index: int
    degree: int
    psi0: str
    levels: List[LevelModel]
    phi: List[BigInt]
    phi_text: str
    h: Valuation
    cs: int
    invariants: OkutsuModel

    @classmethod
    def from_rep(cls, rep: OMRep, index: int = 0) -> "OMRepModel":
        t = rep.frame
        levels = [
            LevelModel(
                deg_phi=lvl.m,
                phi=list(lvl.phi),
                V=lvl.V,
                slope=lvl.slope,
                h=lvl.h,
                e=lvl.e,
                f=lvl.f,
                psi=t.tower.format_poly(i, lvl.psi),
            )
            for i, lvl in enumerate(t.levels, 1)
        ]
        return cls(
            index=index,
            degree=rep.degree,
            psi0=t.tower.format_poly(0, t.psi0),
            levels=levels,
            phi=list(rep.phi),
            phi_text=format_polynomial(rep.phi),
            h=rep.h,
            cs=rep.cs,
            invariants=OkutsuModel.from_invariants(rep.invariants),
        )


class NodeModel(_Model):
    level: int
    degree: int
    cs: int
    polygon: str
    contribution: Valuation

    @classmethod
    def from_trace(cls, node: NodeTrace) -> "NodeModel":
        return cls(
            level=node.level,
            degree=node.degree,
            cs=node.cs,
            polygon=node.polygon,
            contribution=node.contribution,
        )


def _nodes(trace: Sequence[NodeTrace]) -> List[NodeModel]:
    return [NodeModel.from_trace(node) for node in trace]


class FactorizationModel(_Model):
    p: BigInt
    f: List[BigInt]
    ind: Valuation
    reps: List[OMRepModel]
    trace: List[NodeModel] = []

    @classmethod
    def from_factorization(cls, fact: OMFactorization) -> "FactorizationModel":
        return cls(
            p=fact.p,
            f=list(fact.f),
            ind=fact.ind,
            reps=[OMRepModel.from_rep(rep, k) for k, rep in enumerate(fact.reps)],
            trace=_nodes(fact.trace),
        )


class DifferentModel(_Model):
    index: int
    e: int
    f: int
    mu: Rational
    rho: int
    diff_exponent: int
    local_disc_valuation: int

    @classmethod
    def from_result(cls, result: DifferentResult, index: int = 0) -> "DifferentModel":
        return cls(
            index=index,
            e=result.e,
            f=result.f,
            mu=result.mu,
            rho=result.rho,
            diff_exponent=result.diff_exponent,
            local_disc_valuation=result.local_disc_valuation,
        )


class DiscModel(_Model):
    """
    Discriminant valuation of a polynomial. ``offset`` is the correction
    added by normalization; ``v_disc`` is already corrected.
    """
    p: BigInt
    degree: int
    sum_local_disc: Valuation
    ind: Valuation
    v_disc: Valuation
    offset: int = 0
    oracle: Optional[Valuation] = None
    local: List[DifferentModel] = []

    @classmethod
    def from_result(
        cls, result: DiscResult, p: int, degree: int, offset: int = 0, oracle: Optional[Val] = None
    ) -> "DiscModel":
        v_disc = result.v_disc if result.is_infinite else result.v_disc - offset
        return cls(
            p=p,
            degree=degree,
            sum_local_disc=result.sum_local_disc,
            ind=result.ind,
            v_disc=v_disc,
            offset=offset,
            oracle=oracle,
            local=[DifferentModel.from_result(d, k) for k, d in enumerate(result.local_results)],
        )


class ResultantModel(_Model):
    p: BigInt
    deg_f: int
    deg_g: int
    value: Valuation
    bound: Optional[int] = None
    swapped: bool = False
    offset: int = 0
    oracle: Optional[Valuation] = None
    trace: List[NodeModel] = []

    @classmethod
    def from_run(
        cls,
        run: ResultantRun,
        p: int,
        deg_f: int,
        deg_g: int,
        offset: int = 0,
        oracle: Optional[Val] = None,
    ) -> "ResultantModel":
        value = run.value if run.is_infinite else run.value - offset
        return cls(
            p=p,
            deg_f=deg_f,
            deg_g=deg_g,
            value=value,
            bound=run.bound,
            swapped=run.swapped,
            offset=offset,
            oracle=oracle,
            trace=_nodes(run.trace),
        )
