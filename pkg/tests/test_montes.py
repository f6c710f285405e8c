from fractions import Fraction

import pytest

from omvals import config
from omvals.examples import ex1, ex2, ex3
from omvals.exceptions import NotMonic, NotPrime, PrecisionCapExceeded
from omvals.models import FactorizationModel
from omvals.montes import montes_factorize, starting_precision
from omvals.polyz import INF, mul


def test_split_quadratic():
    fact = montes_factorize((-2, 0, 1), 7)
    assert len(fact.reps) == 2
    assert all((rep.e, rep.f, rep.depth) == (1, 1, 0) for rep in fact.reps)
    assert fact.ind == 0
    assert fact.is_complete and fact.degree_sum == 2


def test_unramified_quadratic():
    fact = montes_factorize((1, 0, 1), 7)
    (rep,) = fact.reps
    assert (rep.e, rep.f, rep.depth) == (1, 2, 0)


@pytest.mark.parametrize("k, ind", [(1, 0), (3, 1), (5, 2)])
def test_ramified_quadratic(k, ind):
    p = 5
    fact = montes_factorize((p**k, 0, 1), p)
    (rep,) = fact.reps
    assert (rep.e, rep.f, rep.depth) == (2, 1, 1)
    assert rep.invariants.mu == Fraction(k, 2)
    assert fact.ind == ind


def test_two_factors_with_the_same_residue():
    p = 5
    f = mul((-p, 1), (-2 * p, 1))
    fact = montes_factorize(f, p)
    assert len(fact.reps) == 2
    assert fact.ind == 1
    assert {rep.degree for rep in fact.reps} == {1}


def test_exact_linear_factor():
    p = 3
    f = mul((0, 1), (p, 0, 1))
    fact = montes_factorize(f, p)
    assert fact.degree_sum == 3
    assert any(rep.is_exact and rep.phi == (0, 1) for rep in fact.reps)


def test_trace_records_every_node():
    fact = montes_factorize((125, 0, 1), 5, trace=True)
    assert fact.trace
    assert sum(node.contribution for node in fact.trace) == fact.ind
    for node in fact.trace:
        assert node.polygon.startswith("points [")
        assert "slope" in node.polygon and "height" in node.polygon


def test_index_guard():
    fact = montes_factorize((1, -2, 1), 5, index_bound=10)
    assert fact.ind == INF
    assert not fact.is_complete


def test_input_checks():
    with pytest.raises(NotMonic):
        montes_factorize((1, 2), 5)
    with pytest.raises(NotMonic):
        montes_factorize((1,), 5)
    with pytest.raises(NotPrime):
        montes_factorize((1, 0, 1), 15)


def test_reps_are_sorted_and_reproducible():
    f = mul(mul((-2, 0, 1), (3, 0, 1)), (7, 1))
    first = FactorizationModel.from_factorization(montes_factorize(f, 7))
    second = FactorizationModel.from_factorization(montes_factorize(f, 7))
    assert first.model_dump_json() == second.model_dump_json()
    keys = [(rep.invariants.e, rep.invariants.f) for rep in first.reps]
    assert keys == sorted(keys)


@pytest.mark.slow
def test_ex2_factors():
    fact = montes_factorize(ex2(7, 3), 7)
    assert len(fact.reps) == 3
    for rep in fact.reps:
        assert (rep.degree, rep.e, rep.f) == (10, 10, 1)
        assert rep.invariants.mu == Fraction(99, 10)
        assert rep.invariants.ind == 45
    assert fact.ind == 135


@pytest.mark.slow
def test_ladder_depth():
    (rep,) = montes_factorize(ex3(5, 5), 5).reps
    assert rep.depth == 5
    assert rep.degree == 72


def test_starting_precision_follows_the_data(monkeypatch):
    monkeypatch.setenv(config.START_PRECISION_ENV, "4")
    assert starting_precision(5, (5**9, 0, 1)) == 10
    assert starting_precision(5, (1, 0, 1)) == 4
    assert starting_precision(5, (0, 1), (5**6, 1)) == 7


def test_low_start_precision_escalates_per_node(monkeypatch):
    f = ex1(3, 4)
    reference = montes_factorize(f, 3)
    monkeypatch.setenv(config.START_PRECISION_ENV, "2")
    escalated = montes_factorize(f, 3)
    assert escalated.ind == reference.ind
    assert [rep.sort_key() for rep in escalated.reps] == [
        rep.sort_key() for rep in reference.reps
    ]


def test_precision_cap_is_enforced(monkeypatch):
    monkeypatch.setenv(config.START_PRECISION_ENV, "2")
    monkeypatch.setenv(config.MAX_PRECISION_ENV, "16")
    with pytest.raises(PrecisionCapExceeded):
        montes_factorize(ex1(3, 4), 3)
