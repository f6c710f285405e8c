import json
from fractions import Fraction

from omvals.diffdisc import p_discriminant
from omvals.models import DiscModel, FactorizationModel, OMRepModel, ResultantModel
from omvals.montes import montes_factorize
from omvals.polyz import INF
from omvals.presultant import resultant_run


def test_disc_model_round_trip():
    result = p_discriminant((125, 0, 1), 5)
    model = DiscModel.from_result(result, 5, 2)
    data = json.loads(model.model_dump_json())
    assert data["v_disc"] == "3"
    assert data["ind"] == "1"
    assert data["p"] == "5"
    assert data["local"][0]["mu"] == "3/2"
    assert DiscModel.model_validate(data) == model


def test_disc_model_offset_and_infinity():
    model = DiscModel.from_result(p_discriminant((-8, 0, 0, 1), 2), 2, 3, offset=2)
    assert model.v_disc == 4
    infinite = DiscModel.from_result(p_discriminant((1, -2, 1), 5), 5, 2, offset=3)
    data = infinite.model_dump(mode="json")
    assert data["v_disc"] == "infinity"
    assert DiscModel.model_validate(data).v_disc == INF


def test_rep_model():
    fact = montes_factorize((5, 0, 1), 5)
    model = OMRepModel.from_rep(fact.reps[0])
    data = model.model_dump(mode="json")
    assert data["degree"] == 2
    assert data["levels"][0]["slope"] == "-1/2"
    assert data["invariants"]["e"] == 2
    assert OMRepModel.model_validate(data).invariants.mu == Fraction(1, 2)


def test_factorization_model_keeps_big_integers_as_text():
    big = 2**200 + 1
    fact = montes_factorize((-big, 1), 2)
    data = json.loads(FactorizationModel.from_factorization(fact).model_dump_json())
    assert data["f"] == [str(-big), "1"]
    assert data["ind"] == "0"


def test_resultant_model():
    run = resultant_run((1, 0, 1), (-2, 1), 5)
    data = ResultantModel.from_run(run, 5, 2, 1).model_dump(mode="json")
    assert data["value"] == "1"
    assert data["swapped"] is True
    assert data["bound"] == 3
