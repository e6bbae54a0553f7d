import io as stdio
import json
from fractions import Fraction

import pytest

from ctlf import io
from ctlf.errors import TotalMismatch
from ctlf.mitigation import plan_removals
from ctlf.model import ExplicitLabeling, ModelSpec
from ctlf.monitor import replay
from ctlf.semantics import CountVector, Distribution

from conftest import FAIR

TOY = ModelSpec.of(("M", "F"), 6)


def test_rat():
    assert io.rat(Fraction(1, 2)) == "1/2"
    assert io.rat(Fraction(3)) == "3"
    assert io.rat(None) is None


def test_model_round_trip():
    assert io.model_from_json(io.model_to_json(TOY)) == TOY
    table = {str(w): "M" for w in ModelSpec.of(("M", "F"), 2).worlds()}
    spec = ModelSpec(2, 2, ("M", "F"), ExplicitLabeling(table))
    assert io.model_from_json(io.model_to_json(spec)) == spec
    with pytest.raises(ValueError):
        io.model_from_json({"alphabet": ["M"], "n": 2, "labeling": "random"})


def test_distribution_round_trip():
    d = io.distribution_from_json({"M": "1/3", "F": "2/3"})
    assert io.distribution_to_json(d) == {"M": "1/3", "F": "2/3"}
    with pytest.raises(ValueError):
        io.distribution_from_json({"M": "1/3", "F": "1/3"})
    with pytest.raises((ValueError, TypeError)):
        io.distribution_from_json({"M": 0.5, "F": 0.5})


def test_queries():
    r = io.run_query(TOY, FAIR, {"world": "3.1", "formula": "BOX 1 M"})
    assert r == {"holds": True, "ratio": "1", "witness": None}
    r = io.run_query(TOY, FAIR, {"path": "1.1,2.1,3.1", "formula": "DAG 1/8 M"})
    assert r["holds"] and r["ratio"] == "1/8" and r["witness"][-1] == "6.8"
    r = io.run_query(TOY, FAIR, {"world": "3.1", "formula": "BBOX 1 F"})
    assert r["witness"] == ["1.2", "2.4", "3.8", "4.15", "5.29", "6.57"]
    with pytest.raises(ValueError):
        io.run_query(TOY, FAIR, {"formula": "BOX 1 M"})


def test_read_trace():
    text = '{"seq":1,"outcome":"M"}\n\n{"seq":2,"outcome":"F"}\n{"outcome":"F"}\n'
    assert list(io.read_trace(stdio.StringIO(text))) == ["M", "F", "F"]
    for bad in ('{"seq":2,"outcome":"M"}\n{"seq":1,"outcome":"F"}\n', "nope\n",
                '{"seq":1}\n', '{"outcome":3}\n'):
        with pytest.raises(ValueError):
            list(io.read_trace(stdio.StringIO(bad)))


def test_verdict_json_is_exact_strings():
    s = replay(TOY, FAIR, "MFFMM", dataset=CountVector({"M": 15, "F": 5}))
    v = io.verdict_to_json(s)
    json.dumps(v)
    assert v["q2"] == "1/2" and v["world"] == "5.13"
    assert v["odds"] == {"M:F": "12/3", "F:M": "3/12"}
    assert all(isinstance(x, str) for x in v["ratios"].values())
    assert io.verdict_to_json(replay(TOY, FAIR, "MMMM"))["outlook"] is None


def test_plan_json():
    out = io.plan_to_json(plan_removals("MFMFMMMFMMMM", FAIR))
    assert out["optimal_size"] == 6 and out["achieved"] == {"M": "1/2", "F": "1/2"}
