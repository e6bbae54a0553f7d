from fractions import Fraction

import pytest

from ctlf.errors import CapExceeded, IncompletePath, InvalidPath
from ctlf.formula import Atom, BlackBox, Box, Circ, Dagger, Nabla, Tri, parse_formula
from ctlf.model import ModelSpec, Path, WorldId, root_path
from ctlf.oracle import Oracle, eval_path_oracle, eval_state_oracle

from conftest import FAIR

TOY = ModelSpec.of(("M", "F"), 6)


@pytest.mark.parametrize("world,text", [
    ("1.1", "M"), ("1.1", "NOT F"), ("3.1", "BOX 1 M"), ("3.2", "BOX 2/3 M"),
    ("3.1", "BBOX 1 F"), ("3.2", "BBOX 1 F"), ("3.1", "CIRC 3/6 M AND CIRC 0 F"),
    ("3.1", "TRI 1 F"), ("3.2", "TRI 2/3 F"),
])
def test_worked_claims_by_enumeration(world, text):
    assert eval_state_oracle(WorldId.parse(world), parse_formula(text), TOY, FAIR)


def test_path_claims_by_enumeration():
    assert eval_path_oracle(root_path((6, 63), TOY), parse_formula("NAB 1/6 M"), TOY, FAIR)
    assert eval_path_oracle(root_path((3, 1), TOY), parse_formula("DAG 1/8 M"), TOY, FAIR)
    assert not eval_path_oracle(root_path((3, 1), TOY), parse_formula("DAG 1/7 M"), TOY, FAIR)


def test_sigma_paths():
    o = Oracle(TOY, FAIR)
    assert len(o.paths) == 64 and len(o.sigma_paths) == 20
    assert Oracle(ModelSpec.of(("M", "F"), 5), FAIR).sigma_paths == []


def test_measures_are_exact():
    o = Oracle(TOY, FAIR)
    assert o.measure((3, 2), Box(1, Atom("M"))) == Fraction(2, 3)
    assert o.measure((3, 2), Tri(0, Atom("M"))) == Fraction(1, 3)
    assert o.path_measure(root_path((4, 7), TOY), Dagger(0, Atom("M"))) == Fraction(1, 2)


def test_errors():
    o = Oracle(TOY, FAIR)
    with pytest.raises(IncompletePath):
        o.path_measure(root_path((3, 1), TOY), Nabla(0, Atom("M")))
    with pytest.raises(CapExceeded):
        Oracle(ModelSpec.of(("M", "F"), 12), FAIR, cap=100)
