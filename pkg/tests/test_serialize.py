from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from homological import serialize as ser
from homological.core import Norm, StepFunction, vec
from homological.instances import random_cantor, random_discrete, random_matrix, random_step


@given(st.integers(0, 10 ** 6))
def test_instance_roundtrip(seed):
    for obj in (random_discrete(seed, 5, 2), random_step(seed, 4, 3),
                random_cantor(seed, 2, 2, 1), random_matrix(seed, 3, 3, 2, Norm.LINF)):
        text = ser.dumps(ser.to_doc(obj))
        again = ser.parse_instance(ser.loads(text))
        assert again == obj
        assert ser.dumps(ser.to_doc(again)) == text


def test_rationals_are_strings():
    doc = ser.to_doc(StepFunction.equal_intervals([vec("1/3"), vec("-1/3")]))
    assert doc["breakpoints"] == ["0", "1/2", "1"]
    assert doc["values"] == [["1/3"], ["-1/3"]]


@pytest.mark.parametrize("doc", [
    {"type": "discrete"},
    {"type": "discrete", "values": [[0.5]]},
    {"type": "step", "breakpoints": ["0", "1"], "values": [["x"]]},
    {"type": "cantor", "q": "2", "r": "1", "depth": 0, "values": [["1"], ["-1"]]},
    {"type": "mystery"},
])
def test_malformed(doc):
    with pytest.raises(ser.DocumentError):
        ser.parse_instance(doc)


def test_invalid_json():
    with pytest.raises(ser.DocumentError):
        ser.loads("{nope")
    with pytest.raises(ser.DocumentError):
        ser.loads("[1]")


def test_parse_rat_rejects_bool():
    with pytest.raises(ser.DocumentError):
        ser.parse_rat(True)
    assert ser.parse_rat("-7/14") == Fraction(-1, 2)
