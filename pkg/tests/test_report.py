import math
from fractions import Fraction

import pytest

from sharpmin.report import dumps, format_float, loads


def test_format_float_17_digits():
    assert format_float(0.1) == "0.10000000000000001"
    assert format_float(1.0) == "1.0"
    assert format_float(-0.0) == "0.0"
    assert format_float(3.0517578125e-05) == "3.0517578125e-05"
    assert format_float(1 / 3) == "0.33333333333333331"


def test_format_float_roundtrip_exact():
    for x in [0.1, 1 / 3, math.pi, 2.0 ** -52, 1e300, -7.25]:
        assert float(format_float(x)) == x


def test_format_float_rejects_nonfinite():
    with pytest.raises(ValueError):
        format_float(float("nan"))
    with pytest.raises(ValueError):
        format_float(float("inf"))


def test_dumps_sorted_keys():
    text = dumps({"b": 1, "a": 2, "c": {"z": 0, "y": 1}})
    assert text.index('"a"') < text.index('"b"') < text.index('"c"')
    assert text.index('"y"') < text.index('"z"')


def test_dumps_types():
    text = dumps({"f": 0.5, "i": 3, "s": "x", "b": True, "n": None,
                  "q": Fraction(3, 4), "l": [1, 2.5]})
    data = loads(text)
    assert data["f"] == 0.5
    assert data["i"] == 3
    assert data["q"] == "3/4"
    assert data["l"] == [1, 2.5]


def test_roundtrip_is_fixed_point():
    doc = {"x": [0.1, 2.0, 3], "name": "t", "sub": {"a": None, "b": False}}
    once = dumps(doc)
    twice = dumps(loads(once))
    assert once == twice


def test_dumps_rejects_unknown_types():
    with pytest.raises(TypeError):
        dumps({"x": {1, 2}})
    with pytest.raises(TypeError):
        dumps({1: "non-string key"})
