import enum
import json
import math

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from hrlab.report import dumps_csv, dumps_json, flatten, loads_json, to_plain

finite = st.floats(allow_nan=False, allow_infinity=False)
scalars = st.one_of(st.none(), st.booleans(), st.integers(-10**12, 10**12), finite, st.text(max_size=8))
trees = st.recursive(scalars, lambda c: st.one_of(st.lists(c, max_size=4), st.dictionaries(st.text(max_size=5), c, max_size=4)),
                     max_leaves=20)


@given(trees)
def test_json_round_trip_exact(obj):
    assert loads_json(dumps_json(obj)) == obj


@given(trees)
def test_json_deterministic(obj):
    assert dumps_json(obj) == dumps_json(json.loads(json.dumps(obj)))


@given(finite)
def test_float_stays_float(x):
    back = loads_json(dumps_json([x]))[0]
    assert isinstance(back, float) and back == x


def test_special_floats():
    text = dumps_json({"a": math.nan, "b": math.inf, "c": -math.inf})
    back = loads_json(text)
    assert math.isnan(back["a"]) and back["b"] == math.inf and back["c"] == -math.inf


def test_numpy_and_enum_values():
    class Colour(str, enum.Enum):
        Red = "Red"

    out = to_plain({"x": np.float64(1.5), "n": np.int64(3), "b": np.bool_(True), "a": np.arange(3), "e": Colour.Red})
    assert out == {"x": 1.5, "n": 3, "b": True, "a": [0, 1, 2], "e": "Red"}


def test_keys_sorted():
    assert dumps_json({"b": 1, "a": 2}).index('"a"') < dumps_json({"b": 1, "a": 2}).index('"b"')


def test_csv_blank_for_missing():
    text = dumps_csv(("a", "b", "c"), [(1.0, None, "x"), (0.1, True, 2)])
    assert text == "a,b,c\n1.0,,x\n0.10000000000000001,true,2\n"


def test_flatten():
    assert flatten({"b": {"y": 1, "x": [1, 2]}, "a": [{"k": 0}]}) == [("a[0].k", 0), ("b.x", [1, 2]), ("b.y", 1)]
