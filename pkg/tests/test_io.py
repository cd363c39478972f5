import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import SMALL_MODULES, module
from samod.actions import quotient_action
from samod.errors import MalformedTableError, SamodError
from samod.io import (
    action_from_json, action_to_json, dumps, load_module, load_retraction_spec, module_from_json,
    module_to_json,
)
from samod.retraction import v5_spec


@given(st.sampled_from(SMALL_MODULES))
def test_module_json_round_trip(fid):
    V = module(fid)
    W = module_from_json(json.loads(dumps(module_to_json(V))))
    assert (W.add, W.act, W.zero, W.labels) == (V.add, V.act, V.zero, V.labels)
    assert W.ring.mul == V.ring.mul


def test_load_module_from_file_and_fixture(tmp_path):
    p = tmp_path / "m.json"
    p.write_text(dumps(module_to_json(module("C4"))))
    assert load_module(str(p)).add == module("C4").add
    assert load_module("C4").add == module("C4").add
    assert load_module({"fixture": "B2"}).size == 4


def test_inline_ring_by_fixture_id():
    data = {"ring": "BOOL", "add": [[0, 1], [1, 1]], "act": [[0, 0], [0, 1]]}
    assert load_module(data).size == 2


@pytest.mark.parametrize("data", [{"add": [[0]]}, {"ring": "BOOL", "act": [[0]]},
                                  {"ring": "BOOL", "add": [[0, 1], [1]], "act": [[0, 0], [0, 1]]}])
def test_malformed_module_json(data):
    with pytest.raises(MalformedTableError):
        load_module(data)


def test_invalid_json_file(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{nope")
    with pytest.raises(SamodError):
        load_module(str(p))


def test_retraction_spec_round_trip(tmp_path):
    p = tmp_path / "r.json"
    p.write_text(dumps(v5_spec().to_json()))
    assert load_retraction_spec(str(p)) == v5_spec()


def test_action_round_trip():
    a = quotient_action(module("ZMOD(3)"))
    b = action_from_json(json.loads(dumps(action_to_json(a))))
    assert b.table == a.table


def test_dumps_is_canonical():
    assert dumps({"b": 1, "a": [1, 2]}) == dumps({"a": [1, 2], "b": 1})
    assert dumps({}).endswith("\n")
