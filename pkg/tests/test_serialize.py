import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kdiff.generate import random_instances
from kdiff.serialize import InstanceFormatError, dump_instance, dumps, instance_from_json, instance_to_json, load_instance

from instances import cubic_single_zero, three_level_chain, two_level_abelian, two_loop_vertex


@pytest.mark.parametrize("make", [three_level_chain, two_loop_vertex, cubic_single_zero, two_level_abelian])
def test_round_trip(make, tmp_path):
    t = make()
    path = tmp_path / "instance.json"
    dump_instance(t, path)
    back, warnings = load_instance(path)
    assert warnings == []
    assert back == t
    assert dumps(back) == dumps(t)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_generated_instances_round_trip(seed):
    for t in random_instances(3, seed=seed, ks=(1, 2, 3, 4)):
        once, _ = instance_from_json(json.loads(dumps(t)))
        twice, _ = instance_from_json(json.loads(dumps(once)))
        assert once == twice == t


def test_unknown_fields_strict_and_lenient():
    data = instance_to_json(three_level_chain())
    data["colour"] = "blue"
    data["vertices"][0]["note"] = 1
    with pytest.raises(InstanceFormatError, match="colour"):
        instance_from_json(data)
    t, warnings = instance_from_json(data, strict=False)
    assert t == three_level_chain()
    assert len(warnings) == 2


def test_bare_integer_marked_points():
    data = instance_to_json(cubic_single_zero())
    data["vertices"][0]["marked"] = [6]
    assert instance_from_json(data)[0] == cubic_single_zero()


@pytest.mark.parametrize("mutate,message", [
    (lambda d: d.pop("k"), "missing"),
    (lambda d: d.update(k="2"), "integer"),
    (lambda d: d["vertices"][0].update(id=[1]), "ids"),
    (lambda d: d["edges"][0].update(root_minus={"N": 3}), "root_minus"),
    (lambda d: d.update(vertices={}), "lists"),
    (lambda d: d["vertices"][1].update(marked=[True]), "object"),
])
def test_malformed_input(mutate, message):
    data = instance_to_json(three_level_chain())
    mutate(data)
    with pytest.raises(InstanceFormatError, match=message):
        instance_from_json(data)


def test_unreadable_files(tmp_path):
    with pytest.raises(InstanceFormatError, match="cannot read"):
        load_instance(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(InstanceFormatError, match="invalid JSON"):
        load_instance(bad)
