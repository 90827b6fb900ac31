import json

import pytest

from conftest import FIXTURES, fixture_text

from bihomega.errors import ParseError
from bihomega.serialization import parse_workbench, serialize_workbench

WORKBENCH_FIXTURES = sorted(
    p.name for p in FIXTURES.glob("*.json") if '"schema"' in p.read_text(encoding="utf-8")
)


@pytest.mark.parametrize("name", WORKBENCH_FIXTURES)
def test_round_trip_byte_identical(name):
    text = fixture_text(name)
    wf = parse_workbench(text)
    again = serialize_workbench(wf)
    assert again == text
    assert serialize_workbench(parse_workbench(again)) == again


def test_missing_product_key_names_the_key():
    wf = parse_workbench(fixture_text("c2.json"))
    data = json.loads(fixture_text("c2.json"))
    del data["algebra"]["product"]["0,1"]
    with pytest.raises(ParseError, match="'0,1'"):
        parse_workbench(json.dumps(data))


def test_noncanonical_rational_rejected_with_suggestion():
    data = json.loads(fixture_text("e1.json"))
    data["algebra"]["product"]["0,0"][0][0][0] = "4/2"
    with pytest.raises(ParseError, match="'2'"):
        parse_workbench(json.dumps(data))


def test_rejects_unknown_schema():
    data = json.loads(fixture_text("e0.json"))
    data["schema"] = "other/9"
    with pytest.raises(ParseError, match="schema"):
        parse_workbench(json.dumps(data))


def test_rejects_bad_table_entry():
    data = json.loads(fixture_text("e0.json"))
    data["monoid"]["table"] = [[3]]
    with pytest.raises(ParseError, match="table"):
        parse_workbench(json.dumps(data))


def test_rejects_wrong_matrix_shape():
    data = json.loads(fixture_text("e1.json"))
    data["algebra"]["p"]["0"] = [["1"]]
    with pytest.raises(ParseError):
        parse_workbench(json.dumps(data))


def test_random_structures_survive_serialization():
    import random

    from bihomega import samples
    from bihomega.algebra import algebra_equal
    from bihomega.bimodule import bimodule_equal
    from bihomega.serialization import WorkbenchFile

    rng = random.Random(2718)
    for _ in range(10):
        a, b = samples.random_valid_pair(rng)
        wf = WorkbenchFile(a.omega, algebra=a, bimodule=b)
        text = serialize_workbench(wf)
        back = parse_workbench(text)
        assert algebra_equal(back.algebra, a)
        assert bimodule_equal(back.bimodule, b)
        assert serialize_workbench(back) == text


def test_optional_monoid_names_round_trip():
    data = json.loads(fixture_text("c2.json"))
    data["monoid"]["names"] = ["e", "g"]
    text = json.dumps(data, sort_keys=True, indent=2) + "\n"
    wf = parse_workbench(text)
    assert wf.monoid_names == ["e", "g"]
    assert serialize_workbench(wf) == text
    data["monoid"]["names"] = ["only-one"]
    with pytest.raises(ParseError, match="names"):
        parse_workbench(json.dumps(data))


def test_parsed_objects_carry_expected_blocks():
    wf = parse_workbench(fixture_text("e1_rbf.json"))
    assert wf.algebra is not None and wf.rota_baxter is not None
    assert wf.bimodule is not None and wf.bimodule.tmap is not None
    wf2 = parse_workbench(fixture_text("e1_rbf_extension.json"))
    assert wf2.extension is not None
    wf3 = parse_workbench(fixture_text("e1_rbf_jet.json"))
    assert wf3.jet is not None and wf3.jet.order == 1
    wf4 = parse_workbench(fixture_text("e1_rbf_pair.json"))
    assert wf4.cocycle_pair is not None
