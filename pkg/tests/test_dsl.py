import json

import pytest
from generators import any_racks, fixture_paths, machines
from hypothesis import given, settings
from hypothesis import strategies as st

from tanglemachines import dsl
from tanglemachines.dsl import ColourOutOfRange, DuplicateName, InvalidEdge, TmdSyntaxError, UnknownRegister

BASE = """rack dihedral 3
process open P: a b c
process open Q: x y
interaction agent x { a -> b sign + }
colour a 0
colour b 2
colour c 2
colour x 1
colour y 1
"""


@pytest.mark.parametrize("path", fixture_paths(), ids=lambda p: p.stem)
def test_fixture_round_trip_is_byte_identical(path):
    text = path.read_text()
    m = dsl.parse(text)
    assert dsl.serialize(m) == text
    assert dsl.parse(dsl.serialize(m)) == m


@settings(max_examples=80, deadline=None)
@given(machines(any_racks))
def test_random_round_trip(m):
    text = dsl.serialize(m)
    back = dsl.parse(text)
    assert back == m
    assert dsl.serialize(back) == text


@settings(max_examples=40, deadline=None)
@given(machines(), machines())
def test_equality_iff_serialization_equal(m1, m2):
    assert (m1 == m2) == (dsl.serialize(m1) == dsl.serialize(m2))


def test_comments_edges_and_uncoloured():
    text = """# a comment
rack dihedral 3   # trailing
process open P: a b c
edge a -> b
edge b c
colour a ?
"""
    m = dsl.parse(text)
    assert m.colours["a"] is None and not m.is_coloured()
    assert "edge" not in dsl.serialize(m)


def test_provenance_round_trips():
    m = dsl.parse(BASE + "provenance false-join\n")
    assert m.provenance == ("false-join",)
    assert "provenance false-join" in dsl.serialize(m)


def test_conjugation_and_constant_racks():
    for decl in ("conjugation S3", "constant 1 2 0", "alexander 5 2", "trivial 2"):
        m = dsl.parse(f"rack {decl}\nprocess closed P: a\n")
        assert dsl.parse(dsl.serialize(m)) == m


@pytest.mark.parametrize("text, error, line, col", [
    (BASE.replace("colour y 1", "colour z 1"), UnknownRegister, 9, 8),
    (BASE.replace("colour y 1", "colour y 7"), ColourOutOfRange, 9, 10),
    (BASE.replace("process open Q: x y", "process open P: x y"), DuplicateName, 3, 14),
    (BASE.replace("a -> b sign +", "a -> c sign +"), InvalidEdge, 4, 28),
    (BASE.replace("sign +", "sign *"), TmdSyntaxError, 4, 35),
    (BASE.replace("rack dihedral 3", "rack dihedral x"), TmdSyntaxError, 1, 15),
    ("process open P: a\n", TmdSyntaxError, 1, 1),
    (BASE.replace("process open Q", "process ajar Q"), TmdSyntaxError, 3, 9),
    (BASE + "colour a 0\n", DuplicateName, 10, 8),
])
def test_error_positions(text, error, line, col):
    with pytest.raises(error) as exc:
        dsl.parse(text)
    assert (exc.value.line, exc.value.col) == (line, col)
    assert exc.value.to_dict()["error"] == error.__name__


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 9), st.sampled_from(["zz", "7", "->", "{", "sign"]))
def test_garbage_on_any_line_is_located(lineno, junk):
    lines = BASE.splitlines()
    lines[lineno - 1] = junk + " " + lines[lineno - 1]
    with pytest.raises(dsl.TmdError) as exc:
        dsl.parse("\n".join(lines) + "\n")
    assert exc.value.line == lineno
    assert exc.value.col == 1


def test_json_export():
    d = json.loads(dsl.to_json(dsl.parse(BASE)))
    assert d["interactions"] == [{"agent": "x", "patients": [{"from": "a", "to": "b", "sign": 1}]}]
    assert d["colours"]["b"] == 2
