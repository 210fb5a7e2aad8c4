import json

import pytest
from hypothesis import given, settings, strategies as st

from synalg.automata import dfa, lift_automaton, random_automaton
from synalg.io import (
    AutomatonFormatError,
    AutomatonValidationError,
    dumps_automaton,
    emit_automaton,
    emit_monoid,
    parse_automaton,
    parse_automaton_file,
    parse_automaton_text,
)
from synalg.minimize import _tables_equal
from synalg.syntactic import syntactic_monoid, transition_monoid
from synalg.variety import INVOLUTION, POINTED, SEMILATTICE, SET, vect

PARITY = {
    "variety": "set",
    "alphabet": ["a", "b"],
    "states": ["even", "odd"],
    "initial": "even",
    "delta": {"a": {"even": "odd", "odd": "even"}, "b": {"even": "even", "odd": "odd"}},
    "output": {"even": "1", "odd": "0"},
}

# free semilattice on x, y: both generators final but x v y is not
NON_PRIME = {
    "variety": "jsl",
    "alphabet": ["a"],
    "states": ["0", "x", "y", "xy"],
    "ops": {
        "bottom": "0",
        "join": {
            "0": {"0": "0", "x": "x", "y": "y", "xy": "xy"},
            "x": {"0": "x", "x": "x", "y": "xy", "xy": "xy"},
            "y": {"0": "y", "x": "xy", "y": "y", "xy": "xy"},
            "xy": {"0": "xy", "x": "xy", "y": "xy", "xy": "xy"},
        },
    },
    "initial": "x",
    "delta": {"a": {"0": "0", "x": "x", "y": "y", "xy": "xy"}},
    "output": {"0": "0", "x": "1", "y": "1", "xy": "0"},
}


def test_valid_set_file(tmp_path):
    p = tmp_path / "parity.json"
    p.write_text(json.dumps(PARITY))
    A = parse_automaton_file(p)
    assert A.size == 2 and A.names() == ("even", "odd")


def test_unknown_field():
    with pytest.raises(AutomatonFormatError) as err:
        parse_automaton({**PARITY, "foo": 1})
    assert err.value.pointer == "/foo"


def test_non_prime_upset_rejected():
    with pytest.raises(AutomatonValidationError) as err:
        parse_automaton(NON_PRIME)
    assert any("prime upset" in v.law for v in err.value.violations)


@pytest.mark.parametrize(
    "patch, pointer",
    [
        ({"initial": "nowhere"}, "/initial"),
        ({"delta": {"a": {"even": "odd"}, "b": PARITY["delta"]["b"]}}, "/delta/a"),
        ({"output": {"even": "2", "odd": "0"}}, "/output/even"),
        ({"p": 2}, "/p"),
    ],
)
def test_error_pointers(patch, pointer):
    with pytest.raises(AutomatonFormatError) as err:
        parse_automaton({**PARITY, **patch})
    assert err.value.pointer.startswith(pointer)


def test_not_json():
    with pytest.raises(AutomatonFormatError):
        parse_automaton_text("{")


def test_vect_needs_p():
    doc = emit_automaton(lift_automaton(dfa("a", {"a": [1, 0]}, 0, [0]), vect(2)))
    del doc["p"]
    with pytest.raises(AutomatonFormatError) as err:
        parse_automaton(doc)
    assert err.value.pointer == "/p"


@pytest.mark.parametrize("v", [SET, POINTED, INVOLUTION, SEMILATTICE, vect(2), vect(3)], ids=str)
@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 2**32), n=st.integers(1, 3))
def test_roundtrip(v, seed, n):
    if v.tag.value == "vect" and v.p == 3:
        n = min(n, 2)
    A = random_automaton(v, n, "ab", seed)
    B = parse_automaton_text(dumps_automaton(A))
    assert _tables_equal(A, B)
    assert dumps_automaton(B) == dumps_automaton(A)


def test_pointed_basepoint_moved_to_front():
    doc = {
        "variety": "pointed",
        "alphabet": ["a"],
        "states": ["q", "bot"],
        "ops": {"basepoint": "bot"},
        "initial": "q",
        "delta": {"a": {"q": "q", "bot": "bot"}},
        "output": {"q": "1", "bot": "bot"},
    }
    A = parse_automaton(doc)
    assert A.names() == ("bot", "q") and A.initial == 1


def test_emit_trivial_table():
    pair = transition_monoid(dfa("a", {"a": [0]}, 0, [0]))
    lines = emit_monoid(pair).splitlines()
    assert "unit: ε" in lines
    table = [l for l in lines if "|" in l]
    assert table == ["* | ε", "ε | ε"]


def test_emit_z2_table():
    pair = syntactic_monoid(dfa("a", {"a": [1, 0]}, 0, [0])).pair
    table = [l for l in emit_monoid(pair).splitlines() if "|" in l]
    assert table == ["* | ε a", "ε | ε a", "a | a ε"]


def test_emit_json():
    pair = syntactic_monoid(dfa("a", {"a": [1, 0]}, 0, [0])).pair
    doc = json.loads(emit_monoid(pair, "json"))
    assert doc["elements"] == ["_", "a"]
    assert doc["mult"] == [[0, 1], [1, 0]]
    assert doc["unit"] == 0 and doc["generators"] == {"a": 1}
    assert doc["f"] == ["1", "0"] and doc["laws"]["ok"]


def test_emit_deterministic(ab_star):
    for fmt in ("table", "json"):
        assert emit_monoid(syntactic_monoid(ab_star).pair, fmt) == emit_monoid(syntactic_monoid(ab_star).pair, fmt)


def test_emit_bad_format(ab_star):
    with pytest.raises(ValueError):
        emit_monoid(transition_monoid(ab_star), "xml")
