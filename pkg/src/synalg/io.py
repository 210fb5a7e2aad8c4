"""JSON automaton files and text/JSON reports of monoids.

Automaton file layout::

    {"variety": "set|pointed|involution|jsl|vect", "p": 2,
     "alphabet": ["a", "b"], "states": ["q0", "q1"],
     "ops": {...}, "initial": "q0",
     "delta": {"a": {"q0": "q1", ...}, ...},
     "output": {"q0": "1", ...}}

``ops`` is omitted for SET and holds, by variety: ``{"basepoint": q}``;
``{"involution": {q: q}}``; ``{"join": {q: {q: q}}, "bottom": q}``;
``{"add": {q: {q: q}}, "zero": q}`` with optional ``"neg"`` and ``"scale"``
(``{"2": {q: q}, ...}``) tables for VECT.  Unknown fields are rejected.
"""

from __future__ import annotations

import json
from pathlib import Path

import jsonschema
import numpy as np

from .automata import DAutomaton, relabel, validate_automaton
from .freemonoid import check_alphabet, format_element
from .syntactic import RecognizingPair, monoid_validate
from .variety import Tag, VarietySpec, Violation, make_object

__all__ = [
    "AutomatonFormatError",
    "AutomatonValidationError",
    "AUTOMATON_SCHEMA",
    "parse_automaton",
    "parse_automaton_text",
    "parse_automaton_file",
    "emit_automaton",
    "dumps_automaton",
    "display_name",
    "emit_monoid",
]


class AutomatonFormatError(ValueError):
    """Structural problem in an automaton file; ``pointer`` is a JSON pointer."""

    def __init__(self, pointer: str, message: str):
        self.pointer = pointer or "/"
        super().__init__(f"{self.pointer}: {message}")


class AutomatonValidationError(ValueError):
    def __init__(self, violations: list[Violation]):
        self.violations = violations
        super().__init__("automaton violates the variety's laws: " + "; ".join(map(str, violations)))


_NAME = {"type": "string", "minLength": 1}
_MAP = {"type": "object", "additionalProperties": _NAME}
_TABLE = {"type": "object", "additionalProperties": _MAP}

AUTOMATON_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "properties": {
        "variety": {"enum": [t.value for t in Tag]},
        "p": {"type": "integer"},
        "alphabet": {"type": "array", "items": {"type": "string", "minLength": 1, "maxLength": 1}, "uniqueItems": True},
        "states": {"type": "array", "items": _NAME, "minItems": 1, "uniqueItems": True},
        "ops": {
            "type": "object",
            "properties": {
                "basepoint": _NAME,
                "involution": _MAP,
                "join": _TABLE,
                "bottom": _NAME,
                "add": _TABLE,
                "zero": _NAME,
                "neg": _MAP,
                "scale": {"type": "object", "additionalProperties": _MAP},
            },
            "additionalProperties": False,
        },
        "initial": _NAME,
        "delta": {"type": "object", "additionalProperties": _MAP},
        "output": {"type": "object", "additionalProperties": {"type": ["string", "integer"]}},
    },
    "required": ["variety", "alphabet", "states", "initial", "delta", "output"],
    "additionalProperties": False,
}

_OPS_FOR = {
    Tag.SET: set(),
    Tag.POINTED: {"basepoint"},
    Tag.INVOLUTION: {"involution"},
    Tag.SEMILATTICE: {"join", "bottom"},
    Tag.VECT: {"add", "zero"},
}
_OPTIONAL_OPS = {Tag.VECT: {"neg", "scale"}}


def _esc(key) -> str:
    return str(key).replace("~", "~0").replace("/", "~1")


def _pointer(path) -> str:
    return "".join("/" + _esc(p) for p in path)


def _sub(where: str, key) -> str:
    return f"{where}/{_esc(key)}"


def _schema_check(data) -> None:
    validator = jsonschema.Draft202012Validator(AUTOMATON_SCHEMA)
    errors = sorted(validator.iter_errors(data), key=lambda e: (list(map(str, e.absolute_path)), e.message))
    if not errors:
        return
    err = errors[0]
    path = list(err.absolute_path)
    if err.validator == "additionalProperties" and isinstance(err.instance, dict):
        known = set(err.schema.get("properties", {}))
        extra = sorted(k for k in err.instance if k not in known)
        if extra:
            raise AutomatonFormatError(_pointer(path + [extra[0]]), f"unknown field {extra[0]!r}")
    raise AutomatonFormatError(_pointer(path), err.message)


def parse_automaton(data: dict) -> DAutomaton:
    """Strictly parse a decoded JSON document and validate the automaton."""
    _schema_check(data)
    tag = Tag(data["variety"])
    if tag is Tag.VECT:
        if "p" not in data:
            raise AutomatonFormatError("/p", "vect automata need a prime p")
        try:
            v = VarietySpec(tag, data["p"])
        except ValueError as exc:
            raise AutomatonFormatError("/p", str(exc)) from None
    else:
        if "p" in data:
            raise AutomatonFormatError("/p", f"p is only allowed for vect, not {tag.value}")
        v = VarietySpec(tag)
    states = list(data["states"])
    idx = {s: i for i, s in enumerate(states)}
    n = len(states)

    def state(name: str, where: str) -> int:
        if name not in idx:
            raise AutomatonFormatError(where, f"unknown state {name!r}")
        return idx[name]

    def total_map(m: dict, where: str) -> list[int]:
        missing = [s for s in states if s not in m]
        if missing:
            raise AutomatonFormatError(where, f"no entry for state {missing[0]!r}")
        extra = [s for s in m if s not in idx]
        if extra:
            raise AutomatonFormatError(_sub(where, extra[0]), f"unknown state {extra[0]!r}")
        return [state(m[s], _sub(where, s)) for s in states]

    def table(m: dict, where: str) -> list[list[int]]:
        missing = [s for s in states if s not in m]
        if missing:
            raise AutomatonFormatError(where, f"no row for state {missing[0]!r}")
        extra = [s for s in m if s not in idx]
        if extra:
            raise AutomatonFormatError(_sub(where, extra[0]), f"unknown state {extra[0]!r}")
        return [total_map(m[s], _sub(where, s)) for s in states]

    ops = data.get("ops")
    need = _OPS_FOR[tag]
    if not need:
        if ops is not None:
            raise AutomatonFormatError("/ops", "set automata take no ops")
        ops = {}
    else:
        if ops is None:
            raise AutomatonFormatError("/ops", f"{tag.value} automata need ops {sorted(need)}")
        for key in sorted(need - set(ops)):
            raise AutomatonFormatError(f"/ops/{key}", "missing")
        for key in sorted(set(ops) - need - _OPTIONAL_OPS.get(tag, set())):
            raise AutomatonFormatError(f"/ops/{key}", f"not an operation of {tag.value}")

    order = list(range(n))
    kw: dict = {}
    if tag is Tag.POINTED:
        b = state(ops["basepoint"], "/ops/basepoint")
        order = [b] + [i for i in range(n) if i != b]
    elif tag is Tag.INVOLUTION:
        kw["inv"] = total_map(ops["involution"], "/ops/involution")
    elif tag is Tag.SEMILATTICE:
        kw["join"] = table(ops["join"], "/ops/join")
        kw["bottom"] = state(ops["bottom"], "/ops/bottom")
    elif tag is Tag.VECT:
        kw["add"] = table(ops["add"], "/ops/add")
        kw["zero"] = state(ops["zero"], "/ops/zero")
        if "neg" in ops:
            kw["neg"] = total_map(ops["neg"], "/ops/neg")
        if "scale" in ops:
            sc = ops["scale"]
            bad = [c for c in sc if not c.isdigit() or not 0 <= int(c) < v.p]
            if bad:
                raise AutomatonFormatError(_sub("/ops/scale", bad[0]), f"not a scalar of GF({v.p})")
            r = np.arange(n)
            # unlisted scalars are filled in from the addition table
            rows = [np.full(n, kw["zero"], dtype=np.int64)]
            for _ in range(1, v.p):
                rows.append(np.asarray(kw["add"])[rows[-1], r])
            for c in sorted(sc, key=int):
                rows[int(c)] = np.array(total_map(sc[c], _sub("/ops/scale", c)))
            kw["smul"] = np.stack(rows)

    alphabet = list(data["alphabet"])
    if not alphabet:
        raise AutomatonFormatError("/alphabet", "alphabet is empty")
    delta_in = data["delta"]
    for a in delta_in:
        if a not in alphabet:
            raise AutomatonFormatError(_sub("/delta", a), f"{a!r} is not in the alphabet")
    delta = {}
    for a in alphabet:
        if a not in delta_in:
            raise AutomatonFormatError(_sub("/delta", a), "no transitions for this letter")
        delta[a] = total_map(delta_in[a], _sub("/delta", a))
    out_in = data["output"]
    for s in out_in:
        state(s, _sub("/output", s))
    output = []
    for s in states:
        if s not in out_in:
            raise AutomatonFormatError(_sub("/output", s), "no output for this state")
        try:
            output.append(v.parse_output_label(out_in[s]))
        except ValueError as exc:
            raise AutomatonFormatError(_sub("/output", s), str(exc)) from None
    initial = state(data["initial"], "/initial")

    try:
        check_alphabet(alphabet)
    except ValueError as exc:
        raise AutomatonFormatError("/alphabet", str(exc)) from None
    try:
        Q = make_object(v, n, **kw)
    except (ValueError, IndexError) as exc:
        raise AutomatonFormatError("/ops", str(exc)) from None
    A = DAutomaton(v, tuple(alphabet), Q, delta, initial, output, tuple(states))
    if tag is Tag.POINTED and order[0] != 0:
        A = _move_basepoint(A, order)
    bad = validate_automaton(A)
    if bad:
        raise AutomatonValidationError(bad)
    return A


def _move_basepoint(A: DAutomaton, order: list[int]) -> DAutomaton:
    return relabel(A, order, make_object(A.variety, A.size))


def parse_automaton_text(text: str) -> DAutomaton:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AutomatonFormatError("/", f"not JSON: {exc}") from None
    return parse_automaton(data)


def parse_automaton_file(path) -> DAutomaton:
    return parse_automaton_text(Path(path).read_text(encoding="utf-8"))


def emit_automaton(A: DAutomaton) -> dict:
    """The JSON document for ``A`` (inverse of :func:`parse_automaton`)."""
    names = A.names()
    v = A.variety
    Q = A.states
    doc: dict = {"variety": v.tag.value}
    if v.tag is Tag.VECT:
        doc["p"] = v.p
    doc["alphabet"] = list(A.alphabet)
    doc["states"] = list(names)

    def m(t) -> dict:
        return {names[i]: names[int(j)] for i, j in enumerate(t)}

    def tab(T) -> dict:
        return {names[i]: m(T[i]) for i in range(A.size)}

    if v.tag is Tag.POINTED:
        doc["ops"] = {"basepoint": names[0]}
    elif v.tag is Tag.INVOLUTION:
        doc["ops"] = {"involution": m(Q.inv)}
    elif v.tag is Tag.SEMILATTICE:
        doc["ops"] = {"join": tab(Q.join), "bottom": names[Q.bottom]}
    elif v.tag is Tag.VECT:
        doc["ops"] = {"add": tab(Q.add), "zero": names[Q.zero]}
    doc["initial"] = names[A.initial]
    doc["delta"] = {a: m(A.delta[a]) for a in A.alphabet}
    doc["output"] = {names[i]: v.output_label(y) for i, y in enumerate(A.output)}
    return doc


def dumps_automaton(A: DAutomaton) -> str:
    return json.dumps(emit_automaton(A), indent=2, ensure_ascii=False) + "\n"


# -- monoid reports ----------------------------------------------------------------


def display_name(u) -> str:
    """Element name for people: the empty word shows as ε."""
    return format_element(u).replace("_", "ε")


def emit_monoid(pair: RecognizingPair, format: str = "table") -> str:
    """Deterministic report of a recognizer.

    Elements appear in id order, which is canonical: constants, then words by
    their shortlex-least representative, then compound elements.
    """
    M = pair.monoid
    v = M.variety
    names = [display_name(u) for u in M.names]
    violations = monoid_validate(M)
    if format == "json":
        doc: dict = {
            "variety": str(v),
            "size": M.size,
            "elements": [format_element(u) for u in M.names],
            "unit": M.unit,
            "generators": {a: int(x) for a, x in pair.e_on_letters.items()},
            "mult": M.mult.tolist(),
            "f": [v.output_label(y) for y in pair.f],
        }
        C = M.carrier
        if v.tag is Tag.INVOLUTION:
            doc["involution"] = C.inv.tolist()
        elif v.tag is Tag.SEMILATTICE:
            doc["join"] = C.join.tolist()
            doc["bottom"] = C.bottom
        elif v.tag is Tag.VECT:
            doc["add"] = C.add.tolist()
            doc["zero"] = C.zero
        doc["laws"] = {"ok": not violations, "violations": [str(x) for x in violations]}
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    if format != "table":
        raise ValueError(f"unknown format {format!r} (use table or json)")
    lines = [
        f"variety: {v}",
        f"size: {M.size}",
        f"unit: {names[M.unit]}",
        "generators: " + ", ".join(f"{a} -> {names[x]}" for a, x in pair.e_on_letters.items()),
        "",
    ]
    width = max(len(s) for s in names)
    cell = lambda s: s.ljust(width)  # noqa: E731
    lines.append(" ".join([cell("*"), "|"] + [cell(s) for s in names]).rstrip())
    lines.append("-" * len(lines[-1]))
    for x in range(M.size):
        row = [cell(names[x]), "|"] + [cell(names[int(y)]) for y in M.mult[x]]
        lines.append(" ".join(row).rstrip())
    lines += ["", "f: " + ", ".join(f"{names[x]} -> {v.output_label(y)}" for x, y in enumerate(pair.f))]
    if v.tag is Tag.INVOLUTION:
        lines.append("involution: " + ", ".join(f"{names[x]} -> {names[int(y)]}" for x, y in enumerate(M.carrier.inv)))
    lines.append("laws: ok" if not violations else "laws: " + "; ".join(map(str, violations)))
    return "\n".join(lines) + "\n"
