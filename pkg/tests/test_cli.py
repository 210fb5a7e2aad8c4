import io
import json
import subprocess
import sys

import pytest

from synalg.cli import main, parse_variety
from synalg.variety import SEMILATTICE, vect

from test_io import NON_PRIME, PARITY


def call(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def test_synmon_regex():
    code, text = call("synmon", "--regex", "(ab)*", "--alphabet", "ab")
    assert code == 0
    assert "size: 6" in text and "laws: ok" in text


def test_synmon_file(tmp_path):
    p = tmp_path / "parity.json"
    p.write_text(json.dumps(PARITY))
    code, text = call("synmon", "-i", str(p), "--out", "json")
    assert code == 0 and json.loads(text)["size"] == 2


def test_transmon_counts_unminimized(tmp_path):
    code, text = call("transmon", "--regex", "a*", "--alphabet", "ab", "--out", "json")
    assert code == 0 and json.loads(text)["size"] == 2


def test_minimize_json_roundtrips():
    code, text = call("minimize", "--regex", "(ab)*", "--alphabet", "ab", "--out", "json")
    assert code == 0 and len(json.loads(text)["states"]) == 3


def test_oracle_classes():
    code, text = call("oracle", "--regex", "(b*ab*a)*b*", "--alphabet", "ab", "--maxlen", "2", "--out", "json")
    doc = json.loads(text)
    assert code == 0 and doc["size"] == 2 and len(doc["classes"]) == 2


def test_dualize():
    code, text = call("dualize", "--regex", "(ab)*", "--alphabet", "ab")
    assert code == 0
    assert "atoms (6)" in text and "isomorphic to the syntactic monoid: yes" in text


def test_lift_then_synmon(tmp_path):
    code, text = call("lift", "--regex", "(aa)*", "--alphabet", "a", "--to", "jsl", "--out", "json")
    assert code == 0
    p = tmp_path / "jsl.json"
    p.write_text(text)
    code, text = call("synmon", "-i", str(p), "--out", "json")
    assert code == 0 and json.loads(text)["elements"] == ["{}", "{_}", "{a}", "{_,a}"]


def test_check_small(tmp_path):
    code, text = call("check", "--instances", "3", "--dump-dir", str(tmp_path))
    assert code == 0 and text.count("PASS") == 5


def test_exit_validation(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(NON_PRIME))
    assert call("synmon", "-i", str(p))[0] == 2
    p.write_text(json.dumps({**PARITY, "foo": 1}))
    assert call("synmon", "-i", str(p))[0] == 2
    assert call("synmon", "--regex", "(a", "--alphabet", "ab")[0] == 2
    assert call("synmon", "-i", str(tmp_path / "missing.json"))[0] == 2


def test_exit_size_guard(monkeypatch):
    monkeypatch.setenv("SYNALG_SIZE_GUARD", "4")
    assert call("synmon", "--regex", "(ab)*", "--alphabet", "ab")[0] == 3


def test_exit_usage():
    assert call("synmon")[0] == 4
    assert call("synmon", "--regex", "a")[0] == 4
    assert call("lift", "--regex", "a", "--alphabet", "a", "--to", "vect4")[0] == 4
    assert call("check", "--instances", "0")[0] == 4
    with pytest.raises(SystemExit) as err:
        main(["frobnicate"])
    assert err.value.code == 4


def test_parse_variety():
    assert parse_variety("jsl") == SEMILATTICE == parse_variety("semilattice")
    assert parse_variety("vect3") == vect(3) == parse_variety("vect(3)")


def test_console_script_deterministic():
    cmd = [sys.executable, "-m", "synalg.cli", "synmon", "--regex", "(ab)*", "--alphabet", "ab"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and b"size: 6" in a
