
import pytest

from synalg.automata import dfa
from synalg.checks import CHECKS, CheckConfig, coarser_language_congruence, run_checks, set_partitions
from synalg.io import parse_automaton_file
from synalg.regex import regex_to_dfa
from synalg.variety import POINTED, SET


def test_config_rejects_zero_instances():
    with pytest.raises(ValueError):
        CheckConfig(instance_count=0)


@pytest.mark.parametrize("kw", [{"max_base_states": 6}, {"checks": ("nope",)}, {"varieties": ()}, {"seed": -1}])
def test_config_rejects(kw):
    with pytest.raises(ValueError):
        CheckConfig(**kw)


def test_deterministic():
    cfg = CheckConfig(seed=42, instance_count=8, dump_dir=None)
    assert run_checks(cfg).to_text() == run_checks(cfg).to_text()


def test_seed_42_tran_eq_oracle():
    r = run_checks(CheckConfig(seed=42, instance_count=100, max_base_states=5, checks=("tran-eq-oracle",), dump_dir=None))
    assert r.ok and r.counts["tran-eq-oracle"]["passed"] == 100


def test_duality_skipped_off_set():
    r = run_checks(CheckConfig(instance_count=4, varieties=(POINTED,), checks=("duality",), dump_dir=None))
    assert r.counts["duality"]["skipped"] == 4


def test_set_partitions_bell_numbers():
    assert [sum(1 for _ in set_partitions(n)) for n in range(6)] == [1, 1, 2, 5, 15, 52]


def test_coarser_congruence_found_on_redundant_dfa():
    A = dfa("a", {"a": [1, 2, 1]}, 0, [0])  # 1 and 2 are interchangeable
    P = coarser_language_congruence(A)
    assert P is not None and P.labels()[1] == P.labels()[2]
    assert coarser_language_congruence(regex_to_dfa("(ab)*", "ab")) is None


def test_failure_dumped(tmp_path, monkeypatch):
    import synalg.checks as checks

    monkeypatch.setitem(checks._RUNNERS, "recognition", lambda A, base, rng: "planted")
    r = run_checks(CheckConfig(instance_count=2, checks=("recognition",), dump_dir=str(tmp_path)))
    assert not r.ok and len(r.failures) == 2
    A = parse_automaton_file(r.failures[0].replay)
    assert A.variety == SET
    assert "FAIL recognition" in r.to_text()


def test_all_checks_listed():
    assert set(CHECKS) == set(run_checks(CheckConfig(instance_count=1, dump_dir=None)).counts)
