"""Seeded property checks over random automata.

Each check is a claim that must hold for every automaton; a failing instance is
written out as an automaton file so it can be replayed with the CLI.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterator

import numpy as np

from .automata import DAutomaton, dfa, evaluate, lift_automaton, random_automaton, validate_automaton
from .duality import RegularLanguageHandle, verify_mindual, verify_syndual
from .freemonoid import fm_enumerate, format_element
from .io import dumps_automaton
from .minimize import _tables_equal, automaton_iso, minimize
from .syntactic import (
    RecognizingPair,
    factor_through,
    monoid_validate,
    oracle_monoid,
    pair_isomorphism,
    syntactic_monoid,
    syntactic_partition_oracle,
    transition_monoid,
)
from .variety import SET, NotACongruence, Partition, Tag, VarietySpec, quotient_by_partition

__all__ = [
    "CHECKS",
    "CheckConfig",
    "CheckFailure",
    "CheckReport",
    "run_checks",
    "set_partitions",
    "coarser_language_congruence",
    "recognition_mismatch",
]

CHECKS = ("tran-eq-oracle", "universal-property", "duality", "minimize-idempotent", "recognition")
LETTERS = "abcdefgh"
RECOGNITION_LENGTH = 4


@dataclass(frozen=True)
class CheckConfig:
    seed: int = 42
    instance_count: int = 100
    max_base_states: int = 4
    alphabet_size: int = 2
    varieties: tuple[VarietySpec, ...] = (SET,)
    checks: tuple[str, ...] = CHECKS
    dump_dir: str | None = "synalg-failures"

    def __post_init__(self):
        if self.instance_count < 1:
            raise ValueError("instance_count must be at least 1")
        if not 1 <= self.max_base_states <= 5:
            raise ValueError("max_base_states must be between 1 and 5")
        if not 1 <= self.alphabet_size <= len(LETTERS):
            raise ValueError(f"alphabet_size must be between 1 and {len(LETTERS)}")
        if not self.varieties:
            raise ValueError("choose at least one variety")
        unknown = [c for c in self.checks if c not in CHECKS]
        if unknown or not self.checks:
            raise ValueError(f"unknown checks {unknown}; choose from {', '.join(CHECKS)}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class CheckFailure:
    check: str
    instance: int
    variety: str
    message: str
    replay: str | None


@dataclass
class CheckReport:
    counts: dict = field(default_factory=dict)
    failures: list[CheckFailure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_text(self) -> str:
        lines = []
        for check in CHECKS:
            if check in self.counts:
                c = self.counts[check]
                verdict = "PASS" if c["failed"] == 0 else "FAIL"
                lines.append(f"{verdict} {check}: {c['passed']} passed, {c['failed']} failed, {c['skipped']} skipped")
        for f in self.failures:
            where = f" (replay: {f.replay})" if f.replay else ""
            lines.append(f"  {f.check} #{f.instance} [{f.variety}]: {f.message}{where}")
        return "\n".join(lines) + "\n"


# -- helpers shared with the test-suite ---------------------------------------------


def set_partitions(n: int) -> Iterator[list[int]]:
    """All partitions of ``range(n)`` as restricted growth strings."""
    labels = [0] * n

    def rec(i: int, top: int):
        if i == n:
            yield list(labels)
            return
        for b in range(top + 2):
            labels[i] = b
            yield from rec(i + 1, max(top, b))

    if n == 0:
        yield []
    else:
        yield from rec(1, 0)


def coarser_language_congruence(M: DAutomaton) -> Partition | None:
    """A non-trivial state partition that is a congruence of the automaton and keeps outputs, if any.

    Exhaustive over all partitions, so meant for small carriers.
    """
    n = M.size
    for lab in set_partitions(n):
        if max(lab, default=0) == n - 1:
            continue  # discrete
        lab = np.array(lab)
        if any(len(set(M.output[lab == b].tolist())) > 1 for b in range(lab.max() + 1)):
            continue
        if any(len(set(lab[M.delta[a][lab == b]].tolist())) > 1 for a in M.alphabet for b in range(lab.max() + 1)):
            continue
        P = Partition.from_labels(lab)
        try:
            quotient_by_partition(M.states, P)
        except NotACongruence:
            continue
        return P
    return None


def recognition_mismatch(pair: RecognizingPair, A: DAutomaton, max_len: int) -> str | None:
    """First free element on which ``f(e(u))`` differs from the automaton's value."""
    for u in fm_enumerate(A.variety, A.alphabet, max_len):
        if pair.language(u) != evaluate(A, u):
            return f"f(e({format_element(u)})) != L({format_element(u)})"
    return None


def _laws(pairs, automata) -> str | None:
    for A in automata:
        bad = validate_automaton(A)
        if bad:
            return f"automaton law: {bad[0]}"
    for p in pairs:
        bad = monoid_validate(p.monoid)
        if bad:
            return f"monoid law: {bad[0]}"
    return None


def _partition_len(v: VarietySpec) -> int:
    # compound elements grow fast with word length for sets and polynomials
    return 3 if v.tag in (Tag.SET, Tag.POINTED, Tag.INVOLUTION) else 2


# -- the checks ----------------------------------------------------------------------


def _tran_eq_oracle(A: DAutomaton, base: DAutomaton, rng) -> str | None:
    syn = syntactic_monoid(A)
    orc = oracle_monoid(A)
    if orc.syn.size != syn.syn.size:
        return f"oracle finds {orc.syn.size} classes, transition monoid of the minimal automaton has {syn.syn.size}"
    if pair_isomorphism(orc.pair, syn.pair) is None:
        return "oracle quotient and syntactic monoid have the same size but different tables"
    elems, P = syntactic_partition_oracle(A, _partition_len(A.variety))
    if not np.array_equal(P.labels(), Partition.from_labels([syn.pair.e(u) for u in elems]).labels()):
        return "oracle partition of short free elements differs from the syntactic classes"
    return _laws([syn.pair, orc.pair], [A])


def _universal(A: DAutomaton, base: DAutomaton, rng) -> str | None:
    T = transition_monoid(A)
    syn = syntactic_monoid(A)
    fac = factor_through(T, syn)
    if not fac.ok:
        return f"no factorization: {fac.counterexample}"
    if not fac.surjective(syn.syn.size):
        return "factorization is not surjective"
    return _laws([T], [])


def _duality(A: DAutomaton, base: DAutomaton, rng) -> str | None:
    if A.variety.tag is not Tag.SET:
        return "skip"
    L = RegularLanguageHandle(A)
    c = verify_syndual(L)
    if not c.ok:
        return f"dual monoid: {c.reason}"
    m = verify_mindual(L)
    if not m.ok:
        return f"dual automaton: {m.reason}"
    return None


def _padded(base: DAutomaton, rng) -> DAutomaton:
    """Another DFA for the same language: states doubled by an ignored bit, then shuffled."""
    n = base.size
    perm = rng.permutation(2 * n)
    flip = {a: int(rng.integers(2)) for a in base.alphabet}
    delta = {}
    for a in base.alphabet:
        d = np.empty(2 * n, dtype=np.int64)
        for bit in range(2):
            for q in range(n):
                d[perm[bit * n + q]] = perm[(bit ^ flip[a]) * n + int(base.delta[a][q])]
        delta[a] = d
    finals = [perm[bit * n + q] for bit in range(2) for q in range(n) if base.output[q]]
    return dfa(base.alphabet, delta, int(perm[base.initial]), finals)


def _minimize(A: DAutomaton, base: DAutomaton, rng) -> str | None:
    M = minimize(A)[0]
    if not _tables_equal(minimize(M)[0], M):
        return "minimize is not idempotent"
    other = _padded(base, rng)
    if A.variety.tag is not Tag.SET:
        other = lift_automaton(other, A.variety)
    if automaton_iso(minimize(other)[0], M) is None:
        return "two automata for the same language minimize to non-isomorphic results"
    if M.size <= 6:
        P = coarser_language_congruence(M)
        if P is not None:
            return f"minimal automaton has a coarser language-preserving congruence {P.blocks}"
    return _laws([], [M, other])


def _recognition(A: DAutomaton, base: DAutomaton, rng) -> str | None:
    pairs = (
        ("transition monoid", transition_monoid(A)),
        ("syntactic monoid", syntactic_monoid(A).pair),
        ("oracle quotient", oracle_monoid(A).pair),
    )
    for name, pair in pairs:
        bad = recognition_mismatch(pair, A, RECOGNITION_LENGTH)
        if bad:
            return f"{name}: {bad}"
    return None


_RUNNERS: dict[str, Callable] = {
    "tran-eq-oracle": _tran_eq_oracle,
    "universal-property": _universal,
    "duality": _duality,
    "minimize-idempotent": _minimize,
    "recognition": _recognition,
}


def instance(cfg: CheckConfig, i: int) -> tuple[DAutomaton, DAutomaton]:
    """The ``i``-th random instance: (automaton, its classical base DFA)."""
    rng = np.random.default_rng([cfg.seed, i])
    v = cfg.varieties[i % len(cfg.varieties)]
    n = int(rng.integers(1, cfg.max_base_states + 1))
    sub = int(rng.integers(2**63))
    alphabet = tuple(LETTERS[: cfg.alphabet_size])
    base = random_automaton(SET, n, alphabet, sub)
    return (base if v.tag is Tag.SET else lift_automaton(base, v)), base


def run_checks(cfg: CheckConfig) -> CheckReport:
    """Run every selected check on every instance; deterministic in ``cfg.seed``."""
    report = CheckReport({c: {"passed": 0, "failed": 0, "skipped": 0} for c in CHECKS if c in cfg.checks})
    for i in range(cfg.instance_count):
        A, base = instance(cfg, i)
        for check in CHECKS:
            if check not in cfg.checks:
                continue
            rng = np.random.default_rng([cfg.seed, i, CHECKS.index(check)])
            try:
                msg = _RUNNERS[check](A, base, rng)
            except Exception as exc:  # a crash is a failed claim too
                msg = f"{type(exc).__name__}: {exc}"
            if msg == "skip":
                report.counts[check]["skipped"] += 1
                continue
            if msg is None:
                report.counts[check]["passed"] += 1
                continue
            report.counts[check]["failed"] += 1
            replay = None
            if cfg.dump_dir:
                path = Path(cfg.dump_dir) / f"{check}-{cfg.seed}-{i}.json"
                path.parent.mkdir(parents=True, exist_ok=True)
                path.write_text(dumps_automaton(A), encoding="utf-8")
                replay = str(path)
            report.failures.append(CheckFailure(check, i, str(A.variety), msg, replay))
    return report
