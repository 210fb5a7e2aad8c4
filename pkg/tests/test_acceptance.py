"""Acceptance criteria, one PASS/FAIL line each.

Every comparison is exact (tolerance 0); runtime budgets are wall-clock.
Ground-truth values come from brute-force oracles written here, independent
of the library's closure and context code.  Run directly with
``python tests/test_acceptance.py`` or through pytest.
"""

import time
from itertools import combinations

from synalg.automata import derived_automaton, dfa, lift_automaton, random_automaton, validate_automaton
from synalg.checks import CheckConfig, recognition_mismatch, run_checks
from synalg.duality import RegularLanguageHandle, verify_mindual, verify_syndual
from synalg.freemonoid import format_element, parse_element, words_upto
from synalg.minimize import minimize
from synalg.regex import regex_to_dfa
from synalg.syntactic import monoid_validate, oracle_monoid, syntactic_monoid, transition_monoid
from synalg.variety import INVOLUTION, POINTED, SEMILATTICE, SET, vect

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = []

SEED = 42
OTHERS = (POINTED, INVOLUTION, SEMILATTICE, vect(2))
PARITY_A = dfa("a", {"a": [1, 0]}, 0, [0])
PARITY_AB = dfa("ab", {"a": [1, 0], "b": [0, 1]}, 0, [0])


def report(n: int, title: str, ok: bool, detail: str) -> bool:
    line = f"{'PASS' if ok else 'FAIL'} [{n}] {title}: {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    return ok


def checks(check, runs):
    """Run one check over (variety, instances, max base states) groups; (ok, detail, seconds)."""
    t = time.perf_counter()
    parts, ok = [], True
    for v, count, states in runs:
        r = run_checks(CheckConfig(SEED, count, states, 2, (v,), (check,), None))
        c = r.counts[check]
        ok &= r.ok
        parts.append(f"{v} {c['passed']}/{count}")
        for f in r.failures[:3]:
            parts.append(f"#{f.instance}: {f.message}")
    return ok, ", ".join(parts), time.perf_counter() - t


# -- independent oracles ------------------------------------------------------------------


def closure_size(A):
    """Transition maps of a classical DFA closed under composition, as tuples."""
    gens = [tuple(int(x) for x in A.delta[a]) for a in A.alphabet]
    seen = {tuple(range(A.size))}
    todo = list(seen)
    while todo:
        t = todo.pop()
        for g in gens:
            u = tuple(g[q] for q in t)
            if u not in seen:
                seen.add(u)
                todo.append(u)
    return len(seen)


def context_classes(elements, contexts, lang):
    sig = {tuple(lang(x, u, y) for x in contexts for y in contexts) for u in elements}
    return len(sig)


def even(n):
    return int(n % 2 == 0)


# -- criteria ---------------------------------------------------------------------------------


def criterion_1():
    facts = []
    t = time.perf_counter()
    A = regex_to_dfa("(ab)*", "ab")
    n_syn = syntactic_monoid(A).syn.size
    dt = time.perf_counter() - t
    facts.append(("(ab)* states 3", A.size == 3))
    facts.append((f"(ab)* |Syn| 6 (closure {closure_size(A)})", n_syn == 6 == closure_size(A)))
    facts.append((f"(ab)* runtime {dt:.3f}s < 1s", dt < 1.0))

    ws = list(words_upto("ab", 4))
    oracle = context_classes(ws, ws, lambda x, u, y: even((x + u + y).count("a")))
    facts.append((f"parity |Syn| 2 (oracle {oracle})", syntactic_monoid(PARITY_AB).syn.size == 2 == oracle))

    S = syntactic_monoid(lift_automaton(PARITY_A, SEMILATTICE))
    a_words = ["a" * k for k in range(4)]
    sets = [c for k in range(3) for c in combinations(a_words[:3], k)]
    oracle = context_classes(sets, a_words, lambda x, U, y: int(any(even(len(x + u + y)) for u in U)))
    got = sorted(format_element(u) for u in S.syn.names)
    facts.append((f"jsl parity {got} (oracle {oracle})", got == ["{_,a}", "{_}", "{a}", "{}"] and oracle == 4))

    I = syntactic_monoid(lift_automaton(PARITY_A, INVOLUTION))
    elems = [(w, c) for w in a_words for c in (0, 1)]
    oracle = context_classes(elems, a_words, lambda x, u, y: even(len(x + u[0] + y)) ^ u[1])
    e = I.pair.e
    swap = I.syn.carrier.inv.tolist() == [1, 0] and e(parse_element("_", INVOLUTION)) == e(parse_element("!a", INVOLUTION))
    facts.append((f"involution parity |Syn| 2 with swap (oracle {oracle})", I.syn.size == 2 == oracle and swap))

    V = syntactic_monoid(lift_automaton(PARITY_A, vect(2)))
    polys = [[(m >> k) & 1 for k in range(4)] for m in range(16)]  # GF(2)[a], degree <= 3
    oracle = context_classes(
        polys, a_words, lambda x, u, y: sum(c for k, c in enumerate(u) if even(len(x) + k + len(y))) % 2
    )
    facts.append((f"vect(2) parity carrier 4 (oracle {oracle})", V.syn.size == 4 == oracle))
    ok = all(f for _, f in facts)
    bad = [d for d, f in facts if not f]
    return report(1, "known values", ok, "; ".join(bad) if bad else "; ".join(d for d, _ in facts))


def criterion_2():
    runs = [(SET, 200, 5)] + [(v, 50, 3) for v in OTHERS] + [(vect(3), 50, 2)]
    ok, detail, dt = checks("tran-eq-oracle", runs)
    return report(2, "oracle = transition monoid of the minimal automaton", ok and dt < 60, f"{detail}; {dt:.1f}s < 60s")


def criterion_3():
    runs = [(SET, 60, 5)] + [(v, 10, 3) for v in OTHERS]
    ok, detail, dt = checks("universal-property", runs)
    return report(3, "factorization from the unminimized transition monoid", ok and dt < 30, f"{detail}; {dt:.1f}s < 30s")


def criterion_4():
    runs = [(SET, 100, 5)] + [(v, 50, 3) for v in OTHERS]
    ok, detail, _ = checks("minimize-idempotent", runs)
    return report(4, "minimality", ok, detail)


def criterion_5():
    t = time.perf_counter()
    known = [RegularLanguageHandle(regex_to_dfa("(ab)*", "ab")), RegularLanguageHandle(PARITY_AB), RegularLanguageHandle(PARITY_A)]
    rand = [RegularLanguageHandle(random_automaton(SET, 3, "ab", SEED * 1000 + i)) for i in range(50)]
    bad = [i for i, L in enumerate(known + rand) if not (verify_syndual(L).ok and verify_mindual(L).ok)]
    dt = time.perf_counter() - t
    detail = f"3 known + 50 random 3-state DFAs, {53 - len(bad)}/53 agree; {dt:.1f}s < 60s"
    return report(5, "duality", not bad and dt < 60, detail + (f"; failing {bad[:5]}" if bad else ""))


def criterion_6():
    monoids = automata = 0
    problems = []
    for v, count, states in [(SET, 30, 5)] + [(w, 20, 3) for w in OTHERS] + [(vect(3), 10, 2)]:
        for i in range(count):
            A = random_automaton(v, int(1 + i % states), "ab", SEED * 100 + i)
            syn = syntactic_monoid(A)
            pairs = [transition_monoid(A), syn.pair, oracle_monoid(A).pair]
            autos = [A, minimize(A)[0], derived_automaton(syn.syn, dict(syn.pair.e_on_letters), syn.pair.f)]
            if v is SET:
                pairs.append(verify_syndual(RegularLanguageHandle(A)).dual.pair())
            for p in pairs:
                monoids += 1
                problems += [f"{v}#{i} monoid: {x}" for x in monoid_validate(p.monoid)]
            for X in autos:
                automata += 1
                problems += [f"{v}#{i} automaton: {x}" for x in validate_automaton(X)]
    detail = f"{monoids} monoids, {automata} automata, {len(problems)} violations"
    return report(6, "laws", not problems, detail + ("; " + "; ".join(problems[:3]) if problems else ""))


def criterion_7():
    runs = [(SET, 100, 5)] + [(v, 30, 3) for v in OTHERS] + [(vect(3), 10, 2)]
    ok, detail, _ = checks("recognition", runs)
    dual_bad = []
    for r in ("(ab)*", "(b*ab*a)*b*", "a*b*"):
        A = regex_to_dfa(r, "ab")
        if recognition_mismatch(verify_syndual(RegularLanguageHandle(A)).dual.pair(), A, 4):
            dual_bad.append(r)
    detail += f", dual monoids {3 - len(dual_bad)}/3; word length <= 4"
    return report(7, "recognition", ok and not dual_bad, detail)


def test_criterion_1_known_values():
    assert criterion_1()


def test_criterion_2_oracle_equivalence():
    assert criterion_2()


def test_criterion_3_universal_property():
    assert criterion_3()


def test_criterion_4_minimality():
    assert criterion_4()


def test_criterion_5_duality():
    assert criterion_5()


def test_criterion_6_laws():
    assert criterion_6()


def test_criterion_7_recognition():
    assert criterion_7()


if __name__ == "__main__":
    results = [c() for c in (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7)]
    raise SystemExit(0 if all(results) else 1)
