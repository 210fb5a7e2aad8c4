import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from synalg.automata import dfa, evaluate, lift_automaton, random_automaton
from synalg.freemonoid import fm_embed_word, fm_enumerate, format_element, parse_element
from synalg.regex import regex_to_dfa
from synalg.syntactic import (
    ContextOracle,
    FiniteDMonoid,
    factor_through,
    monoid_validate,
    oracle_monoid,
    pair_isomorphism,
    syntactic_equivalent,
    syntactic_monoid,
    syntactic_partition_oracle,
    transition_monoid,
)
from synalg.variety import INVOLUTION, POINTED, SEMILATTICE, SET, make_object, vect


def brute_closure(A):
    """Transition maps of a SET automaton as tuples, closed under composition."""
    gens = [tuple(int(x) for x in A.delta[a]) for a in A.alphabet]
    seen = {tuple(range(A.size))}
    frontier = list(seen)
    while frontier:
        nxt = []
        for t in frontier:
            for g in gens:
                u = tuple(g[q] for q in t)
                if u not in seen:
                    seen.add(u)
                    nxt.append(u)
        frontier = nxt
    return seen


def names(pair):
    return [format_element(u) for u in pair.monoid.names]


def test_one_state_trivial():
    T = transition_monoid(dfa("ab", {"a": [0], "b": [0]}, 0, [0]))
    assert T.monoid.size == 1 and T.monoid.mult.tolist() == [[0]]


def test_ab_star_transition_monoid(ab_star):
    T = transition_monoid(ab_star)
    assert T.monoid.size == len(brute_closure(ab_star)) == 6
    assert names(T) == ["_", "a", "b", "aa", "ab", "ba"]
    aa = names(T).index("aa")
    assert T.word("bb") == aa
    assert all(T.monoid.mult[aa, x] == aa == T.monoid.mult[x, aa] for x in range(6))


def test_semilattice_parity_transition_monoid(parity_a):
    T = transition_monoid(lift_automaton(parity_a, SEMILATTICE))
    assert T.monoid.size == 4
    assert names(T) == ["{}", "{_}", "{a}", "{_,a}"]
    assert monoid_validate(T.monoid) == []


@pytest.mark.parametrize(
    "regex, alphabet, size",
    [("(ab)*", "ab", 6), ("(b*ab*a)*b*", "ab", 2), ("(a|b)*", "ab", 1), ("∅", "ab", 1), ("a*b*", "ab", 5)],
)
def test_syntactic_sizes(regex, alphabet, size):
    A = regex_to_dfa(regex, alphabet)
    assert syntactic_monoid(A).syn.size == size
    assert len(brute_closure(A)) == size  # minimal DFA, so the closure is Syn


def test_syntactic_of_unminimized_matches(ab_star):
    raw = regex_to_dfa("(ab)*", "ab", minimal=False)
    assert pair_isomorphism(syntactic_monoid(raw).pair, syntactic_monoid(ab_star).pair) is not None


def test_equivalence_examples(ab_star, parity_a):
    ab, eps = fm_embed_word("ab", SET), fm_embed_word("", SET)
    assert not syntactic_equivalent(ab_star, ab, eps)
    # the separating context a _ b
    assert evaluate(ab_star, fm_embed_word("aabb", SET)) == 0
    assert evaluate(ab_star, fm_embed_word("ab", SET)) == 1
    assert syntactic_equivalent(ab_star, ab, ab)
    assert syntactic_equivalent(parity_a, fm_embed_word("a", SET), fm_embed_word("aaa", SET))


def test_partition_oracle_examples(parity_a, ab_star):
    full = regex_to_dfa("(a|b)*", "ab")
    assert len(syntactic_partition_oracle(full, 3)[1].blocks) == 1
    elems, P = syntactic_partition_oracle(parity_a, 3)
    assert len(P.blocks) == 2
    for block in P.blocks:
        assert len({len(elems[i].payload) % 2 for i in block}) == 1
    assert len(syntactic_partition_oracle(ab_star, 4)[1].blocks) == 6


def test_oracle_signature_is_literal(ab_star):
    O = ContextOracle(ab_star)
    words = [fm_embed_word(w, SET) for w in ("", "a", "b", "ab", "ba", "aa", "bb", "aba", "bab")]
    for u in words:
        for w in words:
            assert O.equivalent(u, w) == (O.key(u) == O.key(w))


def test_factor_non_minimal(ab_star):
    raw = regex_to_dfa("(ab)*", "ab", minimal=False)
    fac = factor_through(transition_monoid(raw), syntactic_monoid(ab_star))
    assert fac.ok and fac.surjective(6)


def test_factor_identity(ab_star):
    syn = syntactic_monoid(ab_star)
    fac = factor_through(syn.pair, syn)
    assert fac.h.tolist() == list(range(6))


def test_factor_different_language(ab_star):
    other = regex_to_dfa("(ab)*|abb", "ab")  # differs only on abb
    fac = factor_through(transition_monoid(other), syntactic_monoid(ab_star))
    assert not fac.ok and fac.counterexample


def test_validate_trivial():
    M = FiniteDMonoid(make_object(SET, 1), np.zeros((1, 1), dtype=np.int64), 0, (fm_embed_word("", SET),))
    assert monoid_validate(M) == []


def test_validate_planted_associativity():
    m = np.array([[0, 1, 2], [1, 2, 1], [2, 2, 2]])
    M = FiniteDMonoid(make_object(SET, 3), m, 0, tuple(fm_embed_word(w, SET) for w in ("", "a", "b")))
    bad = monoid_validate(M)
    assert [v.law for v in bad] == ["multiplication not associative"]
    x, y, z = bad[0].witness
    assert m[m[x, y], z] != m[x, m[y, z]]


def test_validate_pointed_zero():
    m = np.array([[0, 1], [1, 1]])  # the basepoint is not absorbing
    M = FiniteDMonoid(make_object(POINTED, 2), m, 1, (fm_embed_word("", POINTED),) * 2)
    assert any("zero law" in v.law for v in monoid_validate(M))


def test_semiring_of_parity_valid(parity_a):
    pair = syntactic_monoid(lift_automaton(parity_a, SEMILATTICE)).pair
    assert monoid_validate(pair.monoid) == []


# -- independent oracles for the lifted parity language ----------------------------------


def words(n):
    return ["a" * k for k in range(n + 1)]


def classes(elements, contexts, lang):
    sigs = {}
    for u in elements:
        sigs.setdefault(tuple(lang(x, u, y) for x in contexts for y in contexts), []).append(u)
    return list(sigs.values())


def test_semilattice_parity_four_classes(parity_a):
    # L(U) = 1 iff U has an even-length word; sets of at most two words, contexts up to 3
    from itertools import combinations

    ws = words(3)
    sets = [frozenset(c) for k in range(3) for c in combinations(ws, k)]
    lang = lambda x, U, y: int(any((len(x) + len(u) + len(y)) % 2 == 0 for u in U))  # noqa: E731
    cls = classes(sets, words(3), lang)
    assert len(cls) == 4
    S = syntactic_monoid(lift_automaton(parity_a, SEMILATTICE))
    assert S.syn.size == 4
    assert sorted(names(S.pair)) == ["{_,a}", "{_}", "{a}", "{}"]


def test_involution_parity_two_classes(parity_a):
    elems = [(w, c) for w in words(3) for c in (False, True)]
    lang = lambda x, u, y: int(((len(x) + len(u[0]) + len(y)) % 2 == 0) != u[1])  # noqa: E731
    assert len(classes(elems, words(3), lang)) == 2
    S = syntactic_monoid(lift_automaton(parity_a, INVOLUTION))
    M = S.syn
    assert M.size == 2
    assert M.carrier.inv.tolist() == [1, 0]
    # even ~ complemented odd
    e = S.pair.e
    assert e(parse_element("_", INVOLUTION, "a")) == e(parse_element("!a", INVOLUTION, "a"))


def test_vect2_parity_dimension_two(parity_a):
    # polynomials over GF(2) of degree <= 3 in a; L is the parity of even-degree coefficients
    polys = [tuple((m >> k) & 1 for k in range(4)) for m in range(16)]
    lang = lambda x, u, y: sum(c for k, c in enumerate(u) if (len(x) + k + len(y)) % 2 == 0) % 2  # noqa: E731
    assert len(classes(polys, words(3), lang)) == 4
    S = syntactic_monoid(lift_automaton(parity_a, vect(2)))
    assert S.syn.size == 4
    assert monoid_validate(S.syn) == []


# -- the routes agree ------------------------------------------------------------------------


@pytest.mark.parametrize("v", [SET, POINTED, INVOLUTION, SEMILATTICE, vect(2)], ids=str)
@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 2**32), n=st.integers(1, 3))
def test_oracle_agrees_with_transition_route(v, seed, n):
    A = random_automaton(v, n, "ab", seed)
    syn, orc = syntactic_monoid(A), oracle_monoid(A)
    assert pair_isomorphism(orc.pair, syn.pair) is not None


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32), n=st.integers(1, 5))
def test_set_syntactic_matches_brute_closure(seed, n):
    from synalg.minimize import minimize

    A = random_automaton(SET, n, "ab", seed)
    assert syntactic_monoid(A).syn.size == len(brute_closure(minimize(A)[0]))


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32), n=st.integers(1, 4))
def test_recognition_on_words(seed, n):
    A = random_automaton(SET, n, "ab", seed)
    pair = syntactic_monoid(A).pair
    for u in fm_enumerate(SET, "ab", 5):
        assert pair.language(u) == evaluate(A, u)
