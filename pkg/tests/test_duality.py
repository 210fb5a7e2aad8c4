import pytest
from hypothesis import given, settings, strategies as st

from synalg.automata import random_automaton
from synalg.duality import (
    RegularLanguageHandle,
    boolean_closure_atoms,
    dual_algebra,
    left_derivatives,
    reverse,
    two_sided_derivatives,
    verify_mindual,
    verify_syndual,
)
from synalg.freemonoid import words_upto
from synalg.minimize import minimize
from synalg.syntactic import monoid_validate, pair_isomorphism, syntactic_monoid
from synalg.variety import SET


def H(r, alphabet="ab"):
    return RegularLanguageHandle.from_regex(r, alphabet)


FULL, EMPTY = H("(a|b)*"), H("∅")
AB_STAR = H("(ab)*")
PARITY = H("(b*ab*a)*b*")


def members(L, n=6):
    return {w for w in words_upto(L.alphabet, n) if L.accepts(w)}


def test_handles_compare_languages():
    assert H("(ab)*") == H("()|ab(ab)*")
    assert H("a*") != H("a*b")
    assert hash(H("(a|b)*")) == hash(H("(a*b*)*"))
    assert FULL.is_full() and EMPTY.is_empty()


def test_reverse_examples():
    assert reverse(EMPTY) == EMPTY
    assert reverse(AB_STAR) == H("(ba)*")
    assert members(reverse(AB_STAR)) == {w[::-1] for w in members(AB_STAR)}
    assert reverse(PARITY) == PARITY


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32), n=st.integers(1, 4))
def test_reverse_by_membership(seed, n):
    L = RegularLanguageHandle(random_automaton(SET, n, "ab", seed))
    assert members(reverse(L)) == {w[::-1] for w in members(L)}
    assert reverse(reverse(L)) == L


def test_derivatives_of_full_and_empty():
    assert two_sided_derivatives(FULL) == (FULL,)
    assert two_sided_derivatives(EMPTY) == (EMPTY,)


def test_derivatives_of_ab_star():
    expected = {H("(ab)*"), H("b(ab)*"), EMPTY, H("(ab)*a"), H("(ba)*")}
    assert set(two_sided_derivatives(AB_STAR)) == expected


def brute_derivatives(L, n=4, k=3):
    """Distinct u^-1 L v^-1, compared by membership on words up to n."""
    seen = set()
    for u in words_upto(L.alphabet, k):
        for v in words_upto(L.alphabet, k):
            seen.add(frozenset(w for w in words_upto(L.alphabet, n) if L.accepts(u + w + v)))
    return seen


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32), n=st.integers(1, 3))
def test_derivatives_by_membership(seed, n):
    L = RegularLanguageHandle(random_automaton(SET, n, "ab", seed))
    mine = {frozenset(members(D, 4)) for D in two_sided_derivatives(L)}
    assert mine == brute_derivatives(L)


def test_atoms_of_full():
    V = boolean_closure_atoms([FULL])
    assert len(V.atoms) == 1 and V.atoms[0] == FULL


def test_atoms_of_parity():
    V = boolean_closure_atoms(left_derivatives(PARITY))
    assert set(V.atoms) == {PARITY, H("b*a(b*ab*a)*b*")}


def test_atoms_partition_words():
    V = boolean_closure_atoms(two_sided_derivatives(H("(ba)*")))
    assert len(V.atoms) == 6
    for w in words_upto("ab", 6):
        assert sum(z.accepts(w) for z in V.atoms) == 1
    assert not any(z.is_empty() for z in V.atoms)


def test_not_closed_rejected():
    with pytest.raises(ValueError):
        boolean_closure_atoms([H("ab")])


def test_dual_of_full_is_trivial():
    D = dual_algebra(boolean_closure_atoms([FULL]))
    assert D.size == 1 and D.pair().monoid.mult.tolist() == [[0]]


def test_dual_of_parity_is_z2():
    R = reverse(PARITY)
    D = dual_algebra(boolean_closure_atoms(two_sided_derivatives(R)), R)
    M = D.pair().monoid
    assert M.size == 2
    assert M.mult.tolist() == [[0, 1], [1, 0]]
    assert D.rep_words == ("", "a")


def test_dual_of_ba_star():
    R = H("(ba)*")
    D = dual_algebra(boolean_closure_atoms(two_sided_derivatives(R)), R)
    assert D.size == 6
    assert monoid_validate(D.pair().monoid) == []
    assert pair_isomorphism(D.pair(), syntactic_monoid(AB_STAR.dfa).pair) is not None


@pytest.mark.parametrize("L", [FULL, AB_STAR, PARITY, EMPTY], ids=["full", "ab*", "parity", "empty"])
def test_verify_known(L):
    c = verify_syndual(L)
    assert c.ok and c.dual.size == c.syn.syn.size
    assert verify_mindual(L).ok


def test_mindual_sizes():
    assert verify_mindual(FULL).dual.size == 1
    assert verify_mindual(AB_STAR).dual.size == 3


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32))
def test_random_three_state(seed):
    L = RegularLanguageHandle(random_automaton(SET, 3, "ab", seed))
    assert verify_syndual(L).ok
    assert verify_mindual(L).ok


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32), n=st.integers(1, 6))
def test_handle_minimizer_matches_minimize(seed, n):
    from synalg.minimize import _tables_equal

    A = random_automaton(SET, n, "abc"[: 1 + seed % 3], seed)
    assert _tables_equal(RegularLanguageHandle(A).dfa, minimize(A)[0])
