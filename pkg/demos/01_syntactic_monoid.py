"""Three ways to the syntactic monoid of (ab)*.

Run with ``python demos/01_syntactic_monoid.py``.
"""

# %%
import numpy as np

from synalg.freemonoid import fm_embed_word, format_element
from synalg.io import emit_monoid
from synalg.regex import regex_to_dfa
from synalg.syntactic import ContextOracle, oracle_monoid, pair_isomorphism, syntactic_monoid, transition_monoid
from synalg.variety import SET

# %% The minimal DFA has an accepting start, a middle state after a, and a sink.
A = regex_to_dfa("(ab)*", "ab")
print(A, "delta:", {a: A.delta[a].tolist() for a in A.alphabet}, "finals:", np.flatnonzero(A.output).tolist())

# %% Route 1: close the letter maps under composition.
# Every element is named by the shortlex-least word that induces it.
syn = syntactic_monoid(A)
print(emit_monoid(syn.pair))

# aa and bb both send every state to the sink, so they are the same element, a zero.
print("e(aa) == e(bb):", syn.pair.word("aa") == syn.pair.word("bb"))

# %% Route 2: ask the context oracle.  It never builds transition maps of its own;
# two elements are equal iff every context x _ y gives the same answer.
O = ContextOracle(A)
for u, w in [("ab", ""), ("abab", "ab"), ("aa", "bb"), ("aba", "a")]:
    print(f"{u or 'ε'} ~ {w or 'ε'}:", O.equivalent(fm_embed_word(u, SET), fm_embed_word(w, SET)))

orc = oracle_monoid(A)
h = pair_isomorphism(orc.pair, syn.pair)
print("oracle quotient has", orc.syn.size, "elements; isomorphic:", h is not None)

# %% A redundant automaton for the same language also tracks the length mod 2.
# Its transition monoid is bigger, and it maps onto the syntactic one.
from synalg.automata import dfa
from synalg.syntactic import factor_through

n = A.size
delta = {a: np.concatenate([A.delta[a] + n, A.delta[a]]) for a in A.alphabet}  # state q + n*bit
big = dfa("ab", delta, A.initial, [q + n * b for q in np.flatnonzero(A.output) for b in (0, 1)])
T = transition_monoid(big)
fac = factor_through(T, syn)
print(f"redundant: {big.size} states, transition monoid of size {T.monoid.size}")
print("factors onto Syn:", fac.ok, "surjective:", fac.surjective(syn.syn.size))
print("h:", {format_element(u): format_element(syn.syn.names[int(x)]) for u, x in zip(T.monoid.names, fac.h)})
