"""The parity language in every variety.

The same classical language, even number of a's over {a}, is lifted to
pointed sets, sets with involution, semilattices and vector spaces, and its
syntactic algebra is computed in each.

Run with ``python demos/02_varieties.py``.
"""

# %%
from synalg.automata import dfa, evaluate, lift_automaton
from synalg.freemonoid import fm_enumerate, format_element
from synalg.io import emit_monoid
from synalg.syntactic import monoid_validate, syntactic_monoid
from synalg.variety import INVOLUTION, POINTED, SEMILATTICE, vect

parity = dfa("a", {"a": [1, 0]}, 0, [0])

# %% Sizes grow with the structure: a pointed set adds a zero, a semilattice
# adds joins of classes, and a vector space over GF(p) adds all linear combinations.
for v in (POINTED, INVOLUTION, SEMILATTICE, vect(2), vect(3)):
    A = lift_automaton(parity, v)
    S = syntactic_monoid(A)
    names = [format_element(u) for u in S.syn.names]
    print(f"{str(v):10} automaton {A.size:2} states, Syn {S.syn.size:2} elements, laws ok: {not monoid_validate(S.syn)}")
    print("           ", names[:9], "..." if len(names) > 9 else "")

# %% The semilattice case in full: {} is the zero, and {_,a} absorbs both letters.
print(emit_monoid(syntactic_monoid(lift_automaton(parity, SEMILATTICE)).pair))

# %% The lifted language on compound elements: a set of words is accepted iff one
# of its words is, a complemented word iff the word is not.
J = lift_automaton(parity, SEMILATTICE)
for u in list(fm_enumerate(SEMILATTICE, "a", 2))[3:8]:
    print(format_element(u), "->", evaluate(J, u))
I = lift_automaton(parity, INVOLUTION)
for u in list(fm_enumerate(INVOLUTION, "a", 1)):
    print(format_element(u), "->", evaluate(I, u))
