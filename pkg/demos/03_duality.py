"""The syntactic monoid from atoms of a boolean algebra of languages.

Take the reversal of L, close it under two-sided derivatives, and cut Σ*
into the atoms of the boolean algebra those languages generate.  Letters act
on the atoms, and the resulting monoid is the syntactic monoid of L.

Run with ``python demos/03_duality.py``.
"""

# %%
from synalg.duality import (
    RegularLanguageHandle,
    boolean_closure_atoms,
    reverse,
    two_sided_derivatives,
    verify_mindual,
    verify_syndual,
)
from synalg.io import emit_monoid
from synalg.regex import dfa_to_regex

L = RegularLanguageHandle.from_regex("(ab)*", "ab")
R = reverse(L)
print("reversed:", dfa_to_regex(R.dfa))

# %% Derivatives u⁻¹ R v⁻¹: five distinct languages, the empty one included.
gens = two_sided_derivatives(R)
for g in gens:
    print("  derivative:", dfa_to_regex(g.dfa))

# %% Atoms: nonempty intersections of derivatives and their complements.
V = boolean_closure_atoms(gens)
for z, atom in enumerate(V.atoms):
    print(f"  atom {z}:", dfa_to_regex(atom.dfa))

# %% The dual monoid on the atoms, compared with the transition-monoid route.
check = verify_syndual(L)
print(emit_monoid(check.dual.pair()))
print("same as the syntactic monoid:", check.ok)

# %% With left derivatives only, the atoms carry the minimal automaton instead.
m = verify_mindual(L)
print(f"{m.dual.size} atoms vs {L.size} minimal states; isomorphic: {m.ok}")
