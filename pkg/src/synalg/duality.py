"""Syntactic monoids from atoms of local varieties of languages.

Classical (boolean) case only.  The smallest boolean algebra of languages that
contains ``L^rev`` and is closed under left and right derivatives is finite;
its atoms carry an automaton (``z --a--> z'`` iff ``z ⊆ a^-1 z'``) and a monoid
structure that turn out to be the syntactic monoid of ``L``.  This module
computes that structure from scratch, only from language operations, so it can
be compared with :func:`synalg.syntactic.syntactic_monoid`.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .automata import DAutomaton, check_size, dfa, run
from .freemonoid import fm_embed_word
from .minimize import automaton_iso
from .regex import regex_to_dfa, subset_construction
from .syntactic import FiniteDMonoid, RecognizingPair, SyntacticResult, pair_isomorphism, syntactic_monoid
from .variety import SET, Tag, make_object

__all__ = [
    "RegularLanguageHandle",
    "NonFunctionalTransition",
    "LocalVariety",
    "DualAlgebra",
    "DualityCheck",
    "reverse",
    "two_sided_derivatives",
    "left_derivatives",
    "boolean_closure_atoms",
    "dual_algebra",
    "verify_syndual",
    "verify_mindual",
]


class NonFunctionalTransition(ValueError):
    def __init__(self, atom: int, letter: str, targets: Sequence[int]):
        self.atom, self.letter, self.targets = atom, letter, tuple(targets)
        super().__init__(
            f"atom {atom} has {len(self.targets)} candidate successors on {letter!r} "
            "(the generators are not closed under derivatives)"
        )


def _classical_minimal(alphabet, delta: dict, initial: int, output: np.ndarray) -> DAutomaton:
    """Minimal DFA numbered by least reaching word, as :func:`minimize` numbers it.

    Plain breadth-first reachability plus Moore refinement; handles only ever
    hold classical DFAs, so this skips the general algebra machinery.
    """
    order = [initial]
    pos = {initial: 0}
    for q in order:
        for a in alphabet:
            r = int(delta[a][q])
            if r not in pos:
                pos[r] = len(order)
                order.append(r)
    idx = np.array(order, dtype=np.int64)
    remap = np.full(len(output), -1, dtype=np.int64)
    remap[idx] = np.arange(len(idx))
    d = {a: remap[np.asarray(delta[a])[idx]] for a in alphabet}
    labels = np.unique(np.asarray(output)[idx], return_inverse=True)[1].reshape(-1)
    n = len(idx)
    while True:
        new = labels
        for a in alphabet:  # fold one column at a time so keys stay 1-D integers
            new = np.unique(new * n + labels[d[a]], return_inverse=True)[1].reshape(-1)
        if new.max() == labels.max():
            break
        labels = new
    # blocks numbered by their first state, which is already in least-word order
    first = {}
    for q, b in enumerate(labels.tolist()):
        first.setdefault(b, len(first))
    lab = np.array([first[b] for b in labels.tolist()], dtype=np.int64)
    k = len(first)
    reps = np.unique(lab, return_index=True)[1]
    delta_min = {a: lab[d[a][reps]] for a in alphabet}
    out = np.asarray(output)[idx][reps]
    return dfa(alphabet, delta_min, 0, np.flatnonzero(out)) if k else None


class RegularLanguageHandle:
    """A regular language, held as its canonically numbered minimal DFA.

    Two handles are equal iff their languages are equal, because the minimal
    DFA is unique up to isomorphism and the numbering is canonical.
    """

    __slots__ = ("dfa", "_key")

    def __init__(self, A: DAutomaton):
        if A.variety.tag is not Tag.SET:
            raise ValueError("language handles hold classical DFAs")
        M = _classical_minimal(A.alphabet, A.delta, A.initial, A.output)
        self.dfa = M
        parts = [",".join(M.alphabet).encode(), np.int64(M.initial).tobytes(), M.output.tobytes()]
        parts += [M.delta[a].tobytes() for a in M.alphabet]
        self._key = b"|".join(parts)

    @classmethod
    def from_regex(cls, text: str, alphabet) -> RegularLanguageHandle:
        return cls(regex_to_dfa(text, alphabet))

    @classmethod
    def from_dfa(cls, alphabet, delta, initial: int, finals) -> RegularLanguageHandle:
        return cls(dfa(alphabet, delta, initial, finals))

    @property
    def alphabet(self) -> tuple[str, ...]:
        return self.dfa.alphabet

    @property
    def size(self) -> int:
        return self.dfa.size

    def accepts(self, word: str) -> bool:
        return bool(self.dfa.output[run(self.dfa, word)])

    def is_empty(self) -> bool:
        return self.size == 1 and not self.dfa.output[0]

    def is_full(self) -> bool:
        return self.size == 1 and bool(self.dfa.output[0])

    def with_state(self, initial: int | None = None, finals: np.ndarray | None = None) -> RegularLanguageHandle:
        """Same transitions, another initial state and/or final-state mask."""
        M = self.dfa
        out = M.output if finals is None else np.asarray(finals, dtype=np.int64)
        return RegularLanguageHandle(
            DAutomaton(SET, M.alphabet, M.states, M.delta, M.initial if initial is None else initial, out)
        )

    def left_derivative(self, a: str) -> RegularLanguageHandle:
        """``a^-1 L = {w : aw in L}``."""
        return self.with_state(initial=int(self.dfa.delta[a][self.dfa.initial]))

    def right_derivative(self, a: str) -> RegularLanguageHandle:
        """``L a^-1 = {w : wa in L}``."""
        return self.with_state(finals=self.dfa.output[self.dfa.delta[a]])

    def sort_key(self) -> tuple:
        return (self.size, self._key)

    def __eq__(self, other) -> bool:
        return isinstance(other, RegularLanguageHandle) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"RegularLanguageHandle({self.size} states)"


def reverse(L: RegularLanguageHandle) -> RegularLanguageHandle:
    """Minimal DFA of the reversed language (reverse the edges, then determinize)."""
    M = L.dfa
    trans: list[dict[str, set[int]]] = [{} for _ in range(M.size)]
    for a in M.alphabet:
        for p, q in enumerate(M.delta[a].tolist()):
            trans[q].setdefault(a, set()).add(p)
    finals = set(np.flatnonzero(M.output).tolist())
    return RegularLanguageHandle(subset_construction(M.alphabet, finals, trans, {M.initial}))


def _preimage_masks(M: DAutomaton) -> list[np.ndarray]:
    """Every final-state mask ``{q : q·v in F}`` over all words ``v``, first found first."""
    seen = {M.output.tobytes()}
    masks = [M.output]
    queue = deque(masks)
    while queue:
        S = queue.popleft()
        for a in M.alphabet:
            T = S[M.delta[a]]
            if T.tobytes() not in seen:
                seen.add(T.tobytes())
                check_size(len(masks) + 1, "right derivatives")
                masks.append(T)
                queue.append(T)
    return masks


def _dedupe(handles: Iterable[RegularLanguageHandle]) -> tuple[RegularLanguageHandle, ...]:
    return tuple(sorted(set(handles), key=RegularLanguageHandle.sort_key))


def two_sided_derivatives(L: RegularLanguageHandle) -> tuple[RegularLanguageHandle, ...]:
    """All distinct ``u^-1 L v^-1``, from pairs (state reached by ``u``, preimage of F under ``v``)."""
    M = L.dfa
    masks = _preimage_masks(M)
    check_size(M.size * len(masks), "two-sided derivatives")
    return _dedupe(L.with_state(initial=p, finals=S) for p in range(M.size) for S in masks)


def left_derivatives(L: RegularLanguageHandle) -> tuple[RegularLanguageHandle, ...]:
    """All distinct ``u^-1 L``; one per state of the minimal DFA."""
    return _dedupe(L.with_state(initial=p) for p in range(L.size))


@dataclass(frozen=True, eq=False)
class LocalVariety:
    """A finite derivative-closed set of languages and the atoms it generates.

    ``product_dfa`` runs all generators in lockstep; its state ``s`` lies in the
    atom ``atom_of_state[s]``, and ``atom_table`` maps each realized membership
    vector to its atom.  Atoms are numbered by their shortlex-least word.
    """

    generators: tuple[RegularLanguageHandle, ...]
    product_dfa: DAutomaton
    vectors: tuple[tuple[int, ...], ...]
    atom_of_state: np.ndarray
    atom_table: dict
    atoms: tuple[RegularLanguageHandle, ...]
    closed_right: bool

    @property
    def alphabet(self) -> tuple[str, ...]:
        return self.product_dfa.alphabet

    def atom_of_word(self, w: str) -> int:
        return int(self.atom_of_state[run(self.product_dfa, w)])


def _derivative_closed(gens: Sequence[RegularLanguageHandle], right: bool) -> str | None:
    have = set(gens)
    for g in gens:
        for a in g.alphabet:
            if g.left_derivative(a) not in have:
                return f"left derivative by {a!r} of a generator is missing"
            if right and g.right_derivative(a) not in have:
                return f"right derivative by {a!r} of a generator is missing"
    return None


def boolean_closure_atoms(gens: Iterable[RegularLanguageHandle], require_right: bool = True) -> LocalVariety:
    """Atoms of the boolean algebra generated by ``gens`` via the product DFA.

    ``gens`` must be closed under left derivatives, and under right derivatives
    too unless ``require_right`` is false.
    """
    gens = _dedupe(gens)
    if not gens:
        raise ValueError("at least one generator is needed")
    alphabet = gens[0].alphabet
    if any(g.alphabet != alphabet for g in gens):
        raise ValueError("generators use different alphabets")
    problem = _derivative_closed(gens, require_right)
    if problem:
        raise ValueError(problem)
    deltas = [g.dfa.delta for g in gens]
    outs = [g.dfa.output for g in gens]
    start = tuple(g.dfa.initial for g in gens)
    index = {start: 0}
    order = [start]
    trans: dict[str, list[int]] = {a: [] for a in alphabet}
    queue = deque(order)
    while queue:
        s = queue.popleft()
        for a in alphabet:
            t = tuple(int(d[a][q]) for d, q in zip(deltas, s))
            if t not in index:
                check_size(len(order) + 1, "product automaton")
                index[t] = len(order)
                order.append(t)
                queue.append(t)
            trans[a].append(index[t])
    vec_of_state = [tuple(int(o[q]) for o, q in zip(outs, s)) for s in order]
    atom_table: dict[tuple[int, ...], int] = {}
    for vec in vec_of_state:  # BFS order, so numbering follows least words
        atom_table.setdefault(vec, len(atom_table))
    atom_of_state = np.array([atom_table[v] for v in vec_of_state], dtype=np.int64)
    P = dfa(alphabet, trans, 0, [])
    atoms = tuple(
        RegularLanguageHandle(dfa(alphabet, trans, 0, np.flatnonzero(atom_of_state == z))) for z in range(len(atom_table))
    )
    return LocalVariety(
        generators=gens,
        product_dfa=P,
        vectors=tuple(atom_table),
        atom_of_state=atom_of_state,
        atom_table=atom_table,
        atoms=atoms,
        closed_right=require_right,
    )


@dataclass(frozen=True, eq=False)
class DualAlgebra:
    """Automaton and monoid on the atoms.

    Reading ``w`` from the initial atom ends in the atom that contains the
    reversal of ``w``.
    """

    variety: LocalVariety
    initial: int
    delta: dict
    output: np.ndarray
    mult: np.ndarray | None
    rep_words: tuple[str, ...]

    @property
    def size(self) -> int:
        return len(self.variety.atoms)

    def automaton(self) -> DAutomaton:
        return dfa(self.variety.alphabet, self.delta, self.initial, np.flatnonzero(self.output))

    def pair(self) -> RecognizingPair:
        if self.mult is None:
            raise ValueError("no multiplication: the variety is not closed under right derivatives")
        M = FiniteDMonoid(make_object(SET, self.size), self.mult, self.initial, tuple(fm_embed_word(w, SET) for w in self.rep_words))
        gen = {a: int(self.delta[a][self.initial]) for a in self.variety.alphabet}
        return RecognizingPair(M, gen, self.output)


def _dual_transitions(V: LocalVariety) -> dict[str, np.ndarray]:
    """``z --a--> z'`` iff every word of ``z`` prefixed by ``a`` lies in ``z'``.

    Explores pairs (state after ``w``, state after ``aw``) of the product DFA;
    each atom must meet exactly one target atom.
    """
    P = V.product_dfa
    k = len(V.atoms)
    out = {}
    for a in V.alphabet:
        start = (P.initial, int(P.delta[a][P.initial]))
        seen = {start}
        queue = deque([start])
        targets: list[set[int]] = [set() for _ in range(k)]
        while queue:
            s, t = queue.popleft()
            targets[V.atom_of_state[s]].add(int(V.atom_of_state[t]))
            for b in V.alphabet:
                nxt = (int(P.delta[b][s]), int(P.delta[b][t]))
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        for z, ts in enumerate(targets):
            if len(ts) != 1:
                raise NonFunctionalTransition(z, a, sorted(ts))
        out[a] = np.array([next(iter(ts)) for ts in targets], dtype=np.int64)
    return out


def dual_algebra(V: LocalVariety, language: RegularLanguageHandle | None = None) -> DualAlgebra:
    """Dual automaton on the atoms, with its monoid when ``V`` is right-closed.

    ``language`` is the generator whose atoms are accepting (the reversal of
    the language the dual automaton recognizes).  It may be omitted only when
    ``V`` has a single generator.
    """
    if language is None:
        if len(V.generators) != 1:
            raise ValueError("pass the language whose atoms are accepting")
        language = V.generators[0]
    try:
        gi = V.generators.index(language)
    except ValueError:
        raise ValueError("language is not among the generators") from None
    delta = _dual_transitions(V)
    k = len(V.atoms)
    initial = V.atom_of_word("")
    output = np.array([vec[gi] for vec in V.vectors], dtype=np.int64)

    if not V.closed_right:
        reps = tuple(_min_word(V, z) for z in range(k))
        return DualAlgebra(V, initial, delta, output, None, reps)

    # Action of every word on the atoms, in shortlex order of least word.  The
    # product z * z' is the atom reached from z by the least word of z'; this
    # does not depend on the chosen word iff any two words reaching the same
    # atom from the initial one act alike on all atoms, which is checked here
    # for every word, not only for the first two witnesses.
    ident = np.arange(k, dtype=np.int64)
    seen = {ident.tobytes()}
    rep_of_atom: dict[int, tuple[str, np.ndarray]] = {initial: ("", ident)}
    queue = deque([("", ident)])
    while queue:
        w, t = queue.popleft()
        for a in V.alphabet:
            t2 = delta[a][t]
            if t2.tobytes() in seen:
                continue
            check_size(len(seen) + 1, "dual action monoid")
            seen.add(t2.tobytes())
            queue.append((w + a, t2))
            z = int(t2[initial])
            if z in rep_of_atom:
                raise AssertionError(
                    f"atom multiplication depends on the representative: {rep_of_atom[z][0] or 'ε'!r} and {w + a!r} "
                    "reach the same atom but act differently"
                )
            rep_of_atom[z] = (w + a, t2)
    if len(rep_of_atom) != k:
        raise AssertionError("some atom is not reached from the initial atom")
    mult = np.empty((k, k), dtype=np.int64)
    for z2, (_, t) in rep_of_atom.items():
        mult[:, z2] = t
    reps = tuple(rep_of_atom[z][0] for z in range(k))
    return DualAlgebra(V, initial, delta, output, mult, reps)


def _min_word(V: LocalVariety, z: int) -> str:
    """Shortlex-least word in atom ``z``."""
    P = V.product_dfa
    first = {P.initial: ""}
    queue = deque([P.initial])
    while queue:
        s = queue.popleft()
        if V.atom_of_state[s] == z:
            return first[s]
        for a in V.alphabet:
            t = int(P.delta[a][s])
            if t not in first:
                first[t] = first[s] + a
                queue.append(t)
    raise ValueError(f"atom {z} is empty")


@dataclass(frozen=True, eq=False)
class DualityCheck:
    ok: bool
    dual: DualAlgebra
    syn: SyntacticResult | None
    reason: str = ""


def verify_syndual(L: RegularLanguageHandle) -> DualityCheck:
    """Compare the dual monoid of the local variety of ``L^rev`` with the syntactic monoid of ``L``."""
    R = reverse(L)
    V = boolean_closure_atoms(two_sided_derivatives(R))
    D = dual_algebra(V, R)
    syn = syntactic_monoid(L.dfa)
    h = pair_isomorphism(D.pair(), syn.pair)
    return DualityCheck(h is not None, D, syn, "" if h is not None else "no generator-respecting isomorphism")


def verify_mindual(L: RegularLanguageHandle) -> DualityCheck:
    """Atoms of the left-derivative closure of ``L^rev`` against the minimal DFA of ``L``."""
    R = reverse(L)
    V = boolean_closure_atoms(left_derivatives(R), require_right=False)
    D = dual_algebra(V, R)
    if D.size != L.size:
        return DualityCheck(False, D, None, f"{D.size} atoms but {L.size} minimal states")
    ok = automaton_iso(D.automaton(), L.dfa) is not None
    return DualityCheck(ok, D, None, "" if ok else "atom automaton is not isomorphic to the minimal DFA")
