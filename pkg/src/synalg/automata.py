"""Finite automata whose state space is an algebra of the variety.

Transitions ``delta[a]`` are endomorphisms of the state algebra, ``initial`` is a
state id and ``output`` maps states into the variety's output object Y.
Classical DFAs are the SET case; :func:`lift_automaton` turns one into the
free automaton over any other variety.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

import numpy as np

from .freemonoid import FreeElement, VarietyMismatch, check_alphabet
from .variety import (
    SET,
    FiniteDObject,
    Tag,
    VarietySpec,
    Violation,
    homomorphism_violation,
    is_homomorphism,
    make_object,
    validate_object,
)

__all__ = [
    "DAutomaton",
    "SizeGuardError",
    "size_guard",
    "check_size",
    "dfa",
    "validate_automaton",
    "run",
    "reach",
    "interpret",
    "relabel",
    "evaluate",
    "accepts",
    "derived_automaton",
    "lift_automaton",
    "random_automaton",
]

DEFAULT_SIZE_GUARD = 4096


class SizeGuardError(RuntimeError):
    pass


def size_guard() -> int:
    """Carrier cap; ``SYNALG_SIZE_GUARD`` overrides the default of 4096."""
    return int(os.environ.get("SYNALG_SIZE_GUARD", DEFAULT_SIZE_GUARD))


def check_size(n: int, what: str) -> None:
    cap = size_guard()
    if n > cap:
        raise SizeGuardError(f"{what} would have {n} elements, above the cap of {cap}")


def _ro(a) -> np.ndarray:
    arr = np.array(a, dtype=np.int64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class DAutomaton:
    variety: VarietySpec
    alphabet: tuple[str, ...]
    states: FiniteDObject
    delta: Mapping[str, np.ndarray]
    initial: int
    output: np.ndarray
    state_names: tuple[str, ...] | None = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "alphabet", check_alphabet(self.alphabet))
        object.__setattr__(self, "delta", {a: _ro(self.delta[a]) for a in self.alphabet})
        object.__setattr__(self, "output", _ro(self.output))
        object.__setattr__(self, "initial", int(self.initial))
        if self.states.variety != self.variety:
            raise VarietyMismatch("state object belongs to a different variety")
        if self.state_names is not None:
            names = tuple(map(str, self.state_names))
            if len(names) != self.size or len(set(names)) != len(names):
                raise ValueError("state_names must be distinct and one per state")
            object.__setattr__(self, "state_names", names)

    @property
    def size(self) -> int:
        return self.states.size

    def names(self) -> tuple[str, ...]:
        return self.state_names or tuple(f"q{i}" for i in range(self.size))

    def __repr__(self) -> str:
        return f"DAutomaton({self.variety}, {self.size} states, alphabet={''.join(self.alphabet)})"


def dfa(alphabet: Sequence[str], delta: Mapping[str, Sequence[int]], initial: int, finals, state_names=None) -> DAutomaton:
    """Complete classical DFA on states ``0..n-1``."""
    n = len(next(iter(delta.values())))
    out = np.zeros(n, dtype=np.int64)
    out[list(finals)] = 1
    return DAutomaton(SET, tuple(alphabet), make_object(SET, n), dict(delta), initial, out, state_names)


def validate_automaton(A: DAutomaton) -> list[Violation]:
    out = list(validate_object(A.states))
    n = A.size
    for a in A.alphabet:
        d = A.delta[a]
        if d.shape != (n,) or (n and (d.min() < 0 or d.max() >= n)):
            out.append(Violation(f"transition {a!r} is not a total map on the states", ()))
            continue
        bad = homomorphism_violation(d, A.states, A.states)
        if bad is not None:
            law = bad.law.replace("not preserved", f"not preserved by transition {a!r}")
            out.append(Violation(law, bad.witness))
    if not 0 <= A.initial < n:
        out.append(Violation("initial state out of range", (A.initial,)))
    Y = A.variety.output_object
    if A.output.shape != (n,) or (n and (A.output.min() < 0 or A.output.max() >= Y.size)):
        out.append(Violation("output is not a map into Y", ()))
    else:
        bad = homomorphism_violation(A.output, A.states, Y)
        if bad is not None:
            law = bad.law.replace("not preserved", "not preserved by the output map")
            if A.variety.tag is Tag.SEMILATTICE and bad.law == "join not preserved":
                law = "final states are not a prime upset (output does not preserve join)"
            out.append(Violation(law, bad.witness))
    return out


def run(A: DAutomaton, word: str, start: int | None = None) -> int:
    q = A.initial if start is None else start
    for a in word:
        try:
            q = int(A.delta[a][q])
        except KeyError:
            raise ValueError(f"unknown letter {a!r}") from None
    return q


def interpret(u: FreeElement, Q: FiniteDObject, word_value) -> int:
    """Image of ``u`` under the algebra map that sends each word ``w`` to ``word_value(w)``."""
    tag = Q.variety.tag
    x = u.payload
    if tag is Tag.SET:
        return word_value(x)
    if tag is Tag.POINTED:
        return 0 if x is None else word_value(x)
    if tag is Tag.INVOLUTION:
        q = word_value(x[0])
        return int(Q.inv[q]) if x[1] else q
    if tag is Tag.SEMILATTICE:
        q = Q.bottom
        for w in x:
            q = int(Q.join[q, word_value(w)])
        return q
    q = Q.zero
    for w, c in x:
        q = int(Q.add[q, Q.smul[c, word_value(w)]])
    return q


def reach(A: DAutomaton, u: FreeElement, start: int | None = None) -> int:
    """The state that ``u`` leads to from ``start`` (default: initial).

    Words are run letter by letter; compound elements are evaluated through the
    state algebra's operations, so this is the algebra map from the free monoid.
    """
    if u.variety != A.variety:
        raise VarietyMismatch(f"element of {u.variety} fed to a {A.variety} automaton")
    return interpret(u, A.states, lambda w: run(A, w, start))


def evaluate(A: DAutomaton, u: FreeElement) -> int:
    """The accepted language at ``u``: output of the state ``u`` reaches."""
    return int(A.output[reach(A, u)])


def accepts(A: DAutomaton, word: str) -> bool:
    return bool(A.output[run(A, word)] == 1)


def derived_automaton(M, gen: Mapping[str, int], f: Sequence[int]) -> DAutomaton:
    """Automaton on a monoid's carrier: start at the unit, letters multiply on the right."""
    Y = M.carrier.variety.output_object
    if not is_homomorphism(f, M.carrier, Y):
        raise ValueError("f is not a morphism into the output object")
    delta = {a: M.mult[:, g] for a, g in gen.items()}
    return DAutomaton(M.carrier.variety, tuple(gen), M.carrier, delta, M.unit, f)


# -- lifting classical automata ------------------------------------------------------


def lift_automaton(A: DAutomaton, target: VarietySpec) -> DAutomaton:
    """Free extension of a SET automaton to ``target``.

    The states become the free ``target``-algebra on the old states, transitions
    and output are extended as homomorphisms, and the initial state is embedded.
    """
    if A.variety.tag is not Tag.SET:
        raise VarietyMismatch("only SET automata can be lifted")
    if target.tag is Tag.SET:
        raise ValueError("target must differ from SET")
    n = A.size
    names = A.names()
    fin = A.output
    tag = target.tag
    if tag is Tag.POINTED:
        Q = make_object(target, n + 1)
        delta = {a: np.concatenate([[0], A.delta[a] + 1]) for a in A.alphabet}
        return DAutomaton(target, A.alphabet, Q, delta, A.initial + 1, np.concatenate([[0], fin]), ("bot",) + names)
    if tag is Tag.INVOLUTION:
        inv = np.concatenate([np.arange(n) + n, np.arange(n)])
        Q = make_object(target, 2 * n, inv=inv)
        delta = {a: np.concatenate([A.delta[a], A.delta[a] + n]) for a in A.alphabet}
        return DAutomaton(target, A.alphabet, Q, delta, A.initial, np.concatenate([fin, 1 - fin]), names + tuple("~" + s for s in names))
    if tag is Tag.SEMILATTICE:
        N = 1 << n
        check_size(N, "semilattice lift")
        S = np.arange(N)
        Q = make_object(target, N, join=S[:, None] | S[None, :], bottom=0)
        bits = (S[:, None] >> np.arange(n)[None, :]) & 1
        fmask = int(sum(1 << q for q in range(n) if fin[q]))
        delta = {}
        for a in A.alphabet:
            img = 1 << A.delta[a]
            delta[a] = np.bitwise_or.reduce(np.where(bits == 1, img[None, :], 0), axis=1) if n else S
        out = ((S & fmask) != 0).astype(np.int64)
        snames = tuple("{" + ",".join(names[q] for q in range(n) if s >> q & 1) + "}" for s in range(N))
        return DAutomaton(target, A.alphabet, Q, delta, 1 << A.initial, out, snames)
    p = target.p
    N = p**n
    check_size(N, f"GF({p}) lift")
    powers = p ** np.arange(n)
    digits = (np.arange(N)[:, None] // powers[None, :]) % p
    add = ((digits[:, None, :] + digits[None, :, :]) % p) @ powers
    Q = make_object(target, N, add=add, zero=0)
    delta = {}
    for a in A.alphabet:
        Mx = np.zeros((n, n), dtype=np.int64)
        Mx[np.arange(n), A.delta[a]] = 1
        delta[a] = ((digits @ Mx) % p) @ powers
    out = (digits @ fin) % p
    snames = tuple("(" + ",".join(map(str, row)) + ")" for row in digits)
    return DAutomaton(target, A.alphabet, Q, delta, int(powers[A.initial]), out, snames)


def random_automaton(v: VarietySpec, n_base_states: int, alphabet: Sequence[str], seed: int) -> DAutomaton:
    """Uniformly random complete DFA on ``n_base_states`` states, lifted to ``v``."""
    if n_base_states < 1:
        raise ValueError("n_base_states must be >= 1")
    rng = np.random.default_rng(seed)
    n = n_base_states
    delta = {a: rng.integers(0, n, size=n) for a in alphabet}
    finals = np.flatnonzero(rng.integers(0, 2, size=n))
    A = dfa(alphabet, delta, 0, finals)
    return A if v.tag is Tag.SET else lift_automaton(A, v)


def relabel(A: DAutomaton, order: Sequence[int], states: FiniteDObject) -> DAutomaton:
    """Restrict/renumber: new state ``k`` is old state ``order[k]``; ``states`` is the new algebra."""
    order = np.asarray(order, dtype=np.int64)
    remap = np.full(A.size, -1, dtype=np.int64)
    remap[order] = np.arange(len(order))
    delta = {a: remap[A.delta[a][order]] for a in A.alphabet}
    if any((d < 0).any() for d in delta.values()) or remap[A.initial] < 0:
        raise ValueError("state subset is not closed under transitions")
    names = A.names()
    return replace(
        A,
        states=states,
        delta=delta,
        initial=int(remap[A.initial]),
        output=A.output[order],
        state_names=tuple(names[i] for i in order) if A.state_names else None,
    )
