"""Reachability, observability and minimal automata."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .automata import DAutomaton, relabel
from .freemonoid import FreeElement, fm_embed_word, fm_operation
from .variety import NotACongruence, Partition, closure_order, quotient_by_partition, restrict

__all__ = [
    "MinimizationReport",
    "reachable_part",
    "reachable_with_witnesses",
    "observability_partition",
    "minimize",
    "canonical_form",
    "automaton_iso",
]


@dataclass(frozen=True)
class MinimizationReport:
    reachable_size: int
    minimal_size: int
    partition: Partition
    witnesses: tuple[FreeElement, ...]


def _word_bfs(A: DAutomaton) -> tuple[list[int], dict[int, str]]:
    """States reachable by words, in shortlex order of their least word."""
    first = {A.initial: ""}
    order = [A.initial]
    queue = deque(order)
    while queue:
        q = queue.popleft()
        for a in A.alphabet:
            r = int(A.delta[a][q])
            if r not in first:
                first[r] = first[q] + a
                order.append(r)
                queue.append(r)
    return order, first


def reachable_with_witnesses(A: DAutomaton) -> tuple[DAutomaton, np.ndarray, tuple[FreeElement, ...]]:
    """Reachable part, inclusion map, and a free element reaching each state.

    The carrier is the subalgebra generated by the word-reachable states.  States
    are numbered constants first, then by least reaching word, then in the order
    the algebra operations produce them; this numbering depends only on the
    automaton up to isomorphism.
    """
    v = A.variety
    seeds, words = _word_bfs(A)
    witness: dict[int, FreeElement] = {q: fm_embed_word(w, v) for q, w in words.items()}

    def on_new(x, how):
        if x not in witness:
            witness[x] = fm_operation(how, v, witness.__getitem__)

    order = closure_order(A.states, seeds, on_new)
    R = relabel(A, order, restrict(A.states, order))
    return R, np.asarray(order, dtype=np.int64), tuple(witness[q] for q in order)


def reachable_part(A: DAutomaton) -> tuple[DAutomaton, np.ndarray]:
    R, incl, _ = reachable_with_witnesses(A)
    return R, incl


def canonical_form(A: DAutomaton) -> DAutomaton:
    """Canonical numbering of the reachable part; isomorphic reachable automata map to equal tables."""
    return reachable_part(A)[0]


def observability_partition(A: DAutomaton) -> Partition:
    """Kernel of the observation map, by Moore refinement from the output partition."""
    labels = np.unique(A.output, return_inverse=True)[1].reshape(-1)
    count = labels.max() + 1 if A.size else 0
    while True:
        sig = np.stack([labels] + [labels[A.delta[a]] for a in A.alphabet], axis=1)
        _, new = np.unique(sig, axis=0, return_inverse=True)
        new = new.reshape(-1)
        k = new.max() + 1
        labels = new
        if k == count:
            break
        count = k
    P = Partition.from_labels(labels)
    try:
        quotient_by_partition(A.states, P)
    except NotACongruence as exc:  # the kernel of an algebra map is always a congruence
        raise AssertionError(f"observability partition is not a congruence: {exc}") from exc
    return P


def _quotient_automaton(A: DAutomaton, P: Partition) -> DAutomaton:
    Q, lab = quotient_by_partition(A.states, P)
    reps = np.array([b[0] for b in P.blocks], dtype=np.int64)
    delta = {a: lab[A.delta[a][reps]] for a in A.alphabet}
    return DAutomaton(A.variety, A.alphabet, Q, delta, int(lab[A.initial]), A.output[reps])


def minimize(A: DAutomaton) -> tuple[DAutomaton, MinimizationReport]:
    """Minimal automaton for the language of ``A``, canonically numbered."""
    R, _ = reachable_part(A)
    P = observability_partition(R)
    M, _, wit = reachable_with_witnesses(_quotient_automaton(R, P))
    return M, MinimizationReport(R.size, M.size, P, wit)


def _tables_equal(A: DAutomaton, B: DAutomaton) -> bool:
    return (
        A.variety == B.variety
        and A.alphabet == B.alphabet
        and A.size == B.size
        and A.initial == B.initial
        and np.array_equal(A.output, B.output)
        and all(np.array_equal(A.delta[a], B.delta[a]) for a in A.alphabet)
        and A.states.same_tables(B.states)
    )


def _is_iso(A: DAutomaton, B: DAutomaton, m: np.ndarray) -> bool:
    if sorted(m.tolist()) != list(range(B.size)) or m[A.initial] != B.initial:
        return False
    if not np.array_equal(B.output[m], A.output):
        return False
    if any(not np.array_equal(m[A.delta[a]], B.delta[a][m]) for a in A.alphabet):
        return False
    for (_, ca), (_, cb) in zip(A.states.constants(), B.states.constants()):
        if m[ca] != cb:
            return False
    for (_, ta), (_, tb) in zip(A.states.unary_ops(), B.states.unary_ops()):
        if not np.array_equal(m[ta], tb[m]):
            return False
    for (_, ta), (_, tb) in zip(A.states.binary_ops(), B.states.binary_ops()):
        if not np.array_equal(m[ta], tb[m[:, None], m[None, :]]):
            return False
    return True


def _extend(A: DAutomaton, B: DAutomaton, fwd: dict[int, int]) -> dict[int, int] | None:
    """Extend a partial state bijection to an isomorphism by propagation and backtracking."""
    bwd = {y: x for x, y in fwd.items()}
    pending = list(fwd.items())
    ua, ub = A.states.unary_ops(), B.states.unary_ops()
    ba, bb = A.states.binary_ops(), B.states.binary_ops()

    def bind(x, y) -> bool:
        if fwd.get(x, y) != y or bwd.get(y, x) != x:
            return False
        if x not in fwd:
            if A.output[x] != B.output[y]:
                return False
            fwd[x], bwd[y] = y, x
            pending.append((x, y))
        return True

    while pending:
        x, y = pending.pop()
        for a in A.alphabet:
            if not bind(int(A.delta[a][x]), int(B.delta[a][y])):
                return None
        for (_, ta), (_, tb) in zip(ua, ub):
            if not bind(int(ta[x]), int(tb[y])):
                return None
        for (_, ta), (_, tb) in zip(ba, bb):
            for x2, y2 in list(fwd.items()):
                if not bind(int(ta[x, x2]), int(tb[y, y2])):
                    return None
    free = [x for x in range(A.size) if x not in fwd]
    if not free:
        return fwd
    x = free[0]
    for y in range(B.size):
        if y not in bwd and A.output[x] == B.output[y]:
            trial = _extend(A, B, {**fwd, x: y})
            if trial is not None:
                return trial
    return None


def automaton_iso(A: DAutomaton, B: DAutomaton) -> np.ndarray | None:
    """State bijection ``m`` (``m[q_A] = q_B``) that is an automaton isomorphism, or None."""
    if A.variety != B.variety or A.alphabet != B.alphabet or A.size != B.size:
        return None
    RA, ia, _ = reachable_with_witnesses(A)
    RB, ib, _ = reachable_with_witnesses(B)
    if not _tables_equal(RA, RB):
        return None
    fwd = {int(x): int(y) for x, y in zip(ia, ib)}
    if len(fwd) < A.size:
        fwd = _extend(A, B, fwd)
        if fwd is None:
            return None
    m = np.array([fwd[x] for x in range(A.size)], dtype=np.int64)
    return m if _is_iso(A, B, m) else None
