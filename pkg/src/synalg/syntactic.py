"""Transition monoids, syntactic monoids and the context-based congruence oracle.

Two independent routes to the syntactic monoid of the language of an automaton:

* :func:`syntactic_monoid` closes the letter transitions of the *minimal*
  automaton under composition and the pointwise algebra operations.
* :class:`ContextOracle` decides the syntactic congruence directly from its
  definition, by comparing outputs over all word contexts; :func:`oracle_monoid`
  builds the quotient of the free monoid from it.

:func:`pair_isomorphism` compares any two recognizers by their generators.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .automata import DAutomaton, check_size, evaluate, interpret, reach
from .freemonoid import (
    FreeElement,
    VarietyMismatch,
    fm_embed_word,
    fm_enumerate,
    fm_multiply,
    fm_operation,
    fm_unit,
    format_element,
)
from .minimize import minimize
from .variety import (
    FiniteDObject,
    Partition,
    Tag,
    VarietySpec,
    Violation,
    is_homomorphism,
    make_object,
    ternary_violation,
    validate_object,
)

__all__ = [
    "FiniteDMonoid",
    "RecognizingPair",
    "SyntacticResult",
    "Factorization",
    "transition_monoid",
    "syntactic_monoid",
    "ContextOracle",
    "syntactic_equivalent",
    "syntactic_partition_oracle",
    "oracle_monoid",
    "factor_through",
    "pair_isomorphism",
    "monoid_validate",
]


@dataclass(frozen=True, eq=False)
class FiniteDMonoid:
    carrier: FiniteDObject
    mult: np.ndarray
    unit: int
    names: tuple[FreeElement, ...]

    @property
    def size(self) -> int:
        return self.carrier.size

    @property
    def variety(self) -> VarietySpec:
        return self.carrier.variety

    def label(self, x: int) -> str:
        return format_element(self.names[x])

    def __repr__(self) -> str:
        return f"FiniteDMonoid({self.variety}, size={self.size})"


@dataclass(frozen=True, eq=False)
class RecognizingPair:
    """A monoid generated by letter images, with an output map into Y."""

    monoid: FiniteDMonoid
    e_on_letters: Mapping[str, int]
    f: np.ndarray

    @property
    def alphabet(self) -> tuple[str, ...]:
        return tuple(self.e_on_letters)

    def word(self, w: str) -> int:
        x = self.monoid.unit
        for a in w:
            x = int(self.monoid.mult[x, self.e_on_letters[a]])
        return x

    def e(self, u: FreeElement) -> int:
        """Image of a free element in the monoid."""
        if u.variety != self.monoid.variety:
            raise VarietyMismatch(f"{u.variety} element for a {self.monoid.variety} monoid")
        return interpret(u, self.monoid.carrier, self.word)

    def language(self, u: FreeElement) -> int:
        return int(self.f[self.e(u)])


@dataclass(frozen=True, eq=False)
class SyntacticResult:
    syn: FiniteDMonoid
    pair: RecognizingPair
    source: str


# -- transition monoids ------------------------------------------------------------


class _RowIndex:
    """Exact set of equal-width integer rows, numbered in insertion order.

    Rows are located through a 64-bit multiplicative hash and every hit is
    confirmed against the stored row, so a hash collision raises instead of
    merging two elements.
    """

    def __init__(self, width: int, rows: np.ndarray | None = None):
        rng = np.random.default_rng(width)
        self.weights = rng.integers(0, 1 << 62, size=width, dtype=np.uint64) * np.uint64(4) + np.uint64(1)
        self.width = width
        self.rows: list[np.ndarray] = []
        self.hashes: list[int] = []
        self.by_hash: dict[int, int] = {}
        self._cache = None
        if rows is not None:
            for row in rows:
                self.add(row)

    def __len__(self) -> int:
        return len(self.rows)

    def hash(self, rows: np.ndarray) -> np.ndarray:
        return np.ascontiguousarray(rows).reshape(-1, self.width).astype(np.uint64) @ self.weights

    def get(self, row: np.ndarray) -> int | None:
        i = self.by_hash.get(int(self.hash(row)[0]))
        if i is not None and not np.array_equal(self.rows[i], row):
            raise RuntimeError("64-bit row hash collision")
        return i

    def add(self, row: np.ndarray, h: int | None = None) -> int:
        h = int(self.hash(row)[0]) if h is None else h
        if h in self.by_hash:
            raise RuntimeError("64-bit row hash collision")
        self.by_hash[h] = len(self.rows)
        self.rows.append(np.asarray(row))
        self.hashes.append(h)
        self._cache = None
        return len(self.rows) - 1

    def lookup(self, rows: np.ndarray, h: np.ndarray | None = None) -> np.ndarray:
        """Ids of ``rows`` (flattened to ``width``), -1 where absent."""
        rows = np.ascontiguousarray(rows).reshape(-1, self.width)
        h = self.hash(rows) if h is None else h
        if not self.rows:
            return np.full(len(rows), -1, dtype=np.int64)
        if self._cache is None:
            hs = np.array(self.hashes, dtype=np.uint64)
            order = np.argsort(hs)
            self._cache = (hs[order], order, np.stack(self.rows))
        hs, order, K = self._cache
        pos = np.minimum(np.searchsorted(hs, h), len(hs) - 1)
        hit = hs[pos] == h
        ids = np.where(hit, order[pos], -1)
        if not (rows[hit] == K[ids[hit]]).all():
            raise RuntimeError("64-bit row hash collision")
        return ids

    def ids(self, rows: np.ndarray) -> np.ndarray:
        """Like :meth:`lookup`, but every row must be present."""
        out = self.lookup(rows)
        if (out < 0).any():
            raise AssertionError("closure is incomplete: a product fell outside the computed set")
        return out


def _name_key(u: FreeElement) -> tuple:
    s = format_element(u)
    return (len(s), 0 if u.is_word else 1, s)


class _Explorer:
    """Grows a set of state maps closed under right letter steps and pointwise operations.

    Maps with equal ``key`` rows count as one element, which keeps the first map
    found and a free element that produces it.  Numbering: constants of the
    variety, then words in shortlex order of their least word, then elements in
    the order the batched operation rounds produce them.
    """

    def __init__(self, A: DAutomaton, key, what: str):
        self.v = A.variety
        self.Q = A.states
        self.alphabet = A.alphabet
        self.delta = A.delta
        self.key = key
        self.what = what
        self.maps: list[np.ndarray] = []
        self.names: list[FreeElement] = []
        self.index = _RowIndex(self.key(np.zeros((1, self.Q.size), dtype=np.int64)).shape[1])

    def find(self, t: np.ndarray) -> int | None:
        return self.index.get(self.key(t[None, :])[0])

    def add(self, t: np.ndarray, name, key: np.ndarray | None = None, h: int | None = None) -> int:
        key = self.key(t[None, :])[0] if key is None else key
        i = self.index.get(key) if h is None else None
        if i is None:
            check_size(len(self.maps) + 1, self.what)
            i = self.index.add(key, h)
            self.maps.append(t)
            self.names.append(name() if callable(name) else name)
        return i

    def run(self) -> int:
        """Explore everything; returns the id of the unit."""
        v, n = self.v, self.Q.size
        for cname, c in self.Q.constants():
            self.add(np.full(n, c, dtype=np.int64), lambda: fm_operation(("const", cname), v, None))
        unit = self.add(np.arange(n, dtype=np.int64), fm_unit(v))
        word_of = {unit: ""}
        queue = deque([unit])
        while queue:
            x = queue.popleft()
            for a in self.alphabet:
                w = word_of[x] + a
                y = self.add(self.delta[a][self.maps[x]], lambda: fm_embed_word(w, v))
                if y not in word_of:
                    word_of[y] = w
                    queue.append(y)
                    cand = fm_embed_word(w, v)
                    if _name_key(cand) < _name_key(self.names[y]):
                        self.names[y] = cand
        done = 0
        while done < len(self.maps):
            hi = len(self.maps)
            K = np.stack(self.maps)
            step = max(1, (1 << 21) // (hi * max(n, 1)))
            for x0 in range(done, hi, step):
                self._round(K, np.arange(x0, min(hi, x0 + step)))
            done = hi
        return unit

    def _round(self, K: np.ndarray, xs: np.ndarray) -> None:
        n, hi = K.shape[1], K.shape[0]
        F = K[xs]
        rows, hows = [], []
        for a in self.alphabet:
            rows.append(self.delta[a][F])
            hows.append(lambda i, a=a: ("letter", a, int(xs[i])))
        for uname, T in self.Q.unary_ops():
            rows.append(T[F])
            hows.append(lambda i, uname=uname: ("unary", uname, int(xs[i])))
        for bname, T in self.Q.binary_ops():
            # the binary operations are commutative, so one argument order suffices
            rows.append(T[F[:, None, :], K[None, :, :]].reshape(-1, n))
            hows.append(lambda i, bname=bname: ("binary", bname, int(xs[i // hi]), i % hi))
        sizes = [len(r) for r in rows]
        cand = np.concatenate(rows)
        keys = np.ascontiguousarray(self.key(cand))
        h = self.index.hash(keys)
        _, first, inverse = np.unique(h, return_index=True, return_inverse=True)
        if not (keys == keys[first][inverse.reshape(-1)]).all():
            raise RuntimeError("64-bit row hash collision")
        first = np.sort(first)
        first = first[self.index.lookup(keys[first], h[first]) < 0]
        bounds = np.cumsum(sizes)
        for i in first.tolist():
            g = int(np.searchsorted(bounds, i, side="right"))
            how = hows[g](i - (bounds[g - 1] if g else 0))
            self.add(cand[i], lambda: self._name(how), keys[i], int(h[i]))

    def _name(self, how: tuple) -> FreeElement:
        if how[0] == "letter":
            return fm_multiply(self.names[how[2]], fm_embed_word(how[1], self.v))
        return fm_operation(how, self.v, self.names.__getitem__)


def transition_monoid(A: DAutomaton) -> RecognizingPair:
    """Image of the free monoid in the endomorphism monoid of the states.

    Elements are state maps ``t`` (``t[q]`` is where ``q`` goes); ``x * y`` means
    apply ``x`` then ``y``.  Numbering as in :class:`_Explorer`, with maps
    compared as whole rows.
    """
    v = A.variety
    Q = A.states
    ex = _Explorer(A, lambda rows: rows, "transition monoid")
    unit = ex.run()
    maps, names, index = ex.maps, ex.names, ex.index
    letters = [(a, A.delta[a]) for a in A.alphabet]

    K = np.stack(maps)
    k = len(maps)
    mult = _table(index.ids, k, lambda xs: K[:, K[xs]].transpose(1, 0, 2))
    kw: dict = {}
    tag = v.tag
    if tag is Tag.INVOLUTION:
        kw["inv"] = index.ids(Q.inv[K])
    elif tag is Tag.SEMILATTICE:
        kw["join"] = _table(index.ids, k, lambda xs: Q.join[K[xs][:, None, :], K[None, :, :]])
        kw["bottom"] = 0
    elif tag is Tag.VECT:
        kw["add"] = _table(index.ids, k, lambda xs: Q.add[K[xs][:, None, :], K[None, :, :]])
        kw["zero"] = 0
    carrier = make_object(v, k, **kw)
    for t in maps:
        assert is_homomorphism(t, Q, Q), "transition map is not an endomorphism"
    M = FiniteDMonoid(carrier, _ro(mult), unit, tuple(names))
    e = {a: ex.find(d) for a, d in letters}
    return RecognizingPair(M, e, _ro(A.output[K[:, A.initial]]))


def _table(ids, k: int, block) -> np.ndarray:
    """``k x k`` table whose rows ``xs`` are the ids of the maps ``block(xs)`` (shape ``len(xs), k, n``)."""
    out = np.empty((k, k), dtype=np.int64)
    step = max(1, (1 << 21) // max(1, k * k))
    for x0 in range(0, k, step):
        xs = np.arange(x0, min(k, x0 + step))
        out[xs] = ids(block(xs)).reshape(len(xs), k)
    return out


def _ro(a) -> np.ndarray:
    arr = np.array(a, dtype=np.int64)
    arr.setflags(write=False)
    return arr


def syntactic_monoid(A: DAutomaton) -> SyntacticResult:
    """Syntactic monoid as the transition monoid of the minimal automaton."""
    pair = transition_monoid(minimize(A)[0])
    return SyntacticResult(pair.monoid, pair, "transition-of-minimal")


# -- the context oracle --------------------------------------------------------------


class ContextOracle:
    """Decides the syntactic congruence of an automaton's language from contexts.

    Two free elements ``u``, ``w`` are equivalent iff for every state ``p`` of the
    minimal automaton reachable by a word, and every word ``y`` shorter than the
    number of minimal states, ``u`` and ``w`` followed by ``y`` from ``p`` give the
    same output.  Never looks at transition monoids.
    """

    #: above this many context words, round-by-round refinement replaces enumeration
    ENUMERATION_LIMIT = 1 << 16

    def __init__(self, A: DAutomaton):
        self.automaton = A
        M = minimize(A)[0]
        self.minimal = M
        n = M.size
        starts = [M.initial]
        seen = {M.initial}
        for q in starts:
            for a in M.alphabet:
                r = int(M.delta[a][q])
                if r not in seen:
                    seen.add(r)
                    starts.append(r)
        self.starts = np.array(starts, dtype=np.int64)
        n_ctx = sum(len(M.alphabet) ** k for k in range(n))
        if n_ctx <= self.ENUMERATION_LIMIT:
            rows = [M.output]
            frontier = [np.arange(n)]
            for _ in range(1, n):
                frontier = [M.delta[a][t] for t in frontier for a in M.alphabet]
                rows.extend(M.output[t] for t in frontier)
            sig = np.unique(np.stack(rows).T, axis=0, return_inverse=True)[1]
        else:
            # after k rounds, states are grouped by their outputs on all words of length <= k
            sig = np.unique(M.output, return_inverse=True)[1].reshape(-1)
            for _ in range(1, n):
                cols = np.stack([sig] + [sig[M.delta[a]] for a in M.alphabet], axis=1)
                sig = np.unique(cols, axis=0, return_inverse=True)[1].reshape(-1)
        self.signature = np.asarray(sig, dtype=np.int64).reshape(-1)

    def key(self, u: FreeElement) -> tuple[int, ...]:
        M = self.minimal
        return tuple(int(self.signature[reach(M, u, int(p))]) for p in self.starts)

    def key_of_map(self, r: np.ndarray) -> bytes:
        """Key of an element given where it sends every minimal state."""
        return self.signature[r[self.starts]].tobytes()

    def equivalent(self, u: FreeElement, w: FreeElement) -> bool:
        if u.variety != w.variety:
            raise VarietyMismatch(f"{u.variety} vs {w.variety}")
        return self.key(u) == self.key(w)


def syntactic_equivalent(A: DAutomaton, u: FreeElement, w: FreeElement) -> bool:
    return ContextOracle(A).equivalent(u, w)


def syntactic_partition_oracle(A: DAutomaton, max_len: int, oracle: ContextOracle | None = None) -> tuple[list[FreeElement], Partition]:
    """Group ``fm_enumerate(variety, alphabet, max_len)`` into syntactic classes."""
    if not 0 <= max_len <= 6:
        raise ValueError("max_len must be between 0 and 6")
    oracle = oracle or ContextOracle(A)
    elems = list(fm_enumerate(A.variety, A.alphabet, max_len))
    labels: dict[tuple, int] = {}
    lab = [labels.setdefault(oracle.key(u), len(labels)) for u in elems]
    return elems, Partition.from_labels(lab)


LITERAL_PRODUCT_LIMIT = 48


def oracle_monoid(A: DAutomaton, oracle: ContextOracle | None = None) -> SyntacticResult:
    """The full quotient of the free monoid by the oracle's congruence.

    Classes are explored from the unit by appending letters and applying the
    free algebra operations to representatives, until no new class appears.
    Each class remembers where its representative sends every minimal state, so
    products and operations are classified by their context signatures without
    rebuilding free elements.  Every representative's signature is then
    recomputed from the free element itself, and products of representatives
    are checked the same way.  The output of each class is the original
    automaton's value on its representative.
    """
    oracle = oracle or ContextOracle(A)
    v = A.variety
    M = oracle.minimal
    Q = M.states
    ex = _Explorer(M, lambda rows: oracle.signature[rows[:, oracle.starts]], "oracle quotient")
    unit = ex.run()
    reps, R, classes = ex.names, ex.maps, ex.index
    gen = {a: ex.find(M.delta[a]) for a in A.alphabet}

    lit_keys = {}
    for x, u in enumerate(reps):
        key = oracle.key(u)
        assert np.array_equal(key, oracle.signature[R[x][oracle.starts]]), f"{format_element(u)} misclassified"
        lit_keys[key] = x
    k = len(reps)
    Rs = np.stack(R)

    def classify(maps: np.ndarray) -> np.ndarray:
        return classes.ids(oracle.signature[maps[..., oracle.starts]])

    mult = _table(classify, k, lambda xs: Rs[:, Rs[xs]].transpose(1, 0, 2))
    # products of actual free elements, all pairs when small, else against the letters
    right = range(k) if k <= LITERAL_PRODUCT_LIMIT else sorted(gen.values())
    for x in range(k):
        for y in right:
            z = lit_keys.get(oracle.key(fm_multiply(reps[x], reps[y])))
            assert z == mult[x, y], f"product {format_element(reps[x])} * {format_element(reps[y])} misclassified"
    kw: dict = {}
    if v.tag is Tag.INVOLUTION:
        kw["inv"] = classify(Q.inv[Rs])
    elif v.tag is Tag.SEMILATTICE:
        kw["join"] = _table(classify, k, lambda xs: Q.join[Rs[xs][:, None, :], Rs[None, :, :]])
        kw["bottom"] = 0
    elif v.tag is Tag.VECT:
        kw["add"] = _table(classify, k, lambda xs: Q.add[Rs[xs][:, None, :], Rs[None, :, :]])
        kw["zero"] = 0
    D = FiniteDMonoid(make_object(v, k, **kw), _ro(mult), unit, tuple(reps))
    return SyntacticResult(D, RecognizingPair(D, gen, _ro([evaluate(A, u) for u in reps])), "oracle-quotient")


# -- universal property ------------------------------------------------------------------


@dataclass(frozen=True)
class Factorization:
    h: np.ndarray | None
    counterexample: str | None = None

    @property
    def ok(self) -> bool:
        return self.h is not None

    def surjective(self, target_size: int) -> bool:
        return self.h is not None and len(set(self.h.tolist())) == target_size


def factor_through(pair: RecognizingPair, syn: SyntacticResult | RecognizingPair) -> Factorization:
    """Try ``h(m) = e_L(name of m)`` and check it is the required monoid morphism.

    Succeeds iff ``h`` is a monoid and algebra morphism, sends each letter's image
    to the letter's image in ``syn``, and is compatible with both output maps.
    """
    target = syn.pair if isinstance(syn, SyntacticResult) else syn
    M, S = pair.monoid, target.monoid
    if M.variety != S.variety:
        return Factorization(None, "variety mismatch")
    if set(pair.e_on_letters) != set(target.e_on_letters):
        return Factorization(None, "alphabets differ")
    h = np.array([target.e(u) for u in M.names], dtype=np.int64)
    if h[M.unit] != S.unit:
        return Factorization(None, "unit not preserved")
    for a, x in pair.e_on_letters.items():
        if h[x] != target.e_on_letters[a]:
            return Factorization(None, f"letter {a!r} not sent to its image")
    bad = np.argwhere(h[M.mult] != S.mult[h[:, None], h[None, :]])
    if len(bad):
        x, y = map(int, bad[0])
        return Factorization(None, f"multiplication not preserved at ({M.label(x)}, {M.label(y)})")
    if not is_homomorphism(h, M.carrier, S.carrier):
        return Factorization(None, "not a morphism of the underlying algebras")
    bad = np.flatnonzero(target.f[h] != pair.f)
    if len(bad):
        return Factorization(None, f"outputs differ at {M.label(int(bad[0]))}: languages are not the same")
    return Factorization(_ro(h))


def pair_isomorphism(p1: RecognizingPair, p2: RecognizingPair) -> np.ndarray | None:
    """Generator-respecting isomorphism of recognizers, or None."""
    if p1.monoid.size != p2.monoid.size:
        return None
    fac = factor_through(p1, p2)
    if not fac.ok or not fac.surjective(p2.monoid.size):
        return None
    return fac.h


# -- law checks ----------------------------------------------------------------------------


def monoid_validate(M: FiniteDMonoid, v: VarietySpec | None = None) -> list[Violation]:
    """Monoid laws plus the variety-specific compatibility laws.

    Every law is checked on all tuples, except that three-variable laws on
    carriers above ``variety.EXHAUSTIVE_LIMIT`` draw the first variable from
    :func:`synalg.variety.first_arguments`.
    """
    v = v or M.variety
    out = list(validate_object(M.carrier, v))
    if out:
        return out
    n = M.size
    m = M.mult
    if m.shape != (n, n) or m.min() < 0 or m.max() >= n:
        return [Violation("malformed multiplication table", ())]
    r = np.arange(n)

    def check(law, mask):
        bad = np.argwhere(~mask)
        if len(bad):
            out.append(Violation(law, tuple(int(i) for i in bad[0])))

    w = ternary_violation(n, lambda xs: m[m[xs][:, :, None], r[None, None, :]] == m[xs[:, None, None], m[None, :, :]])
    if w is not None:
        out.append(Violation("multiplication not associative", w))
    check("unit law fails on the left", m[M.unit] == r)
    check("unit law fails on the right", m[:, M.unit] == r)
    C = M.carrier
    tag = v.tag
    if tag is Tag.POINTED:
        check("zero law fails (basepoint not absorbing on the left)", m[0] == 0)
        check("zero law fails (basepoint not absorbing on the right)", m[:, 0] == 0)
    elif tag is Tag.INVOLUTION:
        inv = C.inv
        check("involution law fails: x*~y != ~(x*y)", m[:, inv] == inv[m])
        check("involution law fails: ~x*y != ~(x*y)", m[inv, :] == inv[m])
    elif tag in (Tag.SEMILATTICE, Tag.VECT):
        plus = C.join if tag is Tag.SEMILATTICE else C.add
        zero = C.bottom if tag is Tag.SEMILATTICE else C.zero
        word = "distributivity" if tag is Tag.SEMILATTICE else "linearity"
        for side, rows in (("left", lambda xs: m[xs]), ("right", lambda xs: m[:, xs].T)):
            w = ternary_violation(n, lambda xs: rows(xs)[:, plus] == plus[rows(xs)[:, :, None], rows(xs)[:, None, :]])
            if w is not None:
                out.append(Violation(f"{word} fails on the {side}", w))
        check(f"{word} fails: zero not absorbing on the left", m[zero] == zero)
        check(f"{word} fails: zero not absorbing on the right", m[:, zero] == zero)
        if tag is Tag.VECT:
            S = C.smul
            check("linearity fails: scalars do not commute with the left factor", m[S[:, :, None], r[None, None, :]] == S[:, m])
            check("linearity fails: scalars do not commute with the right factor", m[r[None, :, None], S[:, None, :]] == S[:, m])
    return out
