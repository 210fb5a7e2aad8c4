"""The five commutative varieties and their finite algebras.

A :class:`FiniteDObject` is a finite carrier ``0..n-1`` together with the
operation tables of its variety.  Every structural check in the package
(homomorphisms, subalgebras, congruences) goes through the generic views
:meth:`FiniteDObject.constants`, :meth:`FiniteDObject.unary_ops` and
:meth:`FiniteDObject.binary_ops`, so the varieties differ only in which
tables they carry.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple, Sequence

import numpy as np

__all__ = [
    "Tag",
    "VarietySpec",
    "SET",
    "POINTED",
    "INVOLUTION",
    "SEMILATTICE",
    "vect",
    "FiniteDObject",
    "make_object",
    "Partition",
    "Violation",
    "NotACongruence",
    "validate_object",
    "is_homomorphism",
    "generated_subalgebra",
    "quotient_by_partition",
]


class Tag(enum.Enum):
    SET = "set"
    POINTED = "pointed"
    INVOLUTION = "involution"
    SEMILATTICE = "jsl"
    VECT = "vect"


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p**0.5) + 1))


@dataclass(frozen=True)
class VarietySpec:
    """Which variety is in play.  ``p`` is set only for ``Tag.VECT``."""

    tag: Tag
    p: int | None = None

    def __post_init__(self):
        if self.tag is Tag.VECT:
            if self.p is None or not _is_prime(self.p) or self.p > 31:
                raise ValueError(f"VECT needs a prime p <= 31, got {self.p!r}")
        elif self.p is not None:
            raise ValueError(f"p is only meaningful for VECT, got p={self.p} for {self.tag.value}")

    def __str__(self) -> str:
        return f"vect({self.p})" if self.tag is Tag.VECT else self.tag.value

    @property
    def output_object(self) -> "FiniteDObject":
        """The fixed output algebra Y; element id equals its value."""
        return _output_object(self)

    def output_label(self, y: int) -> str:
        if self.tag is Tag.POINTED and y == 0:
            return "bot"
        return str(int(y))

    def parse_output_label(self, text: str | int) -> int:
        if self.tag is Tag.POINTED:
            if text == "bot":
                return 0
            if str(text) == "1":
                return 1
            raise ValueError(f"pointed output must be 'bot' or '1', got {text!r}")
        if not str(text).isdigit() or int(text) >= self.output_object.size:
            raise ValueError(f"output value {text!r} is not an element of Y for {self}")
        return int(text)


SET = VarietySpec(Tag.SET)
POINTED = VarietySpec(Tag.POINTED)
INVOLUTION = VarietySpec(Tag.INVOLUTION)
SEMILATTICE = VarietySpec(Tag.SEMILATTICE)


def vect(p: int) -> VarietySpec:
    return VarietySpec(Tag.VECT, p)


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=np.int64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class FiniteDObject:
    """Finite algebra of a variety on carrier ``range(size)``.

    Tables present per tag:

    * POINTED: none besides the basepoint, which is always element 0.
    * INVOLUTION: ``inv``.
    * SEMILATTICE: ``join`` (n x n) and ``bottom``.
    * VECT(p): ``add`` (n x n), ``neg``, ``smul`` (p x n) and ``zero``.

    Use :func:`make_object` rather than calling the constructor directly.
    """

    variety: VarietySpec
    size: int
    inv: np.ndarray | None = None
    join: np.ndarray | None = None
    bottom: int | None = None
    add: np.ndarray | None = None
    neg: np.ndarray | None = None
    smul: np.ndarray | None = None
    zero: int | None = None

    @property
    def elements(self) -> range:
        return range(self.size)

    @property
    def basepoint(self) -> int | None:
        return 0 if self.variety.tag is Tag.POINTED else None

    def constants(self) -> list[tuple[str, int]]:
        tag = self.variety.tag
        if tag is Tag.POINTED:
            return [("basepoint", 0)]
        if tag is Tag.SEMILATTICE:
            return [("bottom", self.bottom)]
        if tag is Tag.VECT:
            return [("zero", self.zero)]
        return []

    def unary_ops(self) -> list[tuple[str, np.ndarray]]:
        tag = self.variety.tag
        if tag is Tag.INVOLUTION:
            return [("involution", self.inv)]
        if tag is Tag.VECT:
            ops = [("negation", self.neg)]
            ops += [(f"scale by {c}", self.smul[c]) for c in range(2, self.variety.p)]
            return ops
        return []

    def binary_ops(self) -> list[tuple[str, np.ndarray]]:
        tag = self.variety.tag
        if tag is Tag.SEMILATTICE:
            return [("join", self.join)]
        if tag is Tag.VECT:
            return [("addition", self.add)]
        return []

    def same_tables(self, other: "FiniteDObject") -> bool:
        if self.variety != other.variety or self.size != other.size:
            return False
        mine = [c for _, c in self.constants()] + [t for _, t in self.unary_ops() + self.binary_ops()]
        theirs = [c for _, c in other.constants()] + [t for _, t in other.unary_ops() + other.binary_ops()]
        return all(np.array_equal(a, b) for a, b in zip(mine, theirs))

    def __repr__(self) -> str:
        return f"FiniteDObject({self.variety}, size={self.size})"


def make_object(
    variety: VarietySpec,
    size: int,
    *,
    inv=None,
    join=None,
    bottom: int | None = None,
    add=None,
    zero: int | None = None,
    neg=None,
    smul=None,
) -> FiniteDObject:
    """Build a finite algebra, checking only that the needed tables are present.

    For VECT, ``neg`` and ``smul`` may be omitted: over a prime field scalar
    multiplication is repeated addition, so both follow from ``add``.
    """
    if size < 1:
        raise ValueError("a carrier needs at least one element")
    tag = variety.tag
    kw: dict = {}
    if tag is Tag.INVOLUTION:
        if inv is None:
            raise ValueError("involution algebra needs an inv table")
        kw["inv"] = _frozen(inv)
    elif tag is Tag.SEMILATTICE:
        if join is None or bottom is None:
            raise ValueError("semilattice needs join table and bottom")
        kw["join"] = _frozen(join)
        kw["bottom"] = int(bottom)
    elif tag is Tag.VECT:
        if add is None or zero is None:
            raise ValueError("vector space needs add table and zero")
        add = np.asarray(add, dtype=np.int64)
        p = variety.p
        if smul is None:
            rows = [np.full(size, zero, dtype=np.int64)]
            for _ in range(1, p):
                rows.append(add[rows[-1], np.arange(size)])
            smul = np.stack(rows)
        smul = np.asarray(smul, dtype=np.int64)
        if neg is None:
            neg = smul[p - 1]
        kw.update(add=_frozen(add), zero=int(zero), neg=_frozen(neg), smul=_frozen(smul))
    return FiniteDObject(variety, int(size), **kw)


@functools.lru_cache(maxsize=None)
def _output_object(v: VarietySpec) -> FiniteDObject:
    tag = v.tag
    if tag is Tag.SET or tag is Tag.POINTED:
        return make_object(v, 2)
    if tag is Tag.INVOLUTION:
        return make_object(v, 2, inv=[1, 0])
    if tag is Tag.SEMILATTICE:
        return make_object(v, 2, join=[[0, 1], [1, 1]], bottom=0)
    p = v.p
    r = np.arange(p)
    return make_object(v, p, add=(r[:, None] + r[None, :]) % p, zero=0)


# -- partitions ---------------------------------------------------------------


@dataclass(frozen=True)
class Partition:
    """Disjoint blocks covering ``range(n)``; blocks sorted and ordered by minimum."""

    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        blocks = tuple(sorted((tuple(sorted(set(map(int, b)))) for b in self.blocks), key=lambda b: b[0] if b else -1))
        if any(not b for b in blocks):
            raise ValueError("empty block")
        seen = [x for b in blocks for x in b]
        if len(seen) != len(set(seen)):
            raise ValueError("blocks overlap")
        if sorted(seen) != list(range(len(seen))):
            raise ValueError("blocks do not cover 0..n-1")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "Partition":
        groups: dict[int, list[int]] = {}
        for x, lab in enumerate(labels):
            groups.setdefault(int(lab), []).append(x)
        return cls(tuple(tuple(g) for g in groups.values()))

    @classmethod
    def discrete(cls, n: int) -> "Partition":
        return cls(tuple((x,) for x in range(n)))

    @classmethod
    def total(cls, n: int) -> "Partition":
        return cls((tuple(range(n)),))

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def labels(self) -> np.ndarray:
        out = np.empty(self.n, dtype=np.int64)
        for k, b in enumerate(self.blocks):
            out[list(b)] = k
        return out

    def block_of(self, x: int) -> int:
        return int(self.labels()[x])


# -- checks ---------------------------------------------------------------------


class Violation(NamedTuple):
    law: str
    witness: tuple

    def __str__(self) -> str:
        return f"{self.law} at {', '.join(map(str, self.witness))}"


class NotACongruence(ValueError):
    def __init__(self, operation: str, witness: tuple):
        self.operation = operation
        self.witness = witness
        super().__init__(f"partition is not compatible with {operation}: witness {witness}")


def _first(mask: np.ndarray) -> tuple | None:
    if mask.all():
        return None
    bad = np.argwhere(~mask)
    return tuple(int(i) for i in bad[0]) if len(bad) else None


#: three-variable laws are exhaustive up to this carrier size
EXHAUSTIVE_LIMIT = 512


def first_arguments(n: int) -> np.ndarray:
    """Values of the first variable in three-variable law checks.

    All of ``range(n)`` up to :data:`EXHAUSTIVE_LIMIT`; above it, the first 16
    ids (constants and generators come first) plus 64 evenly spaced ones.
    """
    if n <= EXHAUSTIVE_LIMIT:
        return np.arange(n)
    return np.unique(np.concatenate([np.arange(16), np.linspace(0, n - 1, 64).astype(np.int64)]))


def ternary_violation(n: int, mask_for) -> tuple | None:
    """First ``(x, y, z)`` where ``mask_for(xs)[i, y, z]`` is false, scanning in chunks."""
    xs_all = first_arguments(n)
    step = max(1, (1 << 22) // max(1, n * n))
    for k in range(0, len(xs_all), step):
        xs = xs_all[k : k + step]
        w = _first(mask_for(xs))
        if w is not None:
            return (int(xs[w[0]]), w[1], w[2])
    return None


def _table_ok(t: np.ndarray | None, shape: tuple, n: int) -> bool:
    return t is not None and t.shape == shape and bool(((t >= 0) & (t < n)).all())


def validate_object(obj: FiniteDObject, v: VarietySpec | None = None) -> list[Violation]:
    """Every violated equation of the variety, each with one witness tuple."""
    v = v or obj.variety
    n = obj.size
    out: list[Violation] = []
    if v != obj.variety:
        return [Violation("variety mismatch", (str(obj.variety), str(v)))]
    tag = v.tag

    def check(law: str, mask: np.ndarray):
        w = _first(mask)
        if w is not None:
            out.append(Violation(law, w))

    def check3(law: str, mask_for):
        w = ternary_violation(n, mask_for)
        if w is not None:
            out.append(Violation(law, w))

    if tag is Tag.INVOLUTION:
        if not _table_ok(obj.inv, (n,), n):
            return [Violation("malformed involution table", ())]
        check("involution not self-inverse", obj.inv[obj.inv] == np.arange(n))
    elif tag is Tag.SEMILATTICE:
        J, b = obj.join, obj.bottom
        if not _table_ok(J, (n, n), n) or not 0 <= b < n:
            return [Violation("malformed join table", ())]
        r = np.arange(n)
        check3("join not associative", lambda xs: J[J[xs][:, :, None], r[None, None, :]] == J[xs[:, None, None], J[None, :, :]])
        check("join not commutative", J == J.T)
        check("join not idempotent", np.diagonal(J) == np.arange(n))
        check("bottom is not a unit for join", J[b] == np.arange(n))
    elif tag is Tag.VECT:
        p = v.p
        A, z, N, S = obj.add, obj.zero, obj.neg, obj.smul
        if not (_table_ok(A, (n, n), n) and _table_ok(N, (n,), n) and _table_ok(S, (p, n), n) and 0 <= z < n):
            return [Violation("malformed vector space tables", ())]
        r = np.arange(n)
        check3("addition not associative", lambda xs: A[A[xs][:, :, None], r[None, None, :]] == A[xs[:, None, None], A[None, :, :]])
        check("addition not commutative", A == A.T)
        check("zero is not a unit for addition", A[z] == r)
        check("negation is not an additive inverse", A[r, N] == z)
        check("scaling by 1 is not the identity", S[1] == r)
        check("scaling by 0 is not zero", S[0] == z)
        c = np.arange(p)
        check("scaling does not distribute over addition", S[:, A] == A[S[:, :, None], S[:, None, :]])
        check(
            "scalar addition does not distribute",
            S[(c[:, None] + c[None, :]) % p] == A[S[:, None, :], S[None, :, :]],
        )
        check("scalar multiplication not compatible", S[(c[:, None] * c[None, :]) % p] == S[c[:, None, None], S[None, :, :]])
    return out


def is_homomorphism(mapping: Sequence[int], A: FiniteDObject, B: FiniteDObject, v: VarietySpec | None = None) -> bool:
    """True iff ``mapping`` (indexed by A's elements) commutes with every operation."""
    m = np.asarray(mapping, dtype=np.int64)
    if m.shape != (A.size,):
        raise ValueError(f"mapping must be total on {A.size} elements, got shape {m.shape}")
    if m.size and (m.min() < 0 or m.max() >= B.size):
        raise ValueError("mapping refers to an undefined element id")
    if v is not None and (A.variety != v or B.variety != v):
        raise ValueError("variety mismatch")
    if A.variety != B.variety:
        raise ValueError("variety mismatch")
    for (_, ca), (_, cb) in zip(A.constants(), B.constants()):
        if m[ca] != cb:
            return False
    for (_, ta), (_, tb) in zip(A.unary_ops(), B.unary_ops()):
        if not np.array_equal(m[ta], tb[m]):
            return False
    for (_, ta), (_, tb) in zip(A.binary_ops(), B.binary_ops()):
        if not np.array_equal(m[ta], tb[m[:, None], m[None, :]]):
            return False
    return True


def homomorphism_violation(mapping: Sequence[int], A: FiniteDObject, B: FiniteDObject) -> Violation | None:
    """Like :func:`is_homomorphism` but names the first failing operation."""
    m = np.asarray(mapping, dtype=np.int64)
    for (name, ca), (_, cb) in zip(A.constants(), B.constants()):
        if m[ca] != cb:
            return Violation(f"{name} not preserved", (int(ca),))
    for (name, ta), (_, tb) in zip(A.unary_ops(), B.unary_ops()):
        w = _first(m[ta] == tb[m])
        if w is not None:
            return Violation(f"{name} not preserved", w)
    for (name, ta), (_, tb) in zip(A.binary_ops(), B.binary_ops()):
        w = _first(m[ta] == tb[m[:, None], m[None, :]])
        if w is not None:
            return Violation(f"{name} not preserved", w)
    return None


def closure_order(obj: FiniteDObject, seeds: Iterable[int], on_new: Callable[[int, tuple], None] | None = None) -> list[int]:
    """Elements of the subalgebra generated by ``seeds`` in first-discovery order.

    Constants come first, then the seeds in the given order, then whatever the
    operations produce, scanning elements in discovery order.  ``on_new`` is
    told how each element was first produced: ``("const", name)``,
    ``("seed", k)``, ``("unary", name, x)`` or ``("binary", name, y, x)``.
    """
    order: list[int] = []
    index: set[int] = set()

    def visit(x, how):
        x = int(x)
        if x not in index:
            index.add(x)
            order.append(x)
            if on_new is not None:
                on_new(x, how)

    for name, c in obj.constants():
        visit(c, ("const", name))
    for k, s in enumerate(seeds):
        if not 0 <= int(s) < obj.size:
            raise ValueError(f"seed {s} is not an element")
        visit(s, ("seed", k))
    unary = obj.unary_ops()
    binary = obj.binary_ops()
    i = 0
    while i < len(order):
        x = order[i]
        for name, t in unary:
            visit(t[x], ("unary", name, x))
        for name, t in binary:
            for y in order[: i + 1]:
                visit(t[y, x], ("binary", name, y, x))
                visit(t[x, y], ("binary", name, x, y))
        i += 1
    return order


def restrict(obj: FiniteDObject, order: Sequence[int]) -> FiniteDObject:
    """The subalgebra on ``order`` (must be closed), renumbered by position."""
    remap = np.full(obj.size, -1, dtype=np.int64)
    idx = np.asarray(order, dtype=np.int64)
    remap[idx] = np.arange(len(idx))
    kw: dict = {}
    tag = obj.variety.tag
    if tag is Tag.INVOLUTION:
        kw["inv"] = remap[obj.inv[idx]]
    elif tag is Tag.SEMILATTICE:
        kw["join"] = remap[obj.join[np.ix_(idx, idx)]]
        kw["bottom"] = remap[obj.bottom]
    elif tag is Tag.VECT:
        kw["add"] = remap[obj.add[np.ix_(idx, idx)]]
        kw["zero"] = remap[obj.zero]
        kw["neg"] = remap[obj.neg[idx]]
        kw["smul"] = remap[obj.smul[:, idx]]
    if any((np.asarray(t) < 0).any() for t in kw.values()):
        raise ValueError("subset is not closed under the operations")
    return make_object(obj.variety, len(idx), **kw)


def generated_subalgebra(obj: FiniteDObject, seeds: Iterable[int], v: VarietySpec | None = None) -> tuple[FiniteDObject, np.ndarray]:
    """Least subalgebra containing ``seeds``, plus its inclusion map into ``obj``."""
    order = closure_order(obj, seeds)
    return restrict(obj, order), np.asarray(order, dtype=np.int64)


def quotient_by_partition(obj: FiniteDObject, P: Partition, v: VarietySpec | None = None) -> tuple[FiniteDObject, np.ndarray]:
    """Quotient algebra and projection; raises :class:`NotACongruence`."""
    if P.n != obj.size:
        raise ValueError(f"partition covers {P.n} elements, object has {obj.size}")
    lab = P.labels()
    k = len(P)
    kw: dict = {}

    def induce1(name, t):
        new = np.full(k, -1, dtype=np.int64)
        new[lab] = lab[t]
        bad = _first(new[lab] == lab[t])
        if bad is not None:
            x = bad[0]
            other = next(y for y in P.blocks[lab[x]] if lab[t[y]] != lab[t[x]])
            raise NotACongruence(name, (x, other))
        return new

    def induce2(name, t):
        new = np.full((k, k), -1, dtype=np.int64)
        new[lab[:, None], lab[None, :]] = lab[t]
        bad = _first(new[lab[:, None], lab[None, :]] == lab[t])
        if bad is not None:
            raise NotACongruence(name, bad)
        return new

    tag = obj.variety.tag
    if tag is Tag.INVOLUTION:
        kw["inv"] = induce1("involution", obj.inv)
    elif tag is Tag.SEMILATTICE:
        kw["join"] = induce2("join", obj.join)
        kw["bottom"] = lab[obj.bottom]
    elif tag is Tag.VECT:
        kw["add"] = induce2("addition", obj.add)
        kw["zero"] = lab[obj.zero]
        kw["neg"] = induce1("negation", obj.neg)
        kw["smul"] = np.stack([induce1(f"scale by {c}", obj.smul[c]) for c in range(obj.variety.p)])
    return make_object(obj.variety, k, **kw), lab
