"""Regular expression frontend: parser, Thompson NFA, subset construction, state elimination.

Dialect: letters, ``∅`` (empty language), ``()`` (empty word), ``|``,
juxtaposition, postfix ``*`` and parentheses.  Whitespace is ignored.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .automata import DAutomaton, check_size, dfa
from .freemonoid import check_alphabet

__all__ = ["Regex", "RegexError", "parse_regex", "subset_construction", "regex_to_dfa", "dfa_to_regex"]


class RegexError(ValueError):
    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(f"{message} at position {position}")


@dataclass(frozen=True)
class Regex:
    """Syntax tree node: ``op`` is one of empty, eps, lit, union, cat, star."""

    op: str
    args: tuple = ()

    def __str__(self) -> str:
        if self.op == "empty":
            return "∅"
        if self.op == "eps":
            return "()"
        if self.op == "lit":
            return self.args[0]
        if self.op == "star":
            inner = str(self.args[0])
            return (inner if self.args[0].op in ("lit", "eps", "empty") else f"({inner})") + "*"
        if self.op == "cat":
            return "".join(f"({x})" if x.op == "union" else str(x) for x in self.args)
        return "|".join(map(str, self.args))


class _Parser:
    def __init__(self, text: str, alphabet: Sequence[str]):
        self.toks = [(i, c) for i, c in enumerate(text) if not c.isspace()]
        self.pos = 0
        self.alphabet = alphabet
        self.end = len(text)

    def peek(self):
        return self.toks[self.pos][1] if self.pos < len(self.toks) else None

    def where(self) -> int:
        return self.toks[self.pos][0] if self.pos < len(self.toks) else self.end

    def parse(self) -> Regex:
        if not self.toks:
            raise RegexError("empty expression (write () for the empty word)", 0)
        r = self.union()
        if self.peek() is not None:
            raise RegexError(f"unexpected {self.peek()!r}", self.where())
        return r

    def union(self) -> Regex:
        parts = [self.concat()]
        while self.peek() == "|":
            self.pos += 1
            parts.append(self.concat())
        return parts[0] if len(parts) == 1 else Regex("union", tuple(parts))

    def concat(self) -> Regex:
        parts = []
        while self.peek() not in (None, "|", ")"):
            parts.append(self.star())
        if not parts:
            raise RegexError("missing operand", self.where())
        return parts[0] if len(parts) == 1 else Regex("cat", tuple(parts))

    def star(self) -> Regex:
        r = self.atom()
        while self.peek() == "*":
            self.pos += 1
            r = Regex("star", (r,))
        return r

    def atom(self) -> Regex:
        c, at = self.peek(), self.where()
        if c == "(":
            self.pos += 1
            if self.peek() == ")":
                self.pos += 1
                return Regex("eps")
            r = self.union()
            if self.peek() != ")":
                raise RegexError("expected ')'", self.where())
            self.pos += 1
            return r
        if c == "∅":
            self.pos += 1
            return Regex("empty")
        if c == "*":
            raise RegexError("'*' with nothing to repeat", at)
        if c not in self.alphabet:
            raise RegexError(f"{c!r} is not in the alphabet", at)
        self.pos += 1
        return Regex("lit", (c,))


def parse_regex(text: str, alphabet: Sequence[str]) -> Regex:
    return _Parser(text, check_alphabet(alphabet)).parse()


class _NFA:
    def __init__(self):
        self.eps: list[set[int]] = []
        self.trans: list[dict[str, set[int]]] = []

    def state(self) -> int:
        self.eps.append(set())
        self.trans.append({})
        return len(self.eps) - 1

    def build(self, r: Regex) -> tuple[int, int]:
        s, t = self.state(), self.state()
        if r.op == "eps":
            self.eps[s].add(t)
        elif r.op == "lit":
            self.trans[s].setdefault(r.args[0], set()).add(t)
        elif r.op == "union":
            for x in r.args:
                a, b = self.build(x)
                self.eps[s].add(a)
                self.eps[b].add(t)
        elif r.op == "cat":
            cur = s
            for x in r.args:
                a, b = self.build(x)
                self.eps[cur].add(a)
                cur = b
            self.eps[cur].add(t)
        elif r.op == "star":
            a, b = self.build(r.args[0])
            self.eps[s] |= {a, t}
            self.eps[b] |= {a, t}
        return s, t


def _closure(states, eps) -> frozenset[int]:
    seen = set(states)
    stack = list(states)
    while stack:
        q = stack.pop()
        for r in eps[q] if eps else ():
            if r not in seen:
                seen.add(r)
                stack.append(r)
    return frozenset(seen)


def subset_construction(alphabet, start: set[int], trans: list[dict[str, set[int]]], finals: set[int], eps=None) -> DAutomaton:
    """Complete DFA of an NFA; subsets are numbered in BFS order, the empty subset is the sink."""
    init = _closure(start, eps)
    index = {init: 0}
    order = [init]
    delta = {a: [] for a in alphabet}
    queue = deque([init])
    while queue:
        S = queue.popleft()
        for a in alphabet:
            T = _closure({r for q in S for r in trans[q].get(a, ())}, eps)
            if T not in index:
                index[T] = len(order)
                order.append(T)
                check_size(len(order), "subset construction")
                queue.append(T)
            delta[a].append(index[T])
    fin = [k for k, S in enumerate(order) if S & finals]
    return dfa(alphabet, delta, 0, fin)


def regex_to_dfa(r: Regex | str, alphabet: Sequence[str], minimal: bool = True) -> DAutomaton:
    """Complete DFA for ``r``; minimized and canonically numbered unless ``minimal=False``."""
    alphabet = check_alphabet(alphabet)
    if isinstance(r, str):
        r = parse_regex(r, alphabet)
    nfa = _NFA()
    s, t = nfa.build(r)
    A = subset_construction(alphabet, {s}, nfa.trans, {t}, nfa.eps)
    if minimal:
        from .minimize import canonical_form, minimize

        A = canonical_form(minimize(A)[0])
    return A


# -- back from automata: state elimination ---------------------------------------

_EMPTY = Regex("empty")
_EPS = Regex("eps")


def _union(x: Regex, y: Regex) -> Regex:
    if x.op == "empty":
        return y
    if y.op == "empty":
        return x
    parts = [*(x.args if x.op == "union" else (x,)), *(y.args if y.op == "union" else (y,))]
    uniq = tuple(sorted(set(parts), key=str))
    return uniq[0] if len(uniq) == 1 else Regex("union", uniq)


def _cat(x: Regex, y: Regex) -> Regex:
    if "empty" in (x.op, y.op):
        return _EMPTY
    if x.op == "eps":
        return y
    if y.op == "eps":
        return x
    parts = (*(x.args if x.op == "cat" else (x,)), *(y.args if y.op == "cat" else (y,)))
    return Regex("cat", parts)


def _star(x: Regex) -> Regex:
    if x.op in ("empty", "eps"):
        return _EPS
    if x.op == "star":
        return x
    if x.op == "union" and _EPS in x.args:  # (()|r)* = r*
        rest = tuple(r for r in x.args if r != _EPS)
        return _star(rest[0] if len(rest) == 1 else Regex("union", rest))
    return Regex("star", (x,))


def dfa_to_regex(A: DAutomaton) -> Regex:
    """A regular expression for the language of a classical DFA.

    States are eliminated in reverse id order between a fresh source and sink;
    the result is correct but not minimal in length.
    """
    n = A.size
    src, snk = n, n + 1
    R: dict[tuple[int, int], Regex] = {}

    def put(i: int, j: int, r: Regex):
        R[i, j] = _union(R.get((i, j), _EMPTY), r)

    put(src, A.initial, _EPS)
    for q in range(n):
        if A.output[q]:
            put(q, snk, _EPS)
        for a in A.alphabet:
            put(q, int(A.delta[a][q]), Regex("lit", (a,)))
    alive = set(range(n)) | {src, snk}
    for k in reversed(range(n)):
        alive.discard(k)
        loop = _star(R.pop((k, k), _EMPTY))
        ins = [(i, r) for (i, j), r in R.items() if j == k and r.op != "empty"]
        outs = [(j, r) for (i, j), r in R.items() if i == k and r.op != "empty"]
        for key in [key for key in R if k in key]:
            del R[key]
        for i, r_in in ins:
            for j, r_out in outs:
                put(i, j, _cat(_cat(r_in, loop), r_out))
    return R.get((src, snk), _EMPTY)
