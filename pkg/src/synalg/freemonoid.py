"""Normal forms for the free monoid over each variety.

The free monoid on an alphabet, taken in the variety, has these elements:

=============  ==========================================================
SET            a word
POINTED        a word, or ``None`` for the absorbing bottom
INVOLUTION     ``(word, complemented)``
SEMILATTICE    a finite set of words (tuple, shortlex sorted, may be empty)
VECT(p)        ``((word, coefficient), ...)``, nonzero coefficients only
=============  ==========================================================

Words are plain ``str`` since letters are single characters.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Iterable, Iterator, Sequence

from .variety import Tag, VarietySpec

__all__ = [
    "FreeElement",
    "VarietyMismatch",
    "check_alphabet",
    "words_upto",
    "shortlex_key",
    "fm_unit",
    "fm_multiply",
    "fm_embed_word",
    "fm_enumerate",
    "fm_bot",
    "fm_complement",
    "fm_empty",
    "fm_join",
    "fm_zero",
    "fm_add",
    "fm_scale",
    "fm_operation",
    "format_element",
    "parse_element",
]

RESERVED = set("_!{},*+()|∅ \t\n")


class VarietyMismatch(ValueError):
    pass


def check_alphabet(letters: Iterable[str]) -> tuple[str, ...]:
    letters = tuple(letters)
    if not letters:
        raise ValueError("alphabet must contain at least one letter")
    for a in letters:
        if not isinstance(a, str) or len(a) != 1:
            raise ValueError(f"letters are single characters, got {a!r}")
        if a in RESERVED or a.isdigit():
            raise ValueError(f"{a!r} is reserved and cannot be a letter")
    if len(set(letters)) != len(letters):
        raise ValueError(f"duplicate letters in {letters}")
    return letters


def shortlex_key(w: str) -> tuple[int, str]:
    return (len(w), w)


def words_upto(alphabet: Sequence[str], max_len: int) -> Iterator[str]:
    """All words of length <= max_len in shortlex order (alphabet order for ties)."""
    for n in range(max_len + 1):
        for t in itertools.product(alphabet, repeat=n):
            yield "".join(t)


@dataclass(frozen=True)
class FreeElement:
    variety: VarietySpec
    payload: Any

    def __str__(self) -> str:
        return format_element(self)

    def __repr__(self) -> str:
        return f"FreeElement({self.variety}, {format_element(self)})"

    @property
    def is_word(self) -> bool:
        """True for the image of a plain word (no bottom, complement, sum...)."""
        tag = self.variety.tag
        if tag is Tag.SET:
            return True
        if tag is Tag.POINTED:
            return self.payload is not None
        if tag is Tag.INVOLUTION:
            return not self.payload[1]
        if tag is Tag.SEMILATTICE:
            return len(self.payload) == 1
        return len(self.payload) == 1 and self.payload[0][1] == 1

    def words(self) -> tuple[str, ...]:
        """The words this element is built from."""
        tag = self.variety.tag
        if tag is Tag.SET:
            return (self.payload,)
        if tag is Tag.POINTED:
            return () if self.payload is None else (self.payload,)
        if tag is Tag.INVOLUTION:
            return (self.payload[0],)
        if tag is Tag.SEMILATTICE:
            return self.payload
        return tuple(w for w, _ in self.payload)

    def max_word_length(self) -> int:
        return max((len(w) for w in self.words()), default=0)


def _same(u: FreeElement, w: FreeElement) -> VarietySpec:
    if u.variety != w.variety:
        raise VarietyMismatch(f"{u.variety} vs {w.variety}")
    return u.variety


def _wordset(words: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(set(words), key=shortlex_key))


def _poly(terms: dict[str, int], p: int) -> tuple[tuple[str, int], ...]:
    return tuple((w, c % p) for w, c in sorted(terms.items(), key=lambda t: shortlex_key(t[0])) if c % p)


def fm_embed_word(word: str, v: VarietySpec, alphabet: Sequence[str] | None = None) -> FreeElement:
    if alphabet is not None:
        for a in word:
            if a not in alphabet:
                raise ValueError(f"unknown letter {a!r}")
    tag = v.tag
    if tag is Tag.SET or tag is Tag.POINTED:
        return FreeElement(v, word)
    if tag is Tag.INVOLUTION:
        return FreeElement(v, (word, False))
    if tag is Tag.SEMILATTICE:
        return FreeElement(v, (word,))
    return FreeElement(v, ((word, 1),))


def fm_unit(v: VarietySpec) -> FreeElement:
    return fm_embed_word("", v)


def fm_multiply(u: FreeElement, w: FreeElement, v: VarietySpec | None = None) -> FreeElement:
    v = _same(u, w) if v is None else v
    if u.variety != v or w.variety != v:
        raise VarietyMismatch(f"expected {v}")
    tag = v.tag
    a, b = u.payload, w.payload
    if tag is Tag.SET:
        return FreeElement(v, a + b)
    if tag is Tag.POINTED:
        return FreeElement(v, None if a is None or b is None else a + b)
    if tag is Tag.INVOLUTION:
        return FreeElement(v, (a[0] + b[0], a[1] ^ b[1]))
    if tag is Tag.SEMILATTICE:
        return FreeElement(v, _wordset(x + y for x in a for y in b))
    terms: dict[str, int] = {}
    for x, c in a:
        for y, d in b:
            terms[x + y] = terms.get(x + y, 0) + c * d
    return FreeElement(v, _poly(terms, v.p))


# -- the variety operations on the free monoid ---------------------------------


def fm_bot(v: VarietySpec) -> FreeElement:
    if v.tag is not Tag.POINTED:
        raise VarietyMismatch("bottom exists only for pointed sets")
    return FreeElement(v, None)


def fm_complement(u: FreeElement) -> FreeElement:
    if u.variety.tag is not Tag.INVOLUTION:
        raise VarietyMismatch("complement exists only for involution algebras")
    return FreeElement(u.variety, (u.payload[0], not u.payload[1]))


def fm_empty(v: VarietySpec) -> FreeElement:
    if v.tag is not Tag.SEMILATTICE:
        raise VarietyMismatch("the empty join exists only for semilattices")
    return FreeElement(v, ())


def fm_join(u: FreeElement, w: FreeElement) -> FreeElement:
    v = _same(u, w)
    if v.tag is not Tag.SEMILATTICE:
        raise VarietyMismatch("join exists only for semilattices")
    return FreeElement(v, _wordset(u.payload + w.payload))


def fm_zero(v: VarietySpec) -> FreeElement:
    if v.tag is not Tag.VECT:
        raise VarietyMismatch("zero exists only for vector spaces")
    return FreeElement(v, ())


def fm_add(u: FreeElement, w: FreeElement) -> FreeElement:
    v = _same(u, w)
    if v.tag is not Tag.VECT:
        raise VarietyMismatch("addition exists only for vector spaces")
    terms = dict(u.payload)
    for x, c in w.payload:
        terms[x] = terms.get(x, 0) + c
    return FreeElement(v, _poly(terms, v.p))


def fm_scale(c: int, u: FreeElement) -> FreeElement:
    v = u.variety
    if v.tag is not Tag.VECT:
        raise VarietyMismatch("scalars exist only for vector spaces")
    return FreeElement(v, _poly({x: c * d for x, d in u.payload}, v.p))


# -- enumeration -------------------------------------------------------------------


def fm_enumerate(v: VarietySpec, alphabet: Sequence[str], max_len: int) -> Iterator[FreeElement]:
    """Plain words up to ``max_len`` first, then a bounded family of compounds.

    Compounds: bottom (POINTED); every complemented word (INVOLUTION); all sets of
    2 or 3 words and then the empty set (SEMILATTICE); all polynomials with at most
    three terms that are not plain words, then zero (VECT).
    """
    if max_len < 0:
        raise ValueError("max_len must be >= 0")
    words = list(words_upto(alphabet, max_len))
    for w in words:
        yield fm_embed_word(w, v)
    tag = v.tag
    if tag is Tag.POINTED:
        yield fm_bot(v)
    elif tag is Tag.INVOLUTION:
        for w in words:
            yield FreeElement(v, (w, True))
    elif tag is Tag.SEMILATTICE:
        for k in (2, 3):
            for combo in itertools.combinations(words, k):
                yield FreeElement(v, combo)
        yield fm_empty(v)
    elif tag is Tag.VECT:
        coefs = range(1, v.p)
        for k in (1, 2, 3):
            for combo in itertools.combinations(words, k):
                for cs in itertools.product(coefs, repeat=k):
                    if k == 1 and cs[0] == 1:
                        continue
                    yield FreeElement(v, tuple(zip(combo, cs)))
        yield fm_zero(v)


# -- text syntax -----------------------------------------------------------------------


def _fmt_word(w: str) -> str:
    return w if w else "_"


def format_element(u: FreeElement) -> str:
    tag = u.variety.tag
    x = u.payload
    if tag is Tag.SET:
        return _fmt_word(x)
    if tag is Tag.POINTED:
        return "bot" if x is None else _fmt_word(x)
    if tag is Tag.INVOLUTION:
        return ("!" if x[1] else "") + _fmt_word(x[0])
    if tag is Tag.SEMILATTICE:
        return "{" + ",".join(map(_fmt_word, x)) + "}"
    if not x:
        return "0"
    return " + ".join(_fmt_word(w) if c == 1 else f"{c}*{_fmt_word(w)}" for w, c in x)


def _parse_word(text: str, alphabet: Sequence[str] | None) -> str:
    text = text.strip()
    if text == "_":
        return ""
    if not text:
        raise ValueError("empty word; write '_' for the empty word")
    if alphabet is not None:
        for a in text:
            if a not in alphabet:
                raise ValueError(f"unknown letter {a!r} in {text!r}")
    elif any(a in RESERVED for a in text):
        raise ValueError(f"malformed word {text!r}")
    return text


def parse_element(text: str, v: VarietySpec, alphabet: Sequence[str] | None = None) -> FreeElement:
    """Inverse of :func:`format_element`.

    ``_`` is the empty word, ``!w`` a complemented word, ``{w1,w2}`` a word set,
    ``c1*w1 + c2*w2`` a polynomial and ``bot`` the pointed bottom.
    """
    text = text.strip()
    tag = v.tag
    if tag is Tag.SET:
        return FreeElement(v, _parse_word(text, alphabet))
    if tag is Tag.POINTED:
        return fm_bot(v) if text == "bot" else FreeElement(v, _parse_word(text, alphabet))
    if tag is Tag.INVOLUTION:
        comp = text.startswith("!")
        return FreeElement(v, (_parse_word(text[1:] if comp else text, alphabet), comp))
    if tag is Tag.SEMILATTICE:
        if not (text.startswith("{") and text.endswith("}")):
            return fm_embed_word(_parse_word(text, alphabet), v)
        inner = text[1:-1].strip()
        return FreeElement(v, _wordset(_parse_word(t, alphabet) for t in inner.split(",")) if inner else ())
    if text == "0":
        return fm_zero(v)
    terms: dict[str, int] = {}
    for term in text.split("+"):
        if "*" in term:
            c, w = term.split("*", 1)
            coef = int(c.strip())
        else:
            coef, w = 1, term
        w = _parse_word(w, alphabet)
        terms[w] = terms.get(w, 0) + coef
    return FreeElement(v, _poly(terms, v.p))


def fm_operation(how: tuple, v: VarietySpec, witness) -> FreeElement:
    """Apply the free-monoid counterpart of an algebra operation.

    ``how`` uses the vocabulary of :func:`synalg.variety.closure_order`;
    ``witness`` maps already-known element ids to their free elements.
    """
    kind, name = how[0], how[1]
    if kind == "const":
        return {"basepoint": fm_bot, "bottom": fm_empty, "zero": fm_zero}[name](v)
    if kind == "unary":
        u = witness(how[2])
        if name == "involution":
            return fm_complement(u)
        if name == "negation":
            return fm_scale(v.p - 1, u)
        return fm_scale(int(name.rsplit(" ", 1)[1]), u)
    if kind == "binary":
        a, b = witness(how[2]), witness(how[3])
        return fm_join(a, b) if name == "join" else fm_add(a, b)
    raise ValueError(f"no free counterpart for {how!r}")
