"""Syntactic algebras of regular languages over monoids with extra structure."""

from .automata import DAutomaton, SizeGuardError, dfa, evaluate, lift_automaton, random_automaton, validate_automaton
from .duality import RegularLanguageHandle, verify_mindual, verify_syndual
from .freemonoid import FreeElement, fm_embed_word, fm_enumerate, format_element, parse_element
from .io import emit_monoid, parse_automaton_file
from .minimize import automaton_iso, minimize
from .regex import dfa_to_regex, regex_to_dfa
from .syntactic import (
    FiniteDMonoid,
    RecognizingPair,
    factor_through,
    monoid_validate,
    oracle_monoid,
    syntactic_monoid,
    transition_monoid,
)
from .variety import INVOLUTION, POINTED, SEMILATTICE, SET, Tag, VarietySpec, vect

__version__ = "0.1.0"

__all__ = [
    "DAutomaton",
    "SizeGuardError",
    "dfa",
    "evaluate",
    "lift_automaton",
    "random_automaton",
    "validate_automaton",
    "RegularLanguageHandle",
    "verify_mindual",
    "verify_syndual",
    "FreeElement",
    "fm_embed_word",
    "fm_enumerate",
    "format_element",
    "parse_element",
    "emit_monoid",
    "parse_automaton_file",
    "automaton_iso",
    "minimize",
    "dfa_to_regex",
    "regex_to_dfa",
    "FiniteDMonoid",
    "RecognizingPair",
    "factor_through",
    "monoid_validate",
    "oracle_monoid",
    "syntactic_monoid",
    "transition_monoid",
    "INVOLUTION",
    "POINTED",
    "SEMILATTICE",
    "SET",
    "Tag",
    "VarietySpec",
    "vect",
]
