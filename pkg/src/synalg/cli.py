"""Command line entry point: ``synalg <command>``.

Exit codes: 0 ok, 1 a checked property failed, 2 invalid input,
3 size guard hit, 4 usage error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from typing import Sequence

from .automata import DAutomaton, SizeGuardError, lift_automaton, validate_automaton
from .checks import CHECKS, CheckConfig, run_checks
from .duality import (
    NonFunctionalTransition,
    RegularLanguageHandle,
    boolean_closure_atoms,
    reverse,
    two_sided_derivatives,
    verify_mindual,
    verify_syndual,
)
from .freemonoid import VarietyMismatch, check_alphabet, format_element
from .io import (
    AutomatonFormatError,
    AutomatonValidationError,
    display_name,
    dumps_automaton,
    emit_monoid,
    parse_automaton_file,
)
from .minimize import minimize
from .regex import RegexError, dfa_to_regex, regex_to_dfa
from .syntactic import oracle_monoid, syntactic_monoid, syntactic_partition_oracle, transition_monoid
from .variety import INVOLUTION, POINTED, SEMILATTICE, SET, Tag, VarietySpec, vect

EXIT_OK, EXIT_PROPERTY, EXIT_INPUT, EXIT_SIZE, EXIT_USAGE = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse exits with 2, which here means bad input
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_variety(text: str) -> VarietySpec:
    """``set``, ``pointed``, ``involution``, ``jsl`` (or ``semilattice``), ``vect2``, ``vect(3)``, ``vect:5``."""
    t = text.strip().lower()
    fixed = {"set": SET, "pointed": POINTED, "involution": INVOLUTION, "jsl": SEMILATTICE, "semilattice": SEMILATTICE}
    if t in fixed:
        return fixed[t]
    m = re.fullmatch(r"vect[:(]?(\d+)\)?", t)
    if m:
        try:
            return vect(int(m.group(1)))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    raise UsageError(f"unknown variety {text!r}")


def _load(args) -> DAutomaton:
    if args.input and args.regex is not None:
        raise UsageError("give either -i FILE or --regex, not both")
    if args.input:
        return parse_automaton_file(args.input)
    if args.regex is None:
        raise UsageError("no input: give -i FILE or --regex R --alphabet AB")
    if not args.alphabet:
        raise UsageError("--regex needs --alphabet")
    try:
        alphabet = check_alphabet(args.alphabet)
    except ValueError as exc:
        raise InputError(f"--alphabet: {exc}") from None
    return regex_to_dfa(args.regex, alphabet)


def _automaton_table(A: DAutomaton) -> str:
    names = list(A.names())
    v = A.variety
    w = max(len(s) for s in names + ["state"])
    lines = [f"variety: {v}", f"states: {A.size}", f"initial: {names[A.initial]}", ""]
    head = ["state".ljust(w)] + [a.ljust(w) for a in A.alphabet] + ["output"]
    lines.append(" ".join(head))
    lines.append("-" * len(lines[-1]))
    for q in range(A.size):
        row = [names[q].ljust(w)] + [names[int(A.delta[a][q])].ljust(w) for a in A.alphabet]
        lines.append(" ".join(row + [v.output_label(int(A.output[q]))]))
    return "\n".join(lines) + "\n"


def _emit_automaton(A: DAutomaton, fmt: str) -> str:
    return dumps_automaton(A) if fmt == "json" else _automaton_table(A)


# -- commands ------------------------------------------------------------------------


def cmd_minimize(args, out) -> int:
    A = _load(args)
    M, rep = minimize(A)
    out.write(_emit_automaton(M, args.out))
    if args.out == "table":
        out.write(f"reachable: {rep.reachable_size}, minimal: {rep.minimal_size}\n")
    return EXIT_OK


def _monoid_cmd(pair, args, out) -> int:
    text = emit_monoid(pair, args.out)
    out.write(text)
    ok = json.loads(text)["laws"]["ok"] if args.out == "json" else "\nlaws: ok\n" in text
    return EXIT_OK if ok else EXIT_PROPERTY


def cmd_transmon(args, out) -> int:
    return _monoid_cmd(transition_monoid(_load(args)), args, out)


def cmd_synmon(args, out) -> int:
    return _monoid_cmd(syntactic_monoid(_load(args)).pair, args, out)


def cmd_oracle(args, out) -> int:
    A = _load(args)
    if not 0 <= args.maxlen <= 6:
        raise UsageError("--maxlen must be between 0 and 6")
    res = oracle_monoid(A)
    elems, P = syntactic_partition_oracle(A, args.maxlen)
    classes = [[format_element(elems[i]) for i in block] for block in P.blocks]
    if args.out == "json":
        doc = json.loads(emit_monoid(res.pair, "json"))
        doc["classes"] = classes
        out.write(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
        return EXIT_OK if doc["laws"]["ok"] else EXIT_PROPERTY
    code = _monoid_cmd(res.pair, args, out)
    out.write(f"\nclasses of free elements up to word length {args.maxlen}: {len(classes)}\n")
    for block in classes:
        out.write("  {" + ", ".join(s.replace("_", "ε") for s in block) + "}\n")
    return code


def cmd_dualize(args, out) -> int:
    A = _load(args)
    if A.variety.tag is not Tag.SET:
        raise UsageError("dualize works on classical (set) automata")
    L = RegularLanguageHandle(A)
    gens = two_sided_derivatives(reverse(L))
    V = boolean_closure_atoms(gens)
    syn = verify_syndual(L)
    mind = verify_mindual(L)
    D = syn.dual
    if args.out == "json":
        doc = {
            "generators": [str(dfa_to_regex(g.dfa)) for g in gens],
            "atoms": [str(dfa_to_regex(z.dfa)) for z in V.atoms],
            "dual": json.loads(emit_monoid(D.pair(), "json")),
            "syntactic_iso": syn.ok,
            "minimal_iso": mind.ok,
        }
        out.write(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
    else:
        out.write(f"derivatives of the reversed language ({len(gens)}):\n")
        out.writelines(f"  {dfa_to_regex(g.dfa)}\n" for g in gens)
        pair = D.pair()
        out.write(f"atoms ({len(V.atoms)}):\n")
        for z, atom in enumerate(V.atoms):
            out.write(f"  [{display_name(pair.monoid.names[z])}] {dfa_to_regex(atom.dfa)}\n")
        out.write("\ndual monoid on the atoms:\n")
        out.write(emit_monoid(pair, "table"))
        out.write(f"\nisomorphic to the syntactic monoid: {'yes' if syn.ok else 'no (' + syn.reason + ')'}\n")
        out.write(f"atom automaton isomorphic to the minimal DFA: {'yes' if mind.ok else 'no (' + mind.reason + ')'}\n")
    return EXIT_OK if syn.ok and mind.ok else EXIT_PROPERTY


def cmd_lift(args, out) -> int:
    A = _load(args)
    if A.variety.tag is not Tag.SET:
        raise UsageError("lift takes a classical (set) automaton")
    B = lift_automaton(A, parse_variety(args.to))
    out.write(_emit_automaton(B, args.out))
    return EXIT_OK if not validate_automaton(B) else EXIT_PROPERTY


def cmd_check(args, out) -> int:
    try:
        cfg = CheckConfig(
            seed=args.seed,
            instance_count=args.instances,
            max_base_states=args.max_states,
            alphabet_size=args.alphabet_size,
            varieties=tuple(parse_variety(v) for v in args.varieties.split(",")),
            checks=tuple(c.strip() for c in args.checks.split(",")),
            dump_dir=args.dump_dir or None,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = run_checks(cfg)
    out.write(report.to_text())
    return EXIT_OK if report.ok else EXIT_PROPERTY


# -- parser ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    io = _Parser(add_help=False)
    io.add_argument("-i", "--input", metavar="FILE", help="automaton JSON file")
    io.add_argument("--regex", metavar="R", help="regular expression, an alternative to -i (set only)")
    io.add_argument("--alphabet", metavar="AB", help="letters of the alphabet for --regex, e.g. ab")
    io.add_argument("--out", choices=("table", "json"), default="table", help="output format")

    p = _Parser(prog="synalg", description="Syntactic algebras of regular languages.")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    sub.add_parser("minimize", parents=[io], help="minimal automaton").set_defaults(run=cmd_minimize)
    sub.add_parser("transmon", parents=[io], help="transition monoid of the automaton as given").set_defaults(
        run=cmd_transmon
    )
    sub.add_parser("synmon", parents=[io], help="syntactic monoid").set_defaults(run=cmd_synmon)
    o = sub.add_parser("oracle", parents=[io], help="syntactic monoid from the context oracle")
    o.add_argument("--maxlen", type=int, default=3, help="word length bound for the listed classes")
    o.set_defaults(run=cmd_oracle)
    sub.add_parser("dualize", parents=[io], help="dual monoid on atoms, compared with the syntactic monoid").set_defaults(
        run=cmd_dualize
    )
    lf = sub.add_parser("lift", parents=[io], help="lift a classical automaton to another variety")
    lf.add_argument("--to", required=True, metavar="VARIETY", help="pointed, involution, jsl, vect2, vect3, ...")
    lf.set_defaults(run=cmd_lift)

    c = sub.add_parser("check", help="seeded randomized property checks")
    c.add_argument("--seed", type=int, default=42)
    c.add_argument("--instances", type=int, default=100)
    c.add_argument("--max-states", type=int, default=4)
    c.add_argument("--alphabet-size", type=int, default=2)
    c.add_argument("--varieties", default="set", help="comma separated, e.g. set,pointed,vect2")
    c.add_argument("--checks", default=",".join(CHECKS), help="comma separated subset of " + ", ".join(CHECKS))
    c.add_argument("--dump-dir", default="synalg-failures", help="where failing instances are written ('' to skip)")
    c.set_defaults(run=cmd_check)
    return p


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.run(args, out)
    except UsageError as exc:
        print(f"synalg: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InputError, AutomatonFormatError, AutomatonValidationError, RegexError, VarietyMismatch, OSError) as exc:
        print(f"synalg: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SizeGuardError as exc:
        print(f"synalg: {exc} (raise SYNALG_SIZE_GUARD to allow more)", file=sys.stderr)
        return EXIT_SIZE
    except NonFunctionalTransition as exc:
        print(f"synalg: {exc}", file=sys.stderr)
        return EXIT_PROPERTY


if __name__ == "__main__":
    sys.exit(main())
