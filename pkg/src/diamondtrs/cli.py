"""Command-line interface.

Exit codes: 0 holds / success, 1 counterexample (or proven non-termination),
2 unknown within budget, 3 usage error, 4 unreadable or malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Any

from . import turing
from .diamond import Counterexample, Holds, ShapeError, check_shape_on_derived, check_shape_on_trs, parse_shape
from .encode import INIT_T, EncodingError, RewriteTrace, compile_trs, decode_term, encode_config, signature
from .formats import FormatError, emit_trs, export_graph, parse_tm, parse_trs
from .reach import Budget, CertificateConflict, No, ReachSet, Unknown, Yes, reachable_terms
from .terms import TermError, format_term, parse_term, rewrite_steps
from .turing import Configuration

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_UNKNOWN, EXIT_USAGE, EXIT_INPUT = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


@dataclass
class Report:
    command: list[str]
    verdict: str
    details: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps({"command": self.command, "verdict": self.verdict, "details": self.details},
                          indent=2, sort_keys=False) + "\n"

    def to_text(self) -> str:
        lines = [f"command: {' '.join(self.command)}", f"verdict: {self.verdict}"]
        for key, value in self.details.items():
            lines += _text_lines(key, value, 0)
        return "\n".join(lines) + "\n"


def _text_lines(key: str, value: Any, indent: int) -> list[str]:
    pad = "  " * indent
    if isinstance(value, dict):
        out = [f"{pad}{key}:"]
        for k, v in value.items():
            out += _text_lines(k, v, indent + 1)
        return out
    if isinstance(value, list):
        out = [f"{pad}{key}:"]
        for i, v in enumerate(value):
            if isinstance(v, dict) and set(v) <= {"term", "rule", "position"}:
                step = "" if "rule" not in v else f"   [rule {v['rule']} at {_pos(v['position'])}]"
                out.append(f"{pad}  {i}: {v['term']}{step}")
            elif isinstance(v, (dict, list)):
                out += _text_lines(str(i), v, indent + 1)
            else:
                out.append(f"{pad}  - {v}")
        return out
    return [f"{pad}{key}: {value}"]


def _pos(p) -> str:
    return "root" if not p else ".".join(str(i) for i in p)


def trace_json(trace: RewriteTrace) -> list[dict]:
    out = [{"term": format_term(trace.terms[0])}]
    for t, (rule, pos) in zip(trace.terms[1:], trace.steps):
        out.append({"term": format_term(t), "rule": rule, "position": list(pos)})
    return out


def config_json(k: Configuration) -> dict:
    return {"state": k.state, "position": k.position, "cells": {str(p): a for p, a in k.cells}}


def evidence_json(value: Any) -> Any:
    match value:
        case RewriteTrace():
            return trace_json(value)
        case ReachSet():
            return {"closed_set_size": len(value), "complete": value.complete}
        case turing.Cycled(prefix, period):
            return {"cycle": {"prefix": prefix, "period": period}}
        case turing.Halted(steps, final):
            return {"halted_after": steps, "final": config_json(final)}
        case Holds() | Counterexample() | Unknown():
            verdict, details = outcome_json(value)
            return {"verdict": verdict, **details}
        case tuple() | list():
            return [evidence_json(v) for v in value]
        case dict():
            return {k: evidence_json(v) for k, v in value.items()}
        case _:
            return value


def outcome_json(outcome) -> tuple[str, dict]:
    match outcome:
        case Holds(exact, evidence):
            return ("holds (exact)" if exact else "holds (bounded)"), {"evidence": evidence_json(evidence)}
        case Counterexample(peak, branches, explanation, exact, evidence):
            return ("counterexample (exact)" if exact else "counterexample"), {
                "peak": format_term(peak),
                "branches": [format_term(b) for b in branches],
                "explanation": explanation,
                "evidence": evidence_json(evidence),
            }
        case Unknown(reason):
            return "unknown", {"reason": reason}
    raise TypeError(outcome)


def _exit_for(outcome) -> int:
    if isinstance(outcome, (Holds, Yes)):
        return EXIT_OK
    if isinstance(outcome, (Counterexample, No)):
        return EXIT_COUNTEREXAMPLE
    return EXIT_UNKNOWN


# --- helpers ----------------------------------------------------------------


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def _load_tm(path: str) -> turing.TuringMachine:
    tm = parse_tm(_read(path), path)
    defects = turing.validate_machine(tm)
    if defects:
        raise InputError(f"{path}: invalid machine: " + "; ".join(defects))
    return tm


def _budget(text: str | None) -> Budget:
    try:
        return Budget.parse(text) if text else Budget()
    except ValueError as e:
        raise UsageError(str(e)) from None


def _parse_config(tm: turing.TuringMachine, text: str) -> Configuration:
    parts = text.split()
    if len(parts) < 2:
        raise UsageError("--config takes 'STATE POS [P:SYM ...]'")
    state, pos = parts[0], parts[1]
    if state not in tm.states:
        raise UsageError(f"unknown state {state}")
    try:
        tape = {}
        for cell in parts[2:]:
            p, _, a = cell.partition(":")
            if a not in tm.alphabet:
                raise UsageError(f"unknown tape symbol {a!r}")
            tape[int(p)] = a
        return Configuration.make(state, int(pos), tape, tm.blank)
    except ValueError:
        raise UsageError(f"bad --config {text!r}") from None


# --- subcommands ------------------------------------------------------------


def cmd_simulate(args) -> tuple[Report, int]:
    tm = _load_tm(args.machine)
    outcome = turing.run(tm, args.steps)
    details: dict[str, Any] = {"steps_budget": args.steps}
    match outcome:
        case turing.Halted(n, final):
            verdict, code = "halted", EXIT_OK
            details.update(steps=n, final=config_json(final))
        case turing.Cycled(prefix, period):
            verdict, code = "cycled", EXIT_COUNTEREXAMPLE
            details.update(prefix=prefix, period=period)
        case _:
            verdict, code = "exceeded", EXIT_UNKNOWN
    if args.trace:
        details["configurations"] = [config_json(k) for k in turing.trajectory(tm, args.steps)]
    return Report(args.argv, verdict, details), code


def cmd_compile(args) -> tuple[Report | str, int]:
    tm = _load_tm(args.machine)
    text = emit_trs(compile_trs(tm))
    if args.output is None:
        return text, EXIT_OK
    try:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as e:
        raise InputError(f"cannot write {args.output}: {e.strerror}") from None
    return Report(args.argv, "compiled", {"output": args.output, "rules": text.count("->")}), EXIT_OK


def cmd_encode(args) -> tuple[Report, int]:
    tm = _load_tm(args.machine)
    if args.decode is not None:
        try:
            t = parse_term(args.decode, signature(tm))
        except TermError as e:
            raise UsageError(str(e)) from None
        k = decode_term(tm, t)
        if k is None:
            return Report(args.argv, "not a configuration", {"term": format_term(t)}), EXIT_UNKNOWN
        return Report(args.argv, "decoded", {"term": format_term(t), "configuration": config_json(k)}), EXIT_OK
    k = _parse_config(tm, args.config) if args.config else tm.initial()
    return Report(args.argv, "encoded", {"configuration": config_json(k),
                                         "term": format_term(encode_config(tm, k))}), EXIT_OK


def _load_trs_and_term(args, term_text: str | None):
    trs = parse_trs(_read(args.trs), args.trs)
    if term_text is None:
        return trs, None
    try:
        return trs, parse_term(term_text, trs.signature)
    except TermError as e:
        raise UsageError(f"term {term_text!r}: {e}") from None


def cmd_rewrite(args) -> tuple[Report, int]:
    trs, t = _load_trs_and_term(args, args.term)
    steps = [{"term": format_term(t)}]
    for _ in range(args.steps):
        st = next(rewrite_steps(trs, t), None)
        if st is None:
            break
        t = st.result
        steps.append({"term": format_term(t), "rule": st.rule, "position": list(st.position)})
    normal = next(rewrite_steps(trs, t), None) is None
    return Report(args.argv, "normal form" if normal else "stopped", {"trace": steps}), EXIT_OK


def cmd_graph(args) -> tuple[str, int]:
    budget = _budget(args.budget)
    if args.machine:
        trs = compile_trs(_load_tm(args.machine))
        seed = INIT_T if args.seed is None else parse_term(args.seed, trs.signature)
    else:
        if args.seed is None:
            raise UsageError("graph needs --seed for a TRS file")
        trs, seed = _load_trs_and_term(args, args.seed)
    dot = export_graph(trs, seed, budget)
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(dot)
        except OSError as e:
            raise InputError(f"cannot write {args.output}: {e.strerror}") from None
        return "", EXIT_OK
    return dot, EXIT_OK


def cmd_check(args) -> tuple[Report, int]:
    budget = _budget(args.budget)
    try:
        shape = parse_shape(args.shape)
    except ShapeError as e:
        raise UsageError(str(e)) from None
    if args.machine:
        if args.trs:
            raise UsageError("give either a TRS file or --machine, not both")
        tm = _load_tm(args.machine)
        outcome = check_shape_on_derived(tm, shape, budget, cross_check=args.cross_check)
    else:
        if not args.trs:
            raise UsageError("check needs a TRS file or --machine")
        trs, _ = _load_trs_and_term(args, None)
        try:
            peaks = [parse_term(p, trs.signature) for p in args.peak]
            if args.seed:
                rs = reachable_terms(trs, parse_term(args.seed, trs.signature), budget)
                peaks += rs.terms
        except TermError as e:
            raise UsageError(str(e)) from None
        if not peaks:
            raise UsageError("check on a TRS needs --peak or --seed")
        outcome = check_shape_on_trs(trs, shape, peaks, budget)
        if args.seed and not rs.complete and isinstance(outcome, Holds):
            outcome = Unknown(f"peak set from {args.seed} truncated: {rs.truncation}")
    verdict, details = outcome_json(outcome)
    details = {"shape": str(shape), "budget": str(budget), **details}
    return Report(args.argv, verdict, details), _exit_for(outcome)


# --- entry point ------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="diamondtrs", description="Turing machines as rewrite systems; diamond-like shape checks.")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--json", action="store_true", help="structured report")

    sp = sub.add_parser("simulate", help="run a machine from the blank tape")
    sp.add_argument("machine")
    sp.add_argument("--steps", type=int, default=1000)
    sp.add_argument("--trace", action="store_true", help="list every configuration")
    common(sp)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("compile", help="emit the rewrite system of a machine")
    sp.add_argument("machine")
    sp.add_argument("-o", "--output")
    common(sp)
    sp.set_defaults(func=cmd_compile)

    sp = sub.add_parser("encode", help="encode a configuration as a term (or decode with --decode)")
    sp.add_argument("machine")
    sp.add_argument("--config", help="'STATE POS [P:SYM ...]'; default is the start configuration")
    sp.add_argument("--decode", metavar="TERM")
    common(sp)
    sp.set_defaults(func=cmd_encode)

    sp = sub.add_parser("rewrite", help="rewrite a term, always taking the first redex")
    sp.add_argument("trs")
    sp.add_argument("--term", required=True)
    sp.add_argument("--steps", type=int, default=10)
    common(sp)
    sp.set_defaults(func=cmd_rewrite)

    sp = sub.add_parser("graph", help="DOT graph of the terms reachable from a seed")
    sp.add_argument("trs", nargs="?")
    sp.add_argument("--machine")
    sp.add_argument("--seed")
    sp.add_argument("--budget")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_graph, json=False)

    sp = sub.add_parser("check", help="check a diamond-like shape")
    sp.add_argument("trs", nargs="?")
    sp.add_argument("--machine", help="check the derived relation of this machine instead")
    sp.add_argument("--shape", required=True)
    sp.add_argument("--peak", action="append", default=[], help="peak term (repeatable)")
    sp.add_argument("--seed", help="use every term reachable from SEED as a peak")
    sp.add_argument("--budget", help="steps=N,terms=N,size=N")
    sp.add_argument("--cross-check", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_check)
    return p


def run_command(argv: list[str]) -> tuple[int, str, str]:
    """Run one invocation; returns ``(exit code, stdout text, stderr text)``."""
    try:
        args = build_parser().parse_args(argv)
        args.argv = ["diamondtrs", *argv]
        if args.cmd == "graph" and args.trs and args.machine:
            raise UsageError("give either a TRS file or --machine, not both")
        result, code = args.func(args)
    except UsageError as e:
        return EXIT_USAGE, "", f"usage error: {e}\n"
    except (InputError, FormatError, EncodingError, turing.InvalidMachine) as e:
        return EXIT_INPUT, "", f"error: {e}\n"
    except TermError as e:
        return EXIT_USAGE, "", f"usage error: {e}\n"
    except CertificateConflict as e:
        return EXIT_INPUT + 1, "", f"internal consistency failure: {e}\n"
    if isinstance(result, Report):
        return code, result.to_json() if args.json else result.to_text(), ""
    return code, result, ""


def main(argv: list[str] | None = None) -> int:
    code, out, err = run_command(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
