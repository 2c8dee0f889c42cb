"""Command-line front end.

Every subcommand reads files or literals, runs one library operation,
and reports in either plain text or JSON (--format).  Exit codes: 0 for
success, 1 for a semantic failure (rejected proof, invalid model, false
formula, no countermodel, non-prime saturation), 2 for usage and parse
errors.  Output is deterministic for fixed inputs."""

from __future__ import annotations

import argparse
import json
import sys

from jlogic.proof_system import (
    ConstantSpecification,
    HypothesisNotFound,
    NotAppropriate,
    FileFormatError,
    check_proof,
    deduce,
    internalize,
    parse_cs,
    parse_proof,
    print_proof,
)
from jlogic.saturation import (
    CapExceeded,
    FailedPrecondition,
    RefutedBySemantics,
    Unknown,
    bounded_canonical_model,
    check_prime,
    parse_universe,
    prime_saturate,
)
from jlogic.semantics import (
    UniverseNotClosed,
    evaluate_truth,
    find_countermodel,
    parse_model,
    print_model,
    validate_model,
)
from jlogic.syntax import (
    ParseError,
    formula_size,
    parse_formula,
    parse_term,
    print_formula,
    print_term,
    term_size,
)


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _write_out(path: str, text: str, stdout) -> None:
    if path == "-":
        stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _emit(args, stdout, text: str, payload: dict) -> None:
    if args.format == "json":
        stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        stdout.write(text + "\n")


def _load_cs(path: str | None) -> ConstantSpecification:
    if path is None:
        return ConstantSpecification.default_schematic()
    return parse_cs(_read(path))


def cmd_parse(args, stdout) -> int:
    if args.term:
        t = parse_term(args.input)
        _emit(args, stdout, print_term(t),
              {"kind": "term", "canonical": print_term(t),
               "size": term_size(t)})
    else:
        a = parse_formula(args.input)
        _emit(args, stdout, print_formula(a, full_parens=args.full_parens),
              {"kind": "formula",
               "canonical": print_formula(a, full_parens=args.full_parens),
               "size": formula_size(a)})
    return 0


def cmd_check(args, stdout) -> int:
    cs = _load_cs(args.cs)
    pi = parse_proof(_read(args.proof), cs.constants())
    report = check_proof(pi, cs)
    _emit(args, stdout, str(report),
          {"ok": report.ok, "step": report.step, "code": report.code,
           "detail": report.detail})
    return 0 if report.ok else 1


def cmd_deduce(args, stdout) -> int:
    cs = _load_cs(args.cs)
    pi = parse_proof(_read(args.proof), cs.constants())
    a = parse_formula(args.hypothesis, constants=cs.constants())
    out = deduce(pi, a)
    text = print_proof(out)
    payload = {"conclusion": print_formula(out.conclusion),
               "steps": len(out.steps), "out": args.out}
    if args.out == "-":
        if args.format == "json":
            _emit(args, stdout, "", dict(payload, proof=text))
        else:
            stdout.write(text)
    else:
        _write_out(args.out, text, stdout)
        _emit(args, stdout, f"deduced {print_formula(out.conclusion)}", payload)
    return 0


def cmd_internalize(args, stdout) -> int:
    cs = _load_cs(args.cs)
    pi = parse_proof(_read(args.proof), cs.constants())
    witnesses = tuple(
        parse_term(part.strip(), constants=cs.constants())
        for part in args.witnesses.split(",")
        if part.strip()
    )
    t, out = internalize(pi, witnesses, cs)
    text = print_proof(out)
    payload = {"term": print_term(t),
               "conclusion": print_formula(out.conclusion),
               "steps": len(out.steps), "out": args.out}
    if args.out == "-":
        if args.format == "json":
            _emit(args, stdout, "", dict(payload, proof=text))
        else:
            stdout.write(f"# term: {print_term(t)}\n" + text)
    else:
        _write_out(args.out, text, stdout)
        _emit(args, stdout, f"internalized by {print_term(t)}", payload)
    return 0


def cmd_model_validate(args, stdout) -> int:
    cs = _load_cs(args.cs)
    m = parse_model(_read(args.model), cs)
    verdict = validate_model(m)
    _emit(args, stdout, str(verdict),
          {"ok": verdict.ok,
           "violations": [
               {"condition": v.condition, "worlds": list(v.worlds),
                "witness": v.witness}
               for v in verdict.violations
           ]})
    return 0 if verdict.ok else 1


def cmd_model_eval(args, stdout) -> int:
    cs = _load_cs(args.cs)
    m = parse_model(_read(args.model), cs)
    a = parse_formula(args.formula, constants=cs.constants())
    value = evaluate_truth(m, args.world, a)
    _emit(args, stdout, "true" if value else "false",
          {"world": args.world, "formula": print_formula(a), "value": value})
    return 0 if value else 1


def cmd_countermodel(args, stdout) -> int:
    cs = _load_cs(args.cs)
    a = parse_formula(args.formula, constants=cs.constants())
    found = find_countermodel(a, args.max_worlds, args.budget, cs)
    if found is None:
        _emit(args, stdout, "none found within bounds",
              {"found": False, "max_worlds": args.max_worlds,
               "budget": args.budget})
        return 1
    text = f"# false at: {found.world}\n" + print_model(found.model)
    _emit(args, stdout, text.rstrip("\n"),
          {"found": True, "world": found.world,
           "model": print_model(found.model)})
    return 0


def _certificate_tag(cert) -> str | None:
    if cert is None:
        return None
    if isinstance(cert, RefutedBySemantics):
        return "refuted"
    if isinstance(cert, Unknown):
        return "unknown"
    return "derivable"


def cmd_saturate(args, stdout) -> int:
    cs = _load_cs(args.cs)
    spec = parse_universe(_read(args.universe), cs)
    goal = spec.goal
    if args.goal is not None:
        goal = parse_formula(args.goal, constants=cs.constants())
    if goal is None:
        raise FileFormatError("no goal: neither in the file nor via --goal", 0)
    th = prime_saturate(spec.base, goal, spec.universe, cs, args.depth)
    verdict = check_prime(th, cs)
    members = sorted(map(print_formula, th.members), key=str)
    lines = []
    for step in th.trace:
        cert = _certificate_tag(step.certificate) or "already present"
        action = "add" if step.added else "skip"
        lines.append(
            f"{step.index}. {action} {print_formula(step.candidate)}  [{cert}]"
        )
    lines.append("members: " + ", ".join(members))
    lines.append(f"verdict: {verdict.status}"
                 + (f" ({verdict.reason})" if verdict.reason else ""))
    unknowns = sum(
        1 for c in th.certificates.values() if isinstance(c, Unknown)
    )
    _emit(args, stdout, "\n".join(lines),
          {"members": members, "verdict": verdict.status,
           "reason": verdict.reason, "unknown_certificates": unknowns,
           "trace": [
               {"index": s.index, "candidate": print_formula(s.candidate),
                "added": s.added,
                "certificate": _certificate_tag(s.certificate)}
               for s in th.trace
           ]})
    return 0 if verdict.status == "prime" else 1


def cmd_canonical(args, stdout) -> int:
    cs = _load_cs(args.cs)
    spec = parse_universe(_read(args.universe), cs)
    cm = bounded_canonical_model(
        spec.universe, cs, args.depth, cap=args.cap
    )
    text = print_model(cm.model)
    world_lines = []
    for i, th in enumerate(cm.theories):
        members = ", ".join(sorted(map(print_formula, th.members), key=str))
        world_lines.append(f"{cm.model.worlds[i]} = {{{members}}}")
    summary_lines = world_lines + [
        f"excluded unknown sets: {len(cm.excluded_unknown)}"
    ]
    payload = {
        "worlds": [
            {"name": cm.model.worlds[i],
             "members": sorted(map(print_formula, th.members), key=str)}
            for i, th in enumerate(cm.theories)
        ],
        "excluded_unknown": [
            sorted(map(print_formula, s), key=str)
            for s in cm.excluded_unknown
        ],
        "out": args.out,
    }
    if args.out == "-":
        if args.format == "json":
            _emit(args, stdout, "", dict(payload, model=text))
        else:
            for line in summary_lines:
                stdout.write(f"# {line}\n")
            stdout.write(text)
    else:
        _write_out(args.out, text, stdout)
        _emit(args, stdout, "\n".join(summary_lines), payload)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jlogic",
        description="Proof checking, Kripke-style models, and saturation "
                    "for intuitionistic justification logic.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--format", choices=("text", "json"), default="text")
        return p

    p = add("parse", cmd_parse, "parse a formula or term and reprint it")
    p.add_argument("input")
    p.add_argument("--term", action="store_true",
                   help="treat the input as a term")
    p.add_argument("--full-parens", action="store_true")

    p = add("check", cmd_check, "check a Hilbert proof file")
    p.add_argument("proof")
    p.add_argument("cs", nargs="?", default=None,
                   help="constant specification file (default: schematic)")

    p = add("deduce", cmd_deduce, "discharge a hypothesis from a proof")
    p.add_argument("proof")
    p.add_argument("hypothesis")
    p.add_argument("out", nargs="?", default="-")
    p.add_argument("--cs", default=None)

    p = add("internalize", cmd_internalize,
            "lift a proof to a proof about evidence")
    p.add_argument("proof")
    p.add_argument("witnesses", help="comma-separated terms, one per hypothesis")
    p.add_argument("out", nargs="?", default="-")
    p.add_argument("--cs", default=None)

    p = add("model-validate", cmd_model_validate, "validate a model file")
    p.add_argument("model")
    p.add_argument("--cs", default=None)

    p = add("model-eval", cmd_model_eval, "evaluate a formula at a world")
    p.add_argument("model")
    p.add_argument("world")
    p.add_argument("formula")
    p.add_argument("--cs", default=None)

    p = add("countermodel", cmd_countermodel,
            "search for a finite model refuting a formula")
    p.add_argument("formula")
    p.add_argument("--max-worlds", type=int, default=3)
    p.add_argument("--budget", type=int, default=6)
    p.add_argument("--cs", default=None)

    p = add("saturate", cmd_saturate,
            "extend a base toward a prime set avoiding a goal")
    p.add_argument("universe", help="universe file with base: and goal:")
    p.add_argument("--goal", default=None,
                   help="override the goal from the file")
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--cs", default=None)

    p = add("canonical", cmd_canonical,
            "build the bounded canonical model of a universe")
    p.add_argument("universe")
    p.add_argument("--out", default="-")
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--cap", type=int, default=14)
    p.add_argument("--cs", default=None)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, sys.stdout)
    except (ParseError, FileFormatError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (HypothesisNotFound, NotAppropriate, UniverseNotClosed,
            FailedPrecondition, CapExceeded, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
