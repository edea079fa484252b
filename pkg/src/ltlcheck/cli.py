"""Command-line entry point.

Exit status: 0 all properties hold / suite passed / oracle agreed,
1 some property fails / suite mismatch / oracle disagreement,
2 usage, I/O or parse error, 3 state-space cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import claimchain
from .automata import build_automaton, to_dot, to_text
from .checker import CheckMode, check
from .errors import ParseError, SemanticError, StateSpaceLimit, SuiteMismatch, UnknownAtom
from .kripke import DEFAULT_STATE_CAP, parse_model
from .ltl import parse_spec_file, pretty, to_nnf
from .oracle import run_oracle

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=[m.value for m in CheckMode], default="as-written")
    common.add_argument("--output", choices=["text", "json"], default="text")
    common.add_argument("--state-cap", type=_positive, default=DEFAULT_STATE_CAP)
    common.add_argument("-v", "--verbose", action="store_true", help="log warnings (e.g. vacuity)")

    p = _Parser(prog="ltlcheck", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", parents=[common], help="check a model against a spec file")
    c.add_argument("model", type=Path)
    c.add_argument("specs", type=Path)

    t = sub.add_parser("translate", parents=[common], help="translate specs to Büchi automata")
    t.add_argument("specs", type=Path)
    t.add_argument("--automaton-dump", type=Path)
    t.add_argument("--dot", action="store_true", help="render Graphviz instead of plain text")

    sub.add_parser("suite", parents=[common], help="reproduce the ClaimChain verdict table")

    e = sub.add_parser("emit-builtin", parents=[common],
                       help="write the built-in model and specs to a directory")
    e.add_argument("dir", type=Path)

    o = sub.add_parser("oracle", parents=[common],
                       help="cross-check automata against direct lasso evaluation")
    o.add_argument("--cases", type=int, default=1000)
    o.add_argument("--seed", type=int, default=0)
    return p


class _UsageError(Exception):
    pass


def _read(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise _UsageError(f"{path}: no such file")
    except OSError as exc:
        raise _UsageError(f"{path}: {exc.strerror}")


def cmd_check(args) -> int:
    model_text = _read(args.model)
    spec_text = _read(args.specs)
    m = parse_model(model_text, name=args.model.stem)
    entries = parse_spec_file(spec_text)
    mode = CheckMode(args.mode)
    verdicts = [check(m, e.formula, mode, cap=args.state_cap) for e in entries]
    if args.output == "json":
        reports = [v.to_json(name=e.name) for e, v in zip(entries, verdicts)]
        print(json.dumps(reports, indent=2))
    else:
        for e, v in zip(entries, verdicts):
            note = " vacuous" if v.vacuous else ""
            print(f"{e.name}: {v.outcome.upper()} (t={v.elapsed:.3f}s){note}")
            if v.counterexample is not None:
                for line in claimchain.format_lasso(v.counterexample):
                    print("    " + line)
    return EXIT_OK if all(v.holds for v in verdicts) else EXIT_FAIL


def cmd_translate(args) -> int:
    entries = parse_spec_file(_read(args.specs))
    mode = CheckMode(args.mode)
    chunks, summary = [], []
    for e in entries:
        a = build_automaton(to_nnf(mode.apply(e.formula)))
        summary.append({"name": e.name, "spec": pretty(e.formula), "nodes": len(a.nodes),
                        "accepting": len(a.accepting),
                        "transitions": sum(len(t) for t in a.transitions.values())})
        body = to_dot(a, e.name) if args.dot else to_text(a)
        chunks.append(f"# {e.name}: {pretty(e.formula)}\n{body}" if not args.dot else body)
    dump = "\n".join(chunks)
    if args.automaton_dump:
        args.automaton_dump.write_text(dump, encoding="utf-8")
    if args.output == "json":
        print(json.dumps(summary, indent=2))
    elif args.automaton_dump:
        for s in summary:
            print(f"{s['name']}: {s['nodes']} nodes, {s['accepting']} accepting, "
                  f"{s['transitions']} transitions")
    else:
        sys.stdout.write(dump)
    return EXIT_OK


def cmd_suite(args) -> int:
    try:
        report = claimchain.run_suite(CheckMode(args.mode), strict=True)
        status = EXIT_OK
    except SuiteMismatch as exc:
        report = exc.report
        status = EXIT_FAIL
    if args.output == "json":
        print(json.dumps(report.to_json(), indent=2, ensure_ascii=False))
    else:
        print(report.render())
    return status


def cmd_emit_builtin(args) -> int:
    args.dir.mkdir(parents=True, exist_ok=True)
    model = args.dir / "claimchain.model"
    spec = args.dir / "claimchain.spec"
    model.write_text(claimchain.MODEL_TEXT, encoding="utf-8")
    spec.write_text(claimchain.SPEC_TEXT, encoding="utf-8")
    print(model)
    print(spec)
    return EXIT_OK


def cmd_oracle(args) -> int:
    result = run_oracle(args.cases, args.seed)
    if args.output == "json":
        print(json.dumps(result.to_json(), indent=2))
    else:
        print(result.render())
    return EXIT_OK if result.ok else EXIT_FAIL


COMMANDS = {
    "check": cmd_check,
    "translate": cmd_translate,
    "suite": cmd_suite,
    "emit-builtin": cmd_emit_builtin,
    "oracle": cmd_oracle,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.verbose else logging.ERROR,
                        format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"ltlcheck: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, SemanticError, UnknownAtom) as exc:
        print(f"ltlcheck: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except StateSpaceLimit as exc:
        print(f"ltlcheck: {exc}", file=sys.stderr)
        return EXIT_LIMIT


if __name__ == "__main__":
    sys.exit(main())
