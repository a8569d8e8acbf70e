"""Command line front end.

Exit codes: 0 success (and, under --notion, the notion holds for every
pair), 1 a requested notion fails, 2 input/usage errors, 3 a resource
cap was exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys as _sys
from concurrent.futures import ThreadPoolExecutor

from . import ccs, oracles
from .errors import ParseError, PositionLimitError, SolverLimitError
from .game import DEFAULT_MAX_POSITIONS
from .lts import TransitionSystem, parse_transitions
from .report import (ORACLE_NOTIONS, analyze_pair, json_pair, text_report,
                     write_csv, write_figure)
from .spectrum import NOTIONS, ORDER


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eqspectra",
        description="Decide the weak equivalence spectrum for process pairs.")
    sub = parser.add_subparsers(dest="command", required=True)
    check = sub.add_parser(
        "check", help="analyze the process pairs of a model file")
    check.add_argument("file", help="process definitions, or a transition "
                       "list with --lts")
    check.add_argument("--lts", action="store_true",
                       help="read FILE as 'source,action,target' lines "
                       "instead of process definitions")
    check.add_argument("--pair", action="append", default=[],
                       metavar="LEFT,RIGHT",
                       help="compare this pair (repeatable; overrides the "
                       "@compare/@preorder directives in FILE)")
    check.add_argument("--notion", metavar="NAME",
                       help="only decide this notion; exit 1 if it fails "
                       "for any pair (names: %s)" % ", ".join(ORDER))
    check.add_argument("--json", action="store_true", dest="as_json",
                       help="emit one JSON document instead of text")
    check.add_argument("--budgets", action="store_true",
                       help="include the full per-position budget table")
    check.add_argument("--formulas", action="store_true",
                       help="include one certificate formula per violated "
                       "notion (priced within that notion's budget)")
    check.add_argument("--emit-game", action="store_true",
                       help="include the raw game graph in the output")
    check.add_argument("--stats", action="store_true",
                       help="print position/move counts per pair")
    check.add_argument("--max-positions", type=int,
                       default=DEFAULT_MAX_POSITIONS, metavar="N",
                       help="abort with exit code 3 if the game exceeds "
                       "N positions (default %(default)s)")
    check.add_argument("--threads", type=int, default=1, metavar="N",
                       help="analyze up to N pairs concurrently")
    check.add_argument("--report-dir", metavar="DIR",
                       help="write verdicts.csv and one spectrum figure "
                       "per pair into DIR")
    check.add_argument("--oracle", action="store_true",
                       help="cross-check a few notions against slow "
                       "reference algorithms (small systems only)")
    return parser


def _load(args) -> tuple[TransitionSystem, list]:
    with open(args.file, "r") as handle:
        text = handle.read()
    if args.lts:
        system = parse_transitions(text)
        directives = []
    else:
        defs = ccs.parse(text)
        system, _mapping = ccs.compile_definitions(defs)
        directives = [(d.kind, d.left, d.right) for d in defs.directives]
    pairs = []
    for spec in args.pair:
        parts = [s.strip() for s in spec.split(",")]
        if len(parts) != 2 or not all(parts):
            raise ParseError("--pair expects LEFT,RIGHT, got %r" % spec)
        pairs.append(("compare", parts[0], parts[1]))
    if not pairs:
        pairs = directives
    if not pairs:
        raise ParseError("nothing to compare: give --pair or add a "
                         "@compare/@preorder line to the file")
    for _kind, left, right in pairs:
        for name in (left, right):
            try:
                system.state(name)
            except KeyError:
                raise ParseError("unknown process %r" % name)
    return system, pairs


def _oracle_lines(system: TransitionSystem, left: str, right: str) -> list:
    if system.n > 14:
        return ["oracle: skipped (system too large for the reference "
                "algorithms)"]
    p, q = system.state(left), system.state(right)
    checks = {
        "BBsr": oracles.branching_bisim_sr,
        "B": oracles.weak_bisim,
        "SB": oracles.stable_bisim,
        "1S": lambda s, a, b: (oracles.weak_sim_preorder(s, a, b)
                               and oracles.weak_sim_preorder(s, b, a)),
        "T": lambda s, a, b: (oracles.weak_trace_preorder(s, a, b)
                              and oracles.weak_trace_preorder(s, b, a)),
    }
    out = []
    for name in ORACLE_NOTIONS:
        res = checks[name](system, p, q)
        out.append("oracle: %-5s %s" % (name, "yes" if res else "no"))
    return out


def _safe_name(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", text)


def run_check(args) -> int:
    system, pairs = _load(args)
    if args.notion is not None and args.notion not in NOTIONS:
        raise ParseError("unknown notion %r (expected one of: %s)"
                         % (args.notion, ", ".join(ORDER)))

    def work(pair):
        kind, left, right = pair
        return analyze_pair(system, left, right, kind, args.max_positions)

    if args.threads > 1 and len(pairs) > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            results = list(pool.map(work, pairs))
    else:
        results = [work(pair) for pair in pairs]

    if args.report_dir:
        os.makedirs(args.report_dir, exist_ok=True)
        write_csv(os.path.join(args.report_dir, "verdicts.csv"), results)
        for result in results:
            name = "%s_vs_%s.png" % (_safe_name(result.left),
                                     _safe_name(result.right))
            write_figure(os.path.join(args.report_dir, name), result)

    exit_code = 0
    if args.as_json:
        doc = {"file": args.file, "pairs": []}
        for result in results:
            payload = json_pair(result, emit_game=args.emit_game,
                                emit_budgets=args.budgets)
            if args.stats:
                payload["stats"] = {"positions": result.positions,
                                    "moves": result.moves}
            doc["pairs"].append(payload)
        if args.notion is not None:
            for result in results:
                relation = "lr" if result.kind == "preorder" else "equivalence"
                if not result.verdict.holds(args.notion, relation):
                    exit_code = 1
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        blocks = []
        for result in results:
            if args.notion is not None:
                relation = "lr" if result.kind == "preorder" else "equivalence"
                held = result.verdict.holds(args.notion, relation)
                symbol = "<=" if result.kind == "preorder" else "~"
                blocks.append("%s %s %s [%s]: %s"
                              % (result.left, symbol, result.right,
                                 args.notion, "yes" if held else "no"))
                if not held:
                    exit_code = 1
                continue
            block = text_report(result, stats=args.stats,
                                per_notion_formulas=args.formulas)
            if args.oracle:
                block += "\n" + "\n".join(
                    _oracle_lines(system, result.left, result.right))
            blocks.append(block)
        print("\n\n".join(blocks))
        if args.report_dir:
            print("\nreport written to %s" % args.report_dir)
    return exit_code


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "check":
            return run_check(args)
        parser.error("unknown command %r" % args.command)
    except ParseError as exc:
        print("error: %s" % exc, file=_sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print("error: %s" % exc, file=_sys.stderr)
        return 2
    except (PositionLimitError, SolverLimitError) as exc:
        print("error: %s" % exc, file=_sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
