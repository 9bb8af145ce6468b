"""Batch command-line front end.

Exit codes: 0 success, 1 query or golden mismatch, 2 input error, 3 budget.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import config
from .errors import BudgetExceeded, ExpertRevError, UnknownNameError
from .expertise import world_count
from .operators import OPERATOR_NAMES
from .postulates import (
    BASIC_POSTULATES,
    POSTULATE_IDS,
    SequenceSpace,
    check_postulate,
)
from .propositional import Signature, models, parse_formula
from .repro import REPRO_IDS, run_repro
from .scenario import Scenario, dump, evaluate_scenario, load_scenario

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


def _names(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def cmd_eval(args) -> int:
    sc = load_scenario(args.scenario)
    doc, ok = evaluate_scenario(sc, timing=args.timing)
    sys.stdout.write(dump(doc))
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_worlds(args) -> int:
    sc = load_scenario(args.scenario)
    op = sc.make_operator()
    if op.uses_decomposition():
        raise BudgetExceeded("worlds to list", world_count(sc.sig), config.WORLD_BUDGET)
    out = op.evaluate(sc.sequence)
    ws = out.possible if args.set == "possible" else out.plausible
    idx = ws.indices()
    shown = idx if args.limit is None else idx[: args.limit]
    for i in shown:
        sys.stdout.write(f"{int(i)}: {ws.universe.world(int(i)).render()}\n")
    if len(shown) < len(idx):
        sys.stdout.write(f"showing {len(shown)} of {len(idx)} {args.set} worlds\n")
    else:
        sys.stdout.write(f"total: {len(idx)} {args.set} worlds\n")
    return EXIT_OK


def _space_from_scenario(sc: Scenario, args) -> tuple[SequenceSpace, list[str], list[str]]:
    spec = sc.postulates or {}
    pool = None
    if "pool" in spec:
        pool = tuple(sorted({models(parse_formula(f, sc.sig), sc.sig).mask for f in spec["pool"]}))
    space = SequenceSpace(
        sc.sig,
        spec.get("max_length", args.max_length),
        pool,
        spec.get("mode", "exhaustive"),
        spec.get("seed", args.seed),
        spec.get("count", args.count),
    )
    ops = spec.get("operators") or [sc.operator]
    names = spec.get("names") or list(BASIC_POSTULATES)
    return space, ops, names


def cmd_postulates(args) -> int:
    if args.scenario:
        space, ops, names = _space_from_scenario(load_scenario(args.scenario), args)
    else:
        sig = Signature(_names(args.variables), _names(args.cases), _names(args.sources))
        pool = None
        if args.pool:
            pool = tuple(sorted({models(parse_formula(f, sig), sig).mask for f in args.pool.split(";")}))
        mode = "sampled" if args.sampled else "exhaustive"
        space = SequenceSpace(sig, args.max_length, pool, mode, args.seed, args.sampled or args.count)
        ops, names = [], list(BASIC_POSTULATES)
    if args.operator:
        ops = list(OPERATOR_NAMES) if args.operator == ["all"] else args.operator
    if not ops:
        ops = ["weak-mb"]
    if args.postulates:
        names = _names(args.postulates)
    results = []
    for op in ops:
        for name in names:
            try:
                results.append(check_postulate(op, name, space).to_dict())
            except ExpertRevError as e:
                if isinstance(e, (BudgetExceeded, UnknownNameError)):
                    raise
                results.append({"postulate": name, "operator": op, "status": "not-applicable", "note": str(e)})
    sys.stdout.write(dump({"space": space.to_dict(), "results": results}))
    return EXIT_OK


def cmd_repro(args) -> int:
    ids = list(REPRO_IDS) if args.example == "all" else [args.example]
    ok = True
    for ex in ids:
        for o in run_repro(ex):
            sys.stdout.write(f"{'PASS' if o.passed else 'FAIL'} {ex} [{o.provenance}] {o.label}"
                             f"{'' if o.passed else f': expected {o.expected}, got {o.actual}'}\n")
            ok &= o.passed
    return EXIT_OK if ok else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="expertrev", description="Belief change with expertise: evaluation and postulate checks.")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", help="evaluate a scenario file")
    e.add_argument("scenario")
    e.add_argument("--timing", action="store_true", help="include wall-clock time in stats")
    e.set_defaults(func=cmd_eval)

    w = sub.add_parser("worlds", help="list possible or plausible worlds of a scenario")
    w.add_argument("scenario")
    w.add_argument("--set", choices=["possible", "plausible"], default="plausible")
    w.add_argument("--limit", type=int, default=None)
    w.set_defaults(func=cmd_worlds)

    q = sub.add_parser("postulates", help="check postulates over a sequence space")
    q.add_argument("scenario", nargs="?", help="scenario file with an optional 'postulates' section")
    q.add_argument("--operator", action="append", choices=list(OPERATOR_NAMES) + ["all"])
    q.add_argument("--postulates", help=f"comma-separated ids from: {', '.join(POSTULATE_IDS)}; Acyc(n) allowed")
    q.add_argument("--variables", default="p")
    q.add_argument("--cases", default="c,d")
    q.add_argument("--sources", default="*,i,j")
    q.add_argument("--max-length", type=int, default=3)
    q.add_argument("--pool", help="semicolon-separated report formulas (default: every satisfiable mask)")
    q.add_argument("--sampled", type=int, default=0, metavar="COUNT", help="sample COUNT sequences instead")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--count", type=int, default=1000, help=argparse.SUPPRESS)
    q.set_defaults(func=cmd_postulates)

    r = sub.add_parser("repro", help="replay worked examples against golden values")
    r.add_argument("example", choices=list(REPRO_IDS) + ["all"])
    r.set_defaults(func=cmd_repro)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_BUDGET
    except (ExpertRevError, ValueError, KeyError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
