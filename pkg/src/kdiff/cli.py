"""Command-line front end.

Exit codes: 0 success, 1 mathematical violation or disagreement, 2 input
error, 3 undecided because an enumeration budget ran out.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .cover import lifted_level_graph, local_cover
from .cyclotomic import parse_cycnum
from .dimension import dimension_report
from .generate import EXHAUSTIVE_KINDS, VERTEX_KINDS, exhaustive_instances, random_instances, sweep
from .grc import BudgetExceeded, check_condition_4, check_condition_4hat, p_nk_evaluate, p_nk_vanishes
from .serialize import InstanceFormatError, load_instance
from .twisted import validate

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_UNDECIDED = 0, 1, 2, 3


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True, default=str))
    else:
        print(text)


def _load(args):
    t, warnings = load_instance(args.path, strict=not args.lenient)
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    return t


def _load_valid(args):
    """Load and validate; returns (instance, None) or (None, exit code) after reporting."""
    t = _load(args)
    report = validate(t)
    if not report.ok:
        _emit(args, {"error": "invalid instance", "validation": report.to_json()},
              "invalid instance:\n" + "\n".join(f"  {i.code} at {i.where!r}: {i.message}" for i in report.problems))
        return None, EXIT_INPUT
    return t, None


def cmd_validate(args) -> int:
    t = _load(args)
    report = validate(t)
    lines = ["valid" if report.ok else "invalid"]
    lines += [f"  {i.severity} {i.code} at {i.where!r}: {i.message}" for i in report.issues]
    _emit(args, report.to_json(), "\n".join(lines))
    return EXIT_OK if report.ok else EXIT_VIOLATION


def _verdict_word(holds: Optional[bool]) -> str:
    return {True: "in boundary", False: "not in boundary", None: "indeterminate"}[holds]


def cmd_check(args) -> int:
    t, code = _load_valid(args)
    if t is None:
        return code
    run_direct = args.mode in ("direct", "cross-check")
    run_cover = args.mode in ("cover", "cross-check")
    payload: dict = {}
    lines = []
    direct = cover = None
    if run_direct:
        report = check_condition_4(t, args.budget, all_cases=args.all_cases)
        direct = report.holds
        payload["direct"] = report.to_json()
        lines.append(f"direct criterion: {report.status}")
        for inst in report.instances:
            lines.append(f"  level {inst.level}, component {inst.component_vertices}: case {inst.case}"
                         + (f", witness {inst.witness}" if inst.witness else ""))
    if run_cover:
        verdict = check_condition_4hat(t, args.budget)
        cover = verdict.holds
        payload["cover"] = verdict.to_json()
        lines.append(f"cover criterion: {verdict.status}"
                     + (f", offsets {verdict.witness}" if verdict.witness is not None else ""))
    results = [r for r, ran in ((direct, run_direct), (cover, run_cover)) if ran]
    if None in results:
        payload["verdict"] = "indeterminate"
        lines.append("verdict: indeterminate (budget exceeded)")
        _emit(args, payload, "\n".join(lines))
        return EXIT_UNDECIDED
    if args.mode == "cross-check":
        agree = direct == cover
        payload["agree"] = agree
        payload["verdict"] = _verdict_word(direct) if agree else "disagreement"
        lines.append(f"verdict: {payload['verdict']}")
        _emit(args, payload, "\n".join(lines))
        return EXIT_OK if agree else EXIT_VIOLATION
    holds = results[0]
    payload["verdict"] = _verdict_word(holds)
    lines.append(f"verdict: {payload['verdict']}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if holds else EXIT_VIOLATION


def cmd_dim(args) -> int:
    t, code = _load_valid(args)
    if t is None:
        return code
    try:
        report = dimension_report(t, args.kind)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    c = report.counts
    text = "\n".join([
        f"stratum dimension: {report.stratum_dim} ({report.component_kind})",
        f"horizontal edges: {report.horizontal_edges}",
        f"twisted dimension: {report.twisted_dim} (if non-empty)",
        f"pole-free vertices: {c.vertices} (local maxima {c.local_maxima}, lower {c.lower})",
        f"residue space: {c.residue_space_dim}, after residue conditions: {c.grc_space_dim}",
        f"independent residue conditions: {c.independent_conditions}",
    ])
    _emit(args, report.to_json(), text)
    return EXIT_OK


def cmd_cover(args) -> int:
    t, code = _load_valid(args)
    if t is None:
        return code
    vertex_ids = t.graph.vertex_ids()
    if args.vertex is not None:
        matches = [v for v in vertex_ids if str(v) == args.vertex]
        if not matches:
            print(f"error: no vertex {args.vertex!r}", file=sys.stderr)
            return EXIT_INPUT
        vertex_ids = matches
    payload: dict = {"vertices": []}
    lines = []
    for vid in vertex_ids:
        data = local_cover(t, vid)
        orders = data.lifted_orders()
        payload["vertices"].append({
            "vertex": vid, "components": data.components, "component_genus": data.component_genus,
            "lifted_orders": orders,
            "points": [{"kind": p.kind, "key": p.key, "order": p.order, "preimages": p.preimages,
                        "ramification": p.ramification, "lifted_order": p.lifted_order} for p in data.points],
        })
        lines.append(f"vertex {vid!r}: {data.components} component(s) of genus {data.component_genus}, "
                     f"lifted orders {tuple(orders)}")
    if args.offsets is not None:
        try:
            raw = json.loads(args.offsets)
        except json.JSONDecodeError as exc:
            print(f"error: --offsets is not JSON ({exc.msg})", file=sys.stderr)
            return EXIT_INPUT
        by_name = {str(e.id): e.id for e in t.graph.edges}
        offsets = {by_name.get(str(key), key): int(val) for key, val in raw.items()}
        lifted = lifted_level_graph(t, offsets)
        comps = lifted.connected_components()
        payload["lifted"] = {
            "vertices": [v.id for v in lifted.vertices],
            "edges": [[e.id, e.v_plus, e.v_minus] for e in lifted.edges],
            "components": [f.sorted_vertices() for f in comps],
        }
        lines.append(f"lifted graph: {len(lifted.vertices)} vertices, {len(lifted.edges)} edges, "
                     f"{len(comps)} component(s)")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_pnk(args) -> int:
    try:
        roots = [parse_cycnum(r) for r in args.roots]
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.k < 1:
        print("error: k must be positive", file=sys.stderr)
        return EXIT_INPUT
    try:
        vanishes, witness = p_nk_vanishes(roots, args.k, args.budget)
        value = p_nk_evaluate(roots, args.k, args.budget) if roots else None
    except BudgetExceeded as exc:
        _emit(args, {"verdict": "indeterminate", "reason": str(exc)}, f"indeterminate: {exc}")
        return EXIT_UNDECIDED
    payload = {"vanishes": vanishes, "witness": None if witness is None else list(witness),
               "value": None if value is None else value.to_json(),
               "value_text": None if value is None else str(value)}
    text = f"value: {value if value is not None else 0}\nvanishes: {vanishes}"
    if witness is not None:
        text += f"\nwitness: {tuple(witness)}"
    _emit(args, payload, text)
    return EXIT_OK


def cmd_sweep(args) -> int:
    palette = None
    if args.palette:
        try:
            palette = [parse_cycnum(r) for r in args.palette]
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
    ks = args.k or [2]
    if args.mode == "random":
        source = random_instances(args.count, args.seed, args.max_vertices, args.max_edges, ks, palette)
    else:
        kinds = VERTEX_KINDS if args.all_kinds else EXHAUSTIVE_KINDS
        source = exhaustive_instances(args.max_vertices, args.max_edges, ks, palette, kinds, args.per_shape_cap)
    summary = sweep(source, args.budget, limit=args.limit)
    payload = summary.to_json(timing=args.timing)
    text = (f"instances: {summary.instances}\nagreements: {summary.agreements}\n"
            f"disagreements: {summary.disagreements}\nindeterminate: {summary.indeterminate}\n"
            f"in boundary: {summary.holds}, not in boundary: {summary.fails}")
    if args.timing:
        text += f"\nseconds: {summary.elapsed:.1f}"
    _emit(args, payload, text)
    if summary.disagreements:
        return EXIT_VIOLATION
    return EXIT_UNDECIDED if summary.indeterminate else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kdiff", description="Boundary membership of twisted k-differentials.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, path=True):
        if path:
            p.add_argument("path", help="instance JSON file")
            p.add_argument("--lenient", action="store_true", help="warn about unknown fields instead of failing")
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("validate", help="check the defining conditions of an instance")
    add_common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("check", help="decide the global residue condition")
    add_common(p)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--direct", dest="mode", action="store_const", const="direct")
    mode.add_argument("--cover", dest="mode", action="store_const", const="cover")
    mode.add_argument("--cross-check", dest="mode", action="store_const", const="cross-check")
    p.set_defaults(mode="cross-check")
    p.add_argument("--budget", type=int, default=None, help="enumeration budget (default: $KDIFF_BUDGET or 10^7)")
    p.add_argument("--all-cases", action="store_true", help="record every satisfied case, not only the first")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("dim", help="dimension formulas and residue counts")
    add_common(p)
    p.add_argument("--kind", choices=["ab", "non-ab"], default=None)
    p.set_defaults(func=cmd_dim)

    p = sub.add_parser("cover", help="canonical cover data per vertex")
    add_common(p)
    p.add_argument("--vertex", default=None, help="only this vertex")
    p.add_argument("--offsets", default=None, help='JSON map edge id -> offset, e.g. \'{"1": 0, "2": 1}\'')
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("pnk", help="evaluate the symmetric polynomial at given roots")
    add_common(p, path=False)
    p.add_argument("k", type=int)
    p.add_argument("roots", nargs="*", help='roots such as "1", "-1/2", "z4", "1+z3^2"')
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(func=cmd_pnk)

    p = sub.add_parser("sweep", help="cross-check the two criteria on generated instances")
    add_common(p, path=False)
    p.add_argument("--mode", choices=["exhaustive", "random"], default="exhaustive")
    p.add_argument("--max-vertices", type=int, default=3)
    p.add_argument("--max-edges", type=int, default=4)
    p.add_argument("--k", type=int, action="append", help="repeatable; default 2")
    p.add_argument("--palette", nargs="+", default=None, help="root palette (default 0 1 -1 zeta_k 1+zeta_k)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1000, help="instances in random mode")
    p.add_argument("--per-shape-cap", type=int, default=None, help="root assignments kept per shape and kinds")
    p.add_argument("--all-kinds", action="store_true", help="also generate vertices with marked poles")
    p.add_argument("--limit", type=int, default=None, help="stop after this many instances")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--timing", action="store_true", help="report elapsed time (not reproducible)")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InstanceFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
