"""Command-line front end: list the catalog, build groups, verify, render tables."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from . import autom, catalog, structures

_ORDER36_NAMES = {
    1: "Z36",
    2: "Z18 x Z2",
    3: "Z6 x Z6",
    4: "Z12 x Z3",
    5: "S3 x Z6",
    6: "S3 x S3",
    7: "D18 x Z2",
    8: "A4 x Z3",
    9: "D36",
    10: "(Z3 : Z4) x Z3",
    11: "((Z3 x Z3) : Z2) x Z2",
    12: "(Z3 x Z3) : Z4 (rotation)",
    13: "(Z2 x Z2) : Z9",
    14: "(Z3 x Z3) : Z4 (inversion)",
}

_REPORT_COLUMNS = (
    "spec",
    "group_order",
    "predicted_order",
    "brute_order",
    "brute_seconds",
    "q_order",
    "r_order",
    "qr_order",
    "main_theorem_ok",
    "verdict",
    "reason",
)


def canonical_json(obj) -> str:
    """Deterministic serialization: sorted keys, no whitespace, ints only."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _md_table(headers, rows) -> str:
    def cell(c) -> str:
        return str(c).replace("|", "\\|")

    lines = ["| " + " | ".join(headers) + " |", "|" + "|".join("---" for _ in headers) + "|"]
    for row in rows:
        lines.append("| " + " | ".join(cell(c) for c in row) + " |")
    return "\n".join(lines)


def _csv_text(headers, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(headers)
    w.writerows(rows)
    return buf.getvalue().rstrip("\n")


# -- subcommands -------------------------------------------------------------


def cmd_list(args) -> int:
    rows = []
    for t in range(1, 37):
        rows.append(
            {
                "type": t,
                "conditions": catalog.conditions(t),
                "relations": catalog.relation_summary(t),
            }
        )
    if args.format == "json":
        _emit(canonical_json(rows), args.out)
    elif args.format == "csv":
        _emit(
            _csv_text(
                ["type", "conditions", "relations"],
                [(r["type"], r["conditions"], r["relations"]) for r in rows],
            ),
            args.out,
        )
    else:
        _emit(
            _md_table(
                ["Type", "Conditions", "Relations"],
                [(r["type"], r["conditions"] or "-", r["relations"]) for r in rows],
            ),
            args.out,
        )
    return 0


def _report_row(rep: dict):
    brute = rep["brute"] or {}
    cons = rep["constructed"] or {}
    return (
        rep["spec"],
        rep["group_order"],
        rep["predicted"]["order"],
        brute.get("order", ""),
        brute.get("seconds", ""),
        cons.get("q_order", ""),
        cons.get("r_order", ""),
        cons.get("qr_order", ""),
        cons.get("main_theorem_ok", ""),
        rep["verdict"],
        rep["reason"] or "",
    )


def cmd_verify(args) -> int:
    if args.sweep:
        specs = [
            s
            for s in catalog.enumerate_admissible(args.pmax, args.qmax)
            if s.type_id >= 15 or args.all_types
        ]
    else:
        if not args.specs:
            print("verify: give spec strings or --sweep", file=sys.stderr)
            return 2
        try:
            specs = [catalog.parse_spec(s) for s in args.specs]
        except (ValueError, catalog.UnknownTypeError, catalog.ParameterError) as e:
            print(f"verify: {e}", file=sys.stderr)
            return 2
        if args.n is not None:
            try:
                specs = [
                    catalog.make_spec(s.type_id, s.p, s.q, args.n)
                    if s.type_id in (27, 28)
                    else s
                    for s in specs
                ]
            except catalog.ParameterError as e:
                print(f"verify: {e}", file=sys.stderr)
                return 2

    budget = args.budget
    if budget is None:
        budget = int(float(os.environ.get("P2Q2_BUDGET", autom.DEFAULT_BUDGET)))
    reports = autom.verify_many(
        specs, budget=budget, threads=args.threads, with_fingerprints=not args.no_fingerprints
    )

    if args.corrupt_predicted is not None:
        for rep in reports:
            if rep["spec"].startswith(f"t{args.corrupt_predicted}:"):
                rep["predicted"]["order"] += 1
                if rep["verdict"] == "Match":
                    rep["verdict"] = "OrderMismatch"
                    rep["reason"] = "corrupted predicted order (test hook)"

    if args.format == "json":
        _emit(canonical_json(reports), args.out)
    elif args.format == "csv":
        _emit(_csv_text(_REPORT_COLUMNS, [_report_row(r) for r in reports]), args.out)
    else:
        _emit(
            _md_table(
                ["Spec", "|G|", "Predicted", "Brute", "|Q|", "|R|", "|QR|", "Verdict"],
                [
                    (
                        r["spec"],
                        r["group_order"],
                        r["predicted"]["order"],
                        (r["brute"] or {}).get("order", "-"),
                        (r["constructed"] or {}).get("q_order", "-"),
                        (r["constructed"] or {}).get("r_order", "-"),
                        (r["constructed"] or {}).get("qr_order", "-"),
                        r["verdict"] + ("" if not r["reason"] else f" ({r['reason']})"),
                    )
                    for r in reports
                ],
            ),
            args.out,
        )
    return 0 if all(r["verdict"] in ("Match", "Skipped") for r in reports) else 1


def cmd_table(args) -> int:
    if args.kind == 1:
        rows = []
        for t in range(1, 15):
            expr = structures.predicted_structure(t, 3, 2)
            rows.append((t, _ORDER36_NAMES[t], expr.render(), expr.order()))
        if args.format == "json":
            payload = [
                {"type": r[0], "group": r[1], "aut": r[2], "aut_order": r[3]} for r in rows
            ]
            _emit(canonical_json(payload), args.out)
        elif args.format == "csv":
            _emit(_csv_text(["type", "group", "aut", "aut_order"], rows), args.out)
        else:
            _emit(_md_table(["Type", "Group", "Aut(G)", "Order"], rows), args.out)
        return 0
    if args.p is None or args.q is None:
        print("table 2 needs --p and --q", file=sys.stderr)
        return 2
    rows = []
    for t in range(15, 37):
        ok, reason = catalog.admissible(t, args.p, args.q)
        if ok:
            expr = structures.predicted_structure(t, args.p, args.q)
            rows.append((t, catalog.conditions(t) or "-", expr.render(), expr.order()))
        else:
            rows.append((t, catalog.conditions(t) or "-", f"n/a ({reason})", ""))
    if args.format == "json":
        payload = [
            {"type": r[0], "conditions": r[1], "aut": r[2], "aut_order": r[3] or None}
            for r in rows
        ]
        _emit(canonical_json(payload), args.out)
    elif args.format == "csv":
        _emit(_csv_text(["type", "conditions", "aut", "aut_order"], rows), args.out)
    else:
        _emit(_md_table(["Type", "Conditions", "Aut(G)", "Order"], rows), args.out)
    return 0


def cmd_build(args) -> int:
    try:
        spec = catalog.parse_spec(args.spec)
    except (ValueError, catalog.UnknownTypeError, catalog.ParameterError) as e:
        print(f"build: {e}", file=sys.stderr)
        return 2
    G = catalog.build(spec)
    summary = {
        "spec": str(spec),
        "order": G.order,
        "generators": [
            {"name": name, "order": m}
            for (name, m) in G.presentation.generators
        ],
        "abelian": G.is_abelian(),
        "center_order": G.center().order,
        "derived_order": G.derived_subgroup().order,
        "abelian_invariants": list(G.abelian_invariants()),
        "order_histogram": {str(k): v for k, v in G.order_histogram().items()},
    }
    if args.format == "json":
        _emit(canonical_json(summary), args.out)
    else:
        lines = [f"{k}: {v}" for k, v in summary.items()]
        _emit("\n".join(lines), args.out)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="p2q2",
        description="Construct the groups of order p^2 q^2 and verify their automorphism groups.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p_list = sub.add_parser("list", help="show the 36-type catalog")
    p_list.add_argument("--format", choices=("md", "json", "csv"), default="md")
    p_list.add_argument("--out")
    p_list.set_defaults(func=cmd_list)

    p_ver = sub.add_parser("verify", help="verify Aut(G) for specs or a sweep")
    p_ver.add_argument("specs", nargs="*", help="spec strings like t19:p=5,q=2")
    p_ver.add_argument("--sweep", action="store_true", help="verify all admissible specs in bounds")
    p_ver.add_argument("--pmax", type=int, default=7)
    p_ver.add_argument("--qmax", type=int, default=3)
    p_ver.add_argument("--all-types", action="store_true", help="include types 1-14 in sweeps")
    p_ver.add_argument("--budget", type=lambda v: int(float(v)), default=None,
                       help="search-node budget (default: P2Q2_BUDGET or 1e8)")
    p_ver.add_argument("--threads", type=int, default=1)
    p_ver.add_argument("--n", type=int, default=None, help="exponent override for types 27/28")
    p_ver.add_argument("--no-fingerprints", action="store_true")
    p_ver.add_argument("--format", choices=("md", "json", "csv"), default="md")
    p_ver.add_argument("--out")
    p_ver.add_argument("--corrupt-predicted", type=int, default=None, help=argparse.SUPPRESS)
    p_ver.set_defaults(func=cmd_verify)

    p_tab = sub.add_parser("table", help="render the predicted-structure tables")
    p_tab.add_argument("kind", type=int, choices=(1, 2))
    p_tab.add_argument("--p", type=int)
    p_tab.add_argument("--q", type=int)
    p_tab.add_argument("--format", choices=("md", "json", "csv"), default="md")
    p_tab.add_argument("--out")
    p_tab.set_defaults(func=cmd_table)

    p_build = sub.add_parser("build", help="build one group and print a summary")
    p_build.add_argument("spec")
    p_build.add_argument("--format", choices=("md", "json"), default="md")
    p_build.add_argument("--out")
    p_build.set_defaults(func=cmd_build)
    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
