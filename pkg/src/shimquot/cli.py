"""Command line front end: ``shimquot <command> ...``; JSON on stdout unless --table."""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import kernels
from .atkin_lehner import full_group, subgroups
from .catalog import find_record, load_catalog, run_pipeline, verify_all
from .cm import cm_report
from .local import everywhere_locally_solvable
from .points import DEFAULT_HEIGHT, search, verdict


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


def _row(cols, widths) -> str:
    return "  ".join(str(c).ljust(w) for c, w in zip(cols, widths)).rstrip()


def _table(header, rows) -> None:
    widths = [max(len(str(r[i])) for r in [header, *rows]) for i in range(len(header))]
    print(_row(header, widths))
    print(_row(["-" * w for w in widths], widths))
    for r in rows:
        print(_row(r, widths))


def _record(args):
    return find_record(args.curve, load_catalog(args.catalog))


def cmd_local(args) -> int:
    rec = _record(args)
    if rec.model is None:
        print(f"{rec.key}: no model in the catalog", file=sys.stderr)
        return 2
    rep = everywhere_locally_solvable(rec.model)
    if args.table:
        rows = [("R", "real", rep.real_solvable)]
        rows += [(p, "bad", ok) for p, ok in rep.bad_primes_checked]
        rows += [(p, "good", ok) for p, ok in rep.small_good_primes_checked]
        _table(("place", "kind", "solvable"), rows)
        print(f"everywhere locally solvable: {rep.everywhere_locally_solvable} (good p > {rep.good_prime_cutoff} automatic)")
    else:
        _emit({"id": rec.key, **rep.to_json()})
    return 0


def cmd_points(args) -> int:
    rec = _record(args)
    if args.certify:
        out = verdict(rec, args.height).to_json()
    elif rec.model is None:
        print(f"{rec.key}: no model in the catalog", file=sys.stderr)
        return 2
    else:
        res = search(rec.model, args.height)
        out = {"points": [str(P) for P in res.points], "height_bound": res.height_bound}
    if args.table:
        print(f"{rec.key}  {rec.model.equation() if rec.model else '(no model)'}")
        for P in out["points"]:
            print(f"  {P}")
        if "status" in out:
            print(f"status: {out['status']}  {out['note']}")
    else:
        _emit({"id": rec.key, **out})
    return 0


def cmd_cm(args) -> int:
    rec = _record(args)
    pts = search(rec.model, args.height).points if rec.model is not None else None
    rep = cm_report(rec, pts)
    if args.table:
        _table(("order", "disc", "h", "case", "m_r", "field", "#rational"),
               [(c["order"], c["disc"], c["h"], c["case"], c["m_r"], c["field_of_image"],
                 c["rational_points_on_quotient"]) for c in rep.image_counts])
        for p in rep.points:
            print(f"{p['point']}: {p['status']} d={p['fiber_field_d']} fields={p['candidate_fields']}")
    else:
        _emit(rep.to_json())
    return 0


def cmd_analyze(args) -> int:
    rep = run_pipeline(_record(args), args.height).to_json()
    if args.table:
        v = rep["verdict"]
        print(f"{rep['id']}: {v['status']} {', '.join(v['points'])} {v['note']}")
        for d in rep["diff"]:
            print(f"  diff: {d}")
    else:
        _emit(rep)
    return 1 if rep["diff"] else 0


def cmd_group(args) -> int:
    G = full_group(args.D, args.N)
    subs = subgroups(args.D, args.N)
    if args.table:
        _table(("key", "generators", "order"),
               [(H.key, ",".join(f"w_{m}" for m in H.generators) or "-", H.order) for H in subs])
    else:
        _emit({"D": args.D, "N": args.N, "elements": list(G.elements),
               "subgroups": [{"key": H.key, "generators": list(H.generators), "elements": list(H.elements)}
                             for H in subs]})
    return 0


def cmd_verify_all(args) -> int:
    code, reports = verify_all(jobs=args.jobs, H=args.height, path=args.catalog)
    if args.table:
        rows = []
        for r in reports:
            v = r["verdict"]
            n = len(v["points"]) if v["status"] not in ("infinite", "untranscribed") else "-"
            rows.append((r["id"], v["status"], n, "; ".join(r["diff"]) or "ok"))
        _table(("id", "status", "#pts", "diff"), rows)
    else:
        _emit({"exit": code, "mismatches": [{"id": r["id"], "diff": r["diff"]} for r in reports if r["diff"]],
               "statuses": {r["id"]: r["verdict"]["status"] for r in reports}})
    return code


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="shimquot", description=__doc__)
    ap.add_argument("--catalog", help="catalog directory or file (default: bundled, or $SHIMQUOT_CATALOG)")
    ap.add_argument("--table", action="store_true", help="human-readable tables instead of JSON")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def curve_cmd(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("curve", help="catalog key, e.g. 26.1.13 or 6.11.2-33")
        p.add_argument("--height", type=int, default=DEFAULT_HEIGHT)
        p.set_defaults(fn=fn)
        return p

    curve_cmd("analyze", cmd_analyze, "full pipeline with diff against the catalog")
    curve_cmd("local", cmd_local, "local solvability report")
    curve_cmd("points", cmd_points, "height-bounded point search").add_argument(
        "--certify", action="store_true", help="run the certification pipeline")
    curve_cmd("cm", cmd_cm, "CM analysis")
    g = sub.add_parser("group", help="Atkin-Lehner group and its subgroups")
    g.add_argument("D", type=int)
    g.add_argument("N", type=int)
    g.set_defaults(fn=cmd_group)
    v = sub.add_parser("verify-all", help="run every catalog record and report mismatches")
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--height", type=int, default=DEFAULT_HEIGHT)
    v.set_defaults(fn=cmd_verify_all)
    sub.add_parser("backend", help="print the active kernel backend").set_defaults(
        fn=lambda a: print(kernels.BACKEND) or 0)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.fn(args)
    except (KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
