"""``pyradesign`` command line.

Every subcommand prints a text report to stdout and exits nonzero when any
check in it failed. ``--report PATH`` also writes the report as JSON and
``--figures DIR`` renders the matching figures there.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import replace
from pathlib import Path

from . import acceptance, analysis, plotting
from .blockset import bits_of, mask_of, validate_symmetric_design
from .catalog import Catalog
from .decomposition import decompose, delta_search
from .errors import DomainError, PyradesignError, SearchBudgetExceeded
from .geometry import DEFAULT_VERTEX_BUDGET, GeometryParams, enumerate_cliques, pg_design
from .io import (
    certificate_to_dict,
    design_to_dict,
    designs_to_list,
    group_to_dict,
    load_certificate,
    load_design,
    read_json,
    save_design,
    witness_from_dict,
    witness_to_dict,
    write_json,
)
from .pyramidal import build_group, stabilizer_search, verify_certificate, verify_lemma1, verify_theorem
from .report import RunReport, file_digest


def _csv(text: str) -> list[int]:
    text = text.strip()
    return [int(x) for x in text.split(",")] if text else []


def _report(args, command: str) -> RunReport:
    rep = RunReport(command)
    for name in ("design", "cert", "witness"):
        path = getattr(args, name, None)
        if path:
            rep.inputs[name] = file_digest(path)
    return rep


def _finish(args, rep: RunReport) -> int:
    print(rep.to_text())
    if getattr(args, "report", None):
        rep.write_json(args.report)
    return rep.exit_code


def _figures(args) -> Path | None:
    d = getattr(args, "figures", None)
    return Path(d) if d else None


def cmd_construct(args) -> int:
    rep = _report(args, f"construct {args.kind}")
    t0 = time.perf_counter()
    if args.kind == "pg":
        design = pg_design(args.r)
    else:
        design = witness_from_dict(read_json(args.witness), args.witness).reassemble()
    rep.timing["construct"] = round((time.perf_counter() - t0) * 1000)
    val = validate_symmetric_design(design)
    rep.add("symmetric design", val.ok, val.parameters if val.ok else val.errors)
    if args.out:
        save_design(design, args.out)
        rep.data["out"] = args.out
    else:
        print(json.dumps(design_to_dict(design)))
    if (figs := _figures(args)) is not None:
        plotting.plot_incidence(design, figs / "incidence.png")
    return _finish(args, rep)


def cmd_verify(args) -> int:
    rep = _report(args, "verify")
    design = load_design(args.design)
    val = validate_symmetric_design(design)
    rep.add("symmetric design", val.ok, val.parameters if val.ok else "; ".join(val.errors))
    try:
        r = analysis.hadamard_rank(design)
        rep.add("parameters (2^r-1, 2^(r-1), 2^(r-2))", True, f"r={r}")
    except DomainError as exc:
        rep.add("parameters (2^r-1, 2^(r-1), 2^(r-2))", False, str(exc))
    return _finish(args, rep)


def cmd_analyze(args) -> int:
    design = load_design(args.design)
    val = validate_symmetric_design(design)
    out: dict = {"v": design.v, "valid": val.ok, "parameters": list(val.parameters)}
    if not val.ok:
        out["errors"] = list(val.errors)
    show_all = not (args.center_blocks or args.pg_criterion or args.lines)
    if val.ok and (args.center_blocks or show_all):
        out["center_blocks"] = analysis.center_blocks(design)
        out["center_points"] = analysis.center_points(design)
    if val.ok and (args.pg_criterion or show_all):
        try:
            out["pg_criterion"] = analysis.satisfies_pg_criterion(design)
        except DomainError as exc:
            out["pg_criterion"] = None
            out["pg_criterion_error"] = str(exc)
    if val.ok and (args.lines or show_all):
        out["lines"] = [[ln.p, ln.q, ln.t] for ln in analysis.design_lines(design)]
    print(json.dumps(out, indent=1))
    if args.report:
        write_json(out, args.report)
    if (figs := _figures(args)) is not None:
        plotting.plot_incidence(design, figs / "incidence.png")
    return 0 if val.ok else 1


def cmd_decompose(args) -> int:
    rep = _report(args, "decompose")
    design = load_design(args.design)
    w = decompose(design, args.block, mask_of(_csv(args.z)))
    rep.add("reassembles to the input", w.reassemble() == design)
    payload = witness_to_dict(w)
    if args.out:
        write_json(payload, args.out)
    else:
        print(json.dumps(payload))
    return _finish(args, rep)


def cmd_sum(args) -> int:
    args.kind = "sum"
    return cmd_construct(args)


PREDICATES = {
    "all": lambda d: True,
    "pg": analysis.satisfies_pg_criterion,
    "non-pg": lambda d: not analysis.satisfies_pg_criterion(d),
}


def cmd_delta_search(args) -> int:
    rep = _report(args, f"delta-search {args.predicate}")
    w = witness_from_dict(read_json(args.witness), args.witness)
    figs = _figures(args)
    pred = PREDICATES[args.predicate]
    t0 = time.perf_counter()
    if figs is None:
        found = delta_search(
            w.design_o, w.design_z, w.O, w.Z, pred,
            mode=args.mode, samples=args.samples, seed=args.seed, limit=args.limit,
        )
        examined = None
    else:
        # one pass over every candidate so the figure can show the split
        tally = []
        found = delta_search(
            w.design_o, w.design_z, w.O, w.Z, lambda d: tally.append(pred(d)) or tally[-1],
            mode=args.mode, samples=args.samples, seed=args.seed, limit=args.limit,
        )
        examined = len(tally)
    rep.timing["search"] = round((time.perf_counter() - t0) * 1000)
    rep.add("search finished", True, f"{len(found)} bijections matched")
    rep.data["matches"] = len(found)
    if args.out:
        witnesses = [witness_to_dict(replace(w, delta=d)) for d in found]
        write_json({"deltas": [[list(p) for p in d] for d in found], "witnesses": witnesses}, args.out)
    if figs is not None:
        plotting.plot_split(
            {args.predicate: len(found), "other": examined - len(found)},
            figs / "delta_split.png",
            f"delta search, {examined} bijections examined",
        )
    return _finish(args, rep)


def cmd_search_cliques(args) -> int:
    rep = _report(args, f"search cliques n={args.n} m={args.m} size={args.size}")
    t0 = time.perf_counter()
    cliques = enumerate_cliques(GeometryParams(args.n, args.m), args.size, budget=args.budget)
    rep.timing["enumerate"] = round((time.perf_counter() - t0) * 1000)
    rep.add("enumeration finished", True, f"{len(cliques)} cliques")
    write_json(designs_to_list(cliques), args.out)
    return _finish(args, rep)


def cmd_group_build(args) -> int:
    rep = _report(args, "group build")
    design = load_design(args.design)
    try:
        cert = build_group(design, args.block)
    except DomainError as exc:
        rep.add("construction", False, str(exc))
        return _finish(args, rep)
    rep.absorb(verify_certificate(design, cert), "certificate: ")
    if args.out:
        write_json(certificate_to_dict(cert), args.out)
    else:
        print(json.dumps(certificate_to_dict(cert)))
    if (figs := _figures(args)) is not None:
        plotting.plot_orbit_table(cert, figs / "orbit_table.png")
    return _finish(args, rep)


def cmd_group_verify(args) -> int:
    rep = _report(args, "group verify")
    design = load_design(args.design)
    cert = load_certificate(args.cert)
    rep.absorb(verify_certificate(design, cert), "certificate: ")
    rep.absorb(verify_lemma1(design, cert), "center block: ")
    if (figs := _figures(args)) is not None:
        plotting.plot_orbit_table(cert, figs / "orbit_table.png")
    return _finish(args, rep)


def cmd_theorem_verify(args) -> int:
    rep = _report(args, "theorem verify")
    design = load_design(args.design)
    cert = load_certificate(args.cert)
    rep.absorb(verify_theorem(design, cert))
    return _finish(args, rep)


def cmd_stabilizer(args) -> int:
    rep = _report(args, "stabilizer")
    design = load_design(args.design)
    fixed = mask_of(_csv(args.fixed))
    t0 = time.perf_counter()
    try:
        elems = stabilizer_search(design, fixed, time_budget=args.budget_seconds)
        rep.add("search complete", True, f"{len(elems)} automorphisms")
    except SearchBudgetExceeded as exc:
        elems = exc.partial
        rep.add("search complete", False, f"budget exhausted; {len(elems)} found so far (partial)")
    rep.timing["search"] = round((time.perf_counter() - t0) * 1000)
    payload = group_to_dict(design.v, elems)
    payload["fixed"] = list(bits_of(fixed))
    if args.out:
        write_json(payload, args.out)
    else:
        print(json.dumps(payload))
    return _finish(args, rep)


def cmd_accept(args) -> int:
    rep = acceptance.run_acceptance_suite(args.tier)
    if (figs := _figures(args)) is not None:
        limits = {"criterion 1": 1000, "criterion 3": 5000, "criterion 5": 60000, "criterion 6": 300000}
        plotting.plot_check_timings(rep, figs / f"accept_{args.tier}.png", limits)
    return _finish(args, rep)


def cmd_catalog_add(args) -> int:
    rep = _report(args, "catalog add")
    design = load_design(args.design)
    entry = Catalog(args.dir).add(design, args.tag or [], f"catalog add {Path(args.design).name}")
    rep.add("stored", True, entry.id)
    return _finish(args, rep)


def cmd_catalog_list(args) -> int:
    for e in Catalog(args.dir).find(args.tag):
        params = ",".join(str(x) for x in e.parameters)
        print(f"{e.id}\t({params})\t{','.join(e.tags)}\t{e.provenance}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--report", help="also write the report as JSON to this path")
    common.add_argument("--figures", help="render figures into this directory")
    common.add_argument("--budget-seconds", type=float, default=None, help="cap for search time")

    p = argparse.ArgumentParser(prog="pyradesign", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build a design")
    csub = c.add_subparsers(dest="kind", required=True)
    cp = csub.add_parser("pg", parents=[common], help="points and hyperplane complements of PG(r-1,2)")
    cp.add_argument("--r", type=int, required=True)
    cp.add_argument("--out")
    cp.set_defaults(func=cmd_construct)
    cs = csub.add_parser("sum", parents=[common], help="sum construction from a witness file")
    cs.add_argument("--witness", required=True)
    cs.add_argument("--out")
    cs.set_defaults(func=cmd_construct)

    s = sub.add_parser("sum", parents=[common], help="alias of 'construct sum'")
    s.add_argument("--witness", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_sum)

    v = sub.add_parser("verify", parents=[common], help="validate a design file")
    v.add_argument("design")
    v.set_defaults(func=cmd_verify)

    a = sub.add_parser("analyze", parents=[common], help="center blocks, PG criterion, lines (JSON)")
    a.add_argument("design")
    a.add_argument("--center-blocks", action="store_true")
    a.add_argument("--pg-criterion", action="store_true")
    a.add_argument("--lines", action="store_true")
    a.set_defaults(func=cmd_analyze)

    d = sub.add_parser("decompose", parents=[common], help="split along a center block")
    d.add_argument("design")
    d.add_argument("--block", type=int, required=True)
    d.add_argument("--z", required=True, help="comma-separated points of Z")
    d.add_argument("--out")
    d.set_defaults(func=cmd_decompose)

    ds = sub.add_parser("delta-search", parents=[common], help="search block bijections of a witness")
    ds.add_argument("--witness", required=True, help="witness JSON supplying both components, O and Z")
    ds.add_argument("--predicate", choices=sorted(PREDICATES), default="non-pg")
    ds.add_argument("--mode", choices=("auto", "exhaustive", "sample"), default="auto")
    ds.add_argument("--samples", type=int, default=1000)
    ds.add_argument("--seed", type=int, default=0)
    ds.add_argument("--limit", type=int)
    ds.add_argument("--out")
    ds.set_defaults(func=cmd_delta_search)

    se = sub.add_parser("search", help="searches in the subset geometry")
    sesub = se.add_subparsers(dest="what", required=True)
    sc = sesub.add_parser("cliques", parents=[common], help="cliques of the collinearity graph")
    sc.add_argument("--n", type=int, required=True)
    sc.add_argument("--m", type=int, required=True)
    sc.add_argument("--size", type=int, required=True)
    sc.add_argument("--budget", type=int, default=DEFAULT_VERTEX_BUDGET, help="vertex ceiling")
    sc.add_argument("--out", required=True)
    sc.set_defaults(func=cmd_search_cliques)

    g = sub.add_parser("group", help="alpha groups and certificates")
    gsub = g.add_subparsers(dest="action", required=True)
    gb = gsub.add_parser("build", parents=[common])
    gb.add_argument("design")
    gb.add_argument("--block", type=int, required=True)
    gb.add_argument("--out")
    gb.set_defaults(func=cmd_group_build)
    gv = gsub.add_parser("verify", parents=[common])
    gv.add_argument("design")
    gv.add_argument("cert")
    gv.set_defaults(func=cmd_group_verify)

    st = sub.add_parser("stabilizer", parents=[common], help="automorphisms fixing points")
    st.add_argument("design")
    st.add_argument("--fixed", required=True, help="comma-separated fixed points")
    st.add_argument("--out")
    st.set_defaults(func=cmd_stabilizer)

    th = sub.add_parser("theorem", help="classification checks")
    thsub = th.add_subparsers(dest="action", required=True)
    tv = thsub.add_parser("verify", parents=[common])
    tv.add_argument("design")
    tv.add_argument("cert")
    tv.set_defaults(func=cmd_theorem_verify)

    ac = sub.add_parser("accept", parents=[common], help="run an acceptance tier")
    ac.add_argument("tier", choices=acceptance.TIERS)
    ac.set_defaults(func=cmd_accept)

    cat = sub.add_parser("catalog", help="on-disk design catalog")
    catsub = cat.add_subparsers(dest="action", required=True)
    ca = catsub.add_parser("add", parents=[common])
    ca.add_argument("design")
    ca.add_argument("--dir", required=True)
    ca.add_argument("--tag", action="append")
    ca.set_defaults(func=cmd_catalog_add)
    cl = catsub.add_parser("list")
    cl.add_argument("--dir", required=True)
    cl.add_argument("--tag")
    cl.set_defaults(func=cmd_catalog_list)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PyradesignError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
