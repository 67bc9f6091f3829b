"""Command-line entry point and report emission.

Commands: classify, sequences, witness, orbit, norms, gallery-list,
verify-gallery.  Reports are flat files: TSV for sequences and traces
(plot-ready; rationals as "p/q", floats to 15 significant digits) and JSON
documents for verdicts and witness reports.  Exit codes: 0 all checks passed,
1 a check failed, 2 usage or spec error.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import criteria, gallery, maps, witness
from .errors import (CapExceeded, HypothesisUnavailable,
                     NotFoundWithinHorizon, OdolabError, StrategyInfeasible)
from .functions import orbit_trace
from .scalars import parse_scalar
from .space import (ODOMETER, SHIFT, TRANSLATION, DepthSet, SimpleFunction,
                    SystemSpec, atomless_monitor)

ODOMETER_CRITERIA = ["hc-limsup-drop", "hc-limsup-eta", "hc-drop-hoeffding",
                     "mixing-eta", "mixing-kappa", "fhc-odometer",
                     "fhc-bounded-tail", "fhc-from-eta-limit",
                     "fhc-from-mixing", "ufhc-zero-heavy", "power-bounded"]
TRANSLATION_CRITERIA = ["hc-translation-gamma", "mixing-translation-gamma",
                        "hc-translation-hoeffding", "hc-translation-coprime"]
SHIFT_CRITERIA = ["shift-salas"]


def load_spec(identifier: str) -> SystemSpec:
    """Gallery id ("fhc-binary", "binary-alpha(2)") or @path to a config file."""
    if identifier.startswith("@"):
        cfg = json.loads(Path(identifier[1:]).read_text())
        return SystemSpec.from_config(cfg)
    return gallery.get_spec(identifier)


def write_tsv(path: Path, rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w") as fh:
        for row in rows:
            fh.write("\t".join(str(c) for c in row) + "\n")


def write_json(path: Path, doc) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=2, default=str) + "\n")


def _slug(identifier: str) -> str:
    return "".join(c if c.isalnum() or c in "-." else "_" for c in identifier)


def _check_backend_flag(spec: SystemSpec, flag: str) -> None:
    if flag and flag != spec.backend:
        raise SystemExit(2)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_classify(args) -> int:
    spec = load_spec(args.spec)
    entry = gallery.entry_for(spec)
    closed = entry.bound_verdict(spec) if entry and entry.bound_verdict else None
    bound = maps.boundedness(spec, min(args.horizon, 24), closed_form=closed)
    doc = {"spec": spec.to_config(), "boundedness": {
        "verdict": bound.verdict, "supremum": str(bound.supremum)}}
    failed = bound.verdict.startswith("unbounded")
    verdicts = []
    if not failed:
        names = {ODOMETER: ODOMETER_CRITERIA, TRANSLATION: TRANSLATION_CRITERIA,
                 SHIFT: SHIFT_CRITERIA}[spec.kind]
        params = {}
        if args.kappa:
            params["kappa"] = parse_scalar(args.kappa)
        for name in names:
            try:
                v = criteria.evaluate(spec, name, horizon=args.horizon,
                                      params=dict(params))
            except (CapExceeded, OdolabError) as exc:
                v = criteria.Verdict(criterion=name, status="inconclusive",
                                     mode="numeric-horizon",
                                     evidence={"reason": str(exc)})
            verdicts.append(v)
            expected = (entry.expectations.get(name) if entry else None)
            if (expected and expected.startswith("satisfied")
                    and v.status == "violated"):
                doc["contradiction"] = {"criterion": name,
                                        "expected": expected,
                                        "verdict": v.status}
                failed = True
        doc["verdicts"] = [v.to_document() for v in verdicts]
    out = Path(args.out) / f"classify-{_slug(args.spec)}.json"
    write_json(out, doc)
    for v in verdicts:
        print(f"{v.criterion:32s} {v.status} [{v.mode}]")
    print(f"boundedness: {bound.verdict}")
    print(f"report: {out}")
    return 1 if failed else 0


def cmd_sequences(args) -> int:
    spec = load_spec(args.spec)
    out_dir = Path(args.out)
    kappa_param = parse_scalar(args.kappa) if args.kappa else Fraction(1, 5)
    if spec.kind == ODOMETER:
        idx = range(1, args.horizon + 1)
        table = criteria.odometer_table(spec, idx, kappa_param=kappa_param)
        path = out_dir / f"sequences-{_slug(args.spec)}.tsv"
        write_tsv(path, table.to_tsv_rows())
        print(f"report: {path}")
        return 0
    if spec.kind == TRANSLATION:
        table = criteria.CriteriaTable(spec=spec)
        for i in range(1, args.horizon + 1):
            try:
                table.put("eta", i, spec.eta(i), "closed-form")
                table.put("delta", i, spec.delta(i), "closed-form")
                table.put("beta", i, criteria.beta_sup(spec, i), "cycle-dp")
            except CapExceeded:
                break
        shift_table = criteria.CriteriaTable(spec=spec)
        idx_h = min(args.horizon, args.index_horizon)
        for n in range(1, args.horizon + 1):
            try:
                shift_table.put("gamma_n", n,
                                criteria.gamma_translation(spec, n, idx_h),
                                "cycle-dp", note="horizon-limited")
                shift_table.put("gamma_tilde", n,
                                criteria.gamma_tilde(spec, n, idx_h),
                                "prefix-scan", note="lower-bound")
            except CapExceeded:
                break
        p1 = out_dir / f"sequences-{_slug(args.spec)}.tsv"
        p2 = out_dir / f"sequences-{_slug(args.spec)}-shifts.tsv"
        write_tsv(p1, table.to_tsv_rows())
        write_tsv(p2, shift_table.to_tsv_rows())
        print(f"reports: {p1} {p2}")
        return 0
    rows = [("n",) + tuple(f"prod({i},{i})" for i in range(-2, 3))]
    for n in range(1, args.horizon + 1):
        row = [str(n)]
        for i in range(-2, 3):
            if spec.index_set == "Z+" and i < 0:
                row.append("")
                continue
            row.append(str(float(criteria.salas_products(spec, i, i, n)[-1])))
        rows.append(tuple(row))
    path = Path(args.out) / f"sequences-{_slug(args.spec)}.tsv"
    write_tsv(path, rows)
    print(f"report: {path}")
    return 0


def cmd_witness(args) -> int:
    spec = load_spec(args.spec)
    eps = float(args.epsilon)
    kappa_param = parse_scalar(args.kappa) if args.kappa else Fraction(1, 5)
    try:
        if args.name == "transitivity":
            rep = witness.transitivity_witness(spec, eps, trials=args.trials,
                                               seed=args.seed,
                                               cell_cap=args.cap)
        elif args.name == "mixing":
            rep = witness.mixing_witness(spec, eps, k=args.iterate
                                         or 10 ** 4, cell_cap=args.cap)
        elif args.name == "fhc":
            rep = witness.fhc_witness(spec, eps, kappa_param,
                                      f_symbols=(0, 0, 0), seed=args.seed)
        elif args.name == "ufhc-count":
            rep = witness.ufhc_count(spec, eps, kappa_param)
        elif args.name == "src":
            rep = witness.src_search(spec, eps, cell_cap=args.cap)
        elif args.name == "rigidity":
            rep = witness.rigidity_probe(spec)
        elif args.name.startswith("translation-"):
            sub = args.name.removeprefix("translation-")
            params = {"epsilon": eps}
            if sub == "hoeffding":
                sites = [i for i in range(1, 13)
                         if spec.m(i) <= (1 << 12)]
                params.update(sites=sites, n=args.iterate or spec.m(1) // 2 or 1)
            elif sub == "ufhcsum":
                params = {"block": args.iterate or 8, "epsilon": eps}
            rep = witness.translation_witnesses(spec, sub, params)
        elif args.name == "shift-fhc":
            rep = witness.shift_fhc_witness(spec, kappa_param=0.15)
        else:
            print(f"unknown witness {args.name!r}", file=sys.stderr)
            return 2
    except (HypothesisUnavailable, StrategyInfeasible,
            NotFoundWithinHorizon) as exc:
        print(f"witness unavailable: {exc}")
        return 1
    out = Path(args.out) / f"witness-{args.name}-{_slug(args.spec)}.json"
    write_json(out, rep.to_document())
    for c in rep.checks:
        print(f"  [{'ok' if c.ok else 'FAIL'}] {c.name} ({c.method})")
    print(f"witness {args.name}: {'pass' if rep.passed else 'FAIL'}")
    print(f"report: {out}")
    return 0 if rep.passed else 1


def cmd_orbit(args) -> int:
    spec = load_spec(args.spec)
    f_sym = [int(x) for x in args.f.split(",")]
    g_sym = [int(x) for x in args.g.split(",")]
    depth = max(args.depth, len(f_sym), len(g_sym))
    f = SimpleFunction.indicator(_padded_cylinder(spec, f_sym, depth))
    g = SimpleFunction.indicator(_padded_cylinder(spec, g_sym, depth))
    trace = orbit_trace(spec, f, g, epsilon=float(args.epsilon),
                        p=parse_scalar(args.p), horizon=args.horizon)
    out = Path(args.out) / f"orbit-{_slug(args.spec)}.tsv"
    write_tsv(out, trace.to_tsv_rows())
    print(f"visits: {len(trace.visit_set)} / {args.horizon}; "
          f"period of f: {trace.period}")
    print(f"report: {out}")
    return 0


def _padded_cylinder(spec: SystemSpec, symbols, depth) -> DepthSet:
    factors = [frozenset({s}) for s in symbols]
    factors += [frozenset(range(spec.m(i)))
                for i in range(len(symbols) + 1, depth + 1)]
    return DepthSet.product_form(spec, factors)


def cmd_norms(args) -> int:
    spec = load_spec(args.spec)
    entry = gallery.entry_for(spec)
    closed = entry.bound_verdict(spec) if entry and entry.bound_verdict else None
    bound = maps.boundedness(spec, args.horizon, closed_form=closed)
    out = Path(args.out) / f"norms-{_slug(args.spec)}.tsv"
    write_tsv(out, bound.to_tsv_rows())
    print(f"boundedness: {bound.verdict}; supremum "
          f"{float(bound.supremum):.6g}")
    if spec.kind == TRANSLATION:
        kak = maps.kakutani_check(spec, min(args.horizon, 12))
        print(f"measure-equivalence check: {kak['verdict']}")
    print(f"report: {out}")
    return 0 if not bound.verdict.startswith("unbounded") else 1


def cmd_gallery_list(args) -> int:
    for gid, title in gallery.list_gallery():
        print(f"{gid:24s} {title}")
    return 0


def verify_gallery(seed: int = 0) -> dict:
    """Run the registered expectation suite over every gallery entry."""
    results = {}
    ok = True
    for gid, entry in gallery.GALLERY.items():
        spec = entry.build()     # pinned defaults
        item = {"round_trip": False, "checks": []}
        clone = SystemSpec.from_config(spec.to_config())
        item["round_trip"] = clone.to_config() == spec.to_config()
        ok &= item["round_trip"]
        if spec.kind != SHIFT:
            monitor = atomless_monitor(spec, entry.atomless_depth)
            nonatomic = float(monitor[-1]) < 0.01
            item["checks"].append(("atomless-monitor", nonatomic))
            ok &= nonatomic
            for i in (1, 2, 3):
                spec.validate_coordinate(i)
        for criterion, expected in entry.expectations.items():
            try:
                v = criteria.evaluate(spec, criterion, horizon=24)
            except (CapExceeded, OdolabError) as exc:
                item["checks"].append((criterion, f"inconclusive: {exc}"))
                continue
            contradiction = (expected.startswith("satisfied")
                             and v.status == "violated") or (
                                 expected == "violated"
                                 and v.status.startswith("satisfied"))
            item["checks"].append((criterion, v.status, expected,
                                   not contradiction))
            ok &= not contradiction
        results[gid] = item
    return {"ok": ok, "seed": seed, "entries": results}


def cmd_verify_gallery(args) -> int:
    doc = verify_gallery(seed=args.seed)
    out = Path(args.out) / "verify-gallery.json"
    write_json(out, doc)
    for gid, item in doc["entries"].items():
        status = "ok" if item["round_trip"] and all(
            (c[-1] if isinstance(c[-1], bool) else True)
            for c in item["checks"]) else "FAIL"
        print(f"{gid:24s} {status}")
    print(f"report: {out}")
    return 0 if doc["ok"] else 1


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="odolab",
        description="exact experiments with composition-operator dynamics "
                    "on product probability spaces")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, spec=True):
        if spec:
            p.add_argument("spec", help="gallery id or @config.json")
        p.add_argument("--horizon", type=int, default=50)
        p.add_argument("--depth", type=int, default=4)
        p.add_argument("--epsilon", default="0.1")
        p.add_argument("--kappa", default=None)
        p.add_argument("--seed", type=int, default=witness.DEFAULT_SEED)
        p.add_argument("--trials", type=int, default=witness.DEFAULT_TRIALS)
        p.add_argument("--cap", type=int, default=witness.EXHAUSTIVE_CELL_CAP)
        p.add_argument("--backend", choices=["rational", "float"], default=None)
        p.add_argument("--out", default="reports")

    p = sub.add_parser("classify", help="boundedness plus every applicable verdict")
    common(p)
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("sequences", help="criterion tables as TSV")
    common(p)
    p.add_argument("--index-horizon", type=int, default=8)
    p.set_defaults(fn=cmd_sequences)

    p = sub.add_parser("witness", help="run a named witness construction")
    common(p)
    p.add_argument("--name", required=True)
    p.add_argument("--iterate", type=int, default=None)
    p.set_defaults(fn=cmd_witness)

    p = sub.add_parser("orbit", help="orbit trace of a cylinder indicator")
    common(p)
    p.add_argument("--f", default="0")
    p.add_argument("--g", default="1")
    p.add_argument("--p", default="1")
    p.set_defaults(fn=cmd_orbit)

    p = sub.add_parser("norms", help="boundedness / equivalence diagnostics")
    common(p)
    p.set_defaults(fn=cmd_norms)

    p = sub.add_parser("gallery-list", help="list built-in systems")
    p.set_defaults(fn=cmd_gallery_list)

    p = sub.add_parser("verify-gallery", help="registered expectation suite")
    common(p, spec=False)
    p.set_defaults(fn=cmd_verify_gallery)
    return top


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec_arg = getattr(args, "spec", None)
    if spec_arg is not None:
        try:
            spec = load_spec(spec_arg)
        except (KeyError, FileNotFoundError, json.JSONDecodeError) as exc:
            print(f"bad spec: {exc}", file=sys.stderr)
            return 2
        if args.backend and args.backend != spec.backend:
            print(f"spec runs on the {spec.backend} backend, not "
                  f"{args.backend}", file=sys.stderr)
            return 2
    try:
        return args.fn(args)
    except OdolabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
