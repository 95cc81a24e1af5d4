"""Command-line frontend: constructions, validations, searches and reports.

Exit codes: 0 when every verdict passes, 1 when a verdict fails (an invalid
multiset or a violated bound), 2 for usage and resource errors (bad input,
exceeded budgets or caps, no disjoint hyperplane).
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from dataclasses import dataclass, field as dc_field

from . import __version__
from .codes import (
    BudgetExceeded,
    PointMultiset,
    affine_restriction,
    bound_report,
    char_vector,
    disjoint_hyperplane,
    dual_membership,
    hyperplane_spectrum,
    incidence_code,
    line_residue_check,
    min_weight_exhaustive,
    multiset_of,
    read_multiset_csv,
    write_multiset_csv,
)
from .galois import LinearizedPoly, Params
from .geometry import (
    CapExceeded,
    export_blocks_csv,
    export_points_csv,
    make_geometry,
)
from .linearsets import (
    graph_subspace,
    hyperplane_subspace,
    is_scattered,
    linear_set,
    max_linearset_size,
    symdiff_multiset,
)
from .oracle import field_model, oracle_report


class UsageError(RuntimeError):
    pass


@dataclass
class Report:
    command: str
    inputs: dict
    results: dict = dc_field(default_factory=dict)
    timing: dict = dc_field(default_factory=dict)
    version: str = __version__
    seed: int | None = None

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "timing": self.timing,
            "version": self.version,
            "seed": self.seed,
        }


def parse_linearized(field, expr: str) -> LinearizedPoly:
    """Parse sums of monomials c*x^e with e a power of p.

    Coefficients are element indices in the field's basis order (the base-p
    digit string of the index gives the coefficient tuple).
    """
    coeffs = [0] * field.degree
    for term in expr.replace(" ", "").split("+"):
        if not term:
            raise UsageError(f"empty term in {expr!r}")
        m = re.fullmatch(r"(?:(\d+)\*?)?x(?:\^(\d+))?", term)
        if not m:
            raise UsageError(f"cannot parse term {term!r}")
        c = int(m.group(1)) if m.group(1) else 1
        e = int(m.group(2)) if m.group(2) else 1
        i, t = 0, e
        while t > 1 and t % field.p == 0:
            t //= field.p
            i += 1
        if t != 1 or i >= field.degree:
            raise UsageError(
                f"exponent {e} is not a power of {field.p} below {field.p}^{field.degree}")
        if not 0 <= c < field.order:
            raise UsageError(f"coefficient {c} is not a field element index")
        coeffs[i] = field.add(coeffs[i], c)
    return LinearizedPoly(field, tuple(coeffs))


def _geometry(args, kind: str | None = None):
    return make_geometry(kind or args.kind, args.p, args.h, args.m)


def _echo_inputs(args, geom) -> dict:
    echo = {"p": args.p, "h": args.h, "m": args.m, "kind": geom.kind,
            "field": geom.field.to_json(), "workers": getattr(args, "workers", 1)}
    for key in ("f", "t", "k", "budget", "mode", "rank", "samples", "multiset"):
        if getattr(args, key, None) is not None:
            echo[key] = getattr(args, key)
    return echo


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_construct(args) -> tuple[Report, int]:
    geom = _geometry(args, "pg")
    f = parse_linearized(geom.field, args.f)
    report = Report("construct", _echo_inputs(args, geom), seed=args.seed)
    scattered, values = is_scattered(f)
    report.results["is_scattered"] = {"op": "is_scattered", "scattered": scattered,
                                      "value_count": values}
    if not scattered:
        print("warning: the map is not scattered; "
              "continuing with empirical validation", file=sys.stderr)
    LU = linear_set(geom, graph_subspace(geom, f))
    LW = linear_set(geom, hyperplane_subspace(geom))
    M = symdiff_multiset(LU, LW, args.t)
    check = line_residue_check(M)
    H = disjoint_hyperplane(M)
    report.results["construction"] = {
        "op": "symdiff_multiset", "lu_size": len(LU), "lw_size": len(LW),
        "intersection": len(set(LU.point_indices) & set(LW.point_indices)),
        "size": M.size, "support": M.support_size,
    }
    report.results["line_check"] = {
        "op": "line_residue_check", "valid": check.valid,
        "offending_block": check.offending_block,
    }
    report.results["disjoint_hyperplane"] = {
        "op": "disjoint_hyperplane", "found": H is not None,
        "basis": list(map(list, H.basis)) if H else None,
    }
    br = bound_report(M)
    report.results["bounds"] = {"op": "bound_report", **br.to_json()}
    bound = next(r for r in br.rows if r.name == "unit_coordinate_sigma")
    report.results["attains_bound"] = {
        "op": "bound_report", "bound": bound.value, "size": M.size,
        "attained": M.size == bound.value and check.valid,
    }
    if H is not None:
        Ma = affine_restriction(M, H)
        report.results["affine_restriction"] = {
            "op": "affine_restriction", "size": Ma.size, "support": Ma.support_size,
            "valid": line_residue_check(Ma).valid,
        }
        if args.csv:
            write_multiset_csv(Ma if args.affine else M, args.csv)
            report.results["export"] = {"path": args.csv,
                                        "kind": "ag" if args.affine else "pg"}
    elif args.csv:
        write_multiset_csv(M, args.csv)
        report.results["export"] = {"path": args.csv, "kind": "pg"}
    ok = check.valid and not br.violations
    return report, 0 if ok else 1


def cmd_verify(args) -> tuple[Report, int]:
    geom = _geometry(args)
    M = read_multiset_csv(geom, args.multiset)
    report = Report("verify", _echo_inputs(args, geom), seed=args.seed)
    check = line_residue_check(M)
    s = char_vector(M)
    member = dual_membership(s, incidence_code(geom, 1))
    report.results["line_check"] = {
        "op": "line_residue_check", "valid": check.valid,
        "offending_block": check.offending_block, "residue": check.residue,
    }
    report.results["dual_membership"] = {"op": "dual_membership", "member": member}
    br = bound_report(M, k=args.k or 1)
    report.results["bounds"] = {"op": "bound_report", **br.to_json()}
    if geom.kind == "pg":
        spec = hyperplane_spectrum(M, "weighted")
        report.results["spectrum"] = _spectrum_json(spec)
    ok = check.valid and member and not br.violations
    return report, 0 if ok else 1


def cmd_minweight(args) -> tuple[Report, int]:
    geom = _geometry(args, "pg" if args.kind is None else args.kind)
    report = Report("minweight", _echo_inputs(args, geom), seed=args.seed)
    code = incidence_code(geom, args.k or 1)
    report.results["code"] = {"op": "p_rank", "rank": code.rank,
                              "dual_dim": code.dual_dim}
    try:
        res = min_weight_exhaustive(code, args.metric, args.budget)
    except BudgetExceeded as exc:
        report.results["refusal"] = {"op": "min_weight_exhaustive", "error": str(exc)}
        p, h, m = args.p, args.h, args.m
        from .codes import bound_value
        table = {}
        for name in ("delsarte_dual_weight", "bagchi_inamdar_dual_weight",
                     "projective_weight"):
            try:
                table[name] = bound_value(name, p, h, m)
            except ValueError:
                pass
        report.results["bound_table"] = {"op": "bound_value", **table}
        return report, 2
    report.results["minimum"] = {
        "op": "min_weight_exhaustive", "metric": res.metric, "minimum": res.minimum,
        "min_weight": res.min_weight, "min_sigma": res.min_sigma,
        "enumerated": res.enumerated, "witness": res.witness.digits(),
    }
    return report, 0


def cmd_oracle(args) -> tuple[Report, int]:
    geom = _geometry(args)
    M = read_multiset_csv(geom, args.multiset)
    report = Report("oracle", _echo_inputs(args, geom), seed=args.seed)
    if geom.kind == "pg":
        H = disjoint_hyperplane(M)
        if H is None:
            report.results["abort"] = {"op": "disjoint_hyperplane",
                                       "error": "no hyperplane disjoint from the multiset"}
            return report, 2
        M = affine_restriction(M, H)
        report.results["affine_restriction"] = {
            "op": "affine_restriction", "size": M.size}
    model = field_model(M.geometry)
    rep = oracle_report(M, model)
    report.results["oracle"] = {"op": "oracle_report", **rep.to_json()}
    return report, 0 if rep.all_passed else 1


def cmd_geom_enum(args) -> tuple[Report, int]:
    geom = _geometry(args)
    report = Report("geom enum", _echo_inputs(args, geom), seed=args.seed)
    report.results["points"] = {"op": "enumerate_points", "count": geom.v}
    if args.dim:
        bs = geom.blocks(args.dim)
        report.results["blocks"] = {"op": "enumerate_subspaces", "dim": args.dim,
                                    "count": len(bs),
                                    "points_per_block": int(bs.point_matrix.shape[1])}
    if args.csv:
        export_points_csv(geom, args.csv)
        report.results["points"]["csv"] = args.csv
    if args.blocks_csv:
        export_blocks_csv(geom, args.dim or 1, args.blocks_csv)
        report.results["blocks"]["csv"] = args.blocks_csv
    return report, 0


def cmd_rank(args) -> tuple[Report, int]:
    geom = _geometry(args, "pg" if args.kind is None else args.kind)
    report = Report("rank", _echo_inputs(args, geom), seed=args.seed)
    code = incidence_code(geom, args.k or 1)
    report.results["rank"] = {"op": "p_rank", "rank": code.rank,
                              "dual_dim": code.dual_dim,
                              "blocks": int(code.matrix.shape[0]),
                              "points": int(code.matrix.shape[1])}
    return report, 0


def cmd_spectrum(args) -> tuple[Report, int]:
    geom = _geometry(args, "pg" if args.kind is None else args.kind)
    M = read_multiset_csv(geom, args.multiset)
    report = Report("spectrum", _echo_inputs(args, geom), seed=args.seed)
    spec = hyperplane_spectrum(M, args.mode)
    report.results["spectrum"] = _spectrum_json(spec)
    ok = spec.count_identity and spec.incidence_identity
    return report, 0 if ok else 1


def cmd_search_maxlinearset(args) -> tuple[Report, int]:
    geom = _geometry(args, "pg")
    report = Report("search-maxlinearset", _echo_inputs(args, geom), seed=args.seed)
    res = max_linearset_size(geom, args.rank, args.mode,
                             samples=args.samples, seed=args.seed or 0)
    report.results["search"] = {
        "op": "max_linearset_size", "mode": res.mode, "rank": res.rank,
        "tried": res.tried, "max_size": res.max_size,
        "bound": res.bound, "within_bound": res.within_bound,
        "trivial_bound": res.trivial_bound,
        "witness_basis": list(map(list, res.witness.basis)),
    }
    ok = res.within_bound is not False
    return report, 0 if ok else 1


def _spectrum_json(spec) -> dict:
    return {"op": "hyperplane_spectrum", "mode": spec.mode,
            "pairs": [list(p) for p in spec.pairs],
            "count_identity": spec.count_identity,
            "incidence_identity": spec.incidence_identity,
            "n_min": spec.n_min,
            "meets_every_hyperplane": spec.meets_every_hyperplane,
            "times_q_bound": spec.times_q_bound}


# ---------------------------------------------------------------------------
# wiring
# ---------------------------------------------------------------------------

def _add_common(sp, kind_default=None):
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--h", type=int, default=1)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--kind", choices=["pg", "ag"], default=kind_default)
    sp.add_argument("--budget", type=int, default=1 << 24)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--out", help="write the JSON report here")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="modpgeom")
    ap.add_argument("--version", action="version", version=__version__)
    subs = ap.add_subparsers(dest="command", required=True)

    sp = subs.add_parser("construct", help="build and validate the extremal multiset")
    _add_common(sp, "pg")
    sp.add_argument("--f", required=True, help="linearized polynomial, e.g. x^3")
    sp.add_argument("--t", type=int, default=1)
    sp.add_argument("--csv", help="export the multiset as CSV")
    sp.add_argument("--affine", action="store_true",
                    help="export the affine restriction instead of the projective multiset")
    sp.set_defaults(func=cmd_construct)

    sp = subs.add_parser("verify", help="validate a multiset file")
    _add_common(sp, "pg")
    sp.add_argument("--multiset", required=True)
    sp.add_argument("--k", type=int, default=None)
    sp.set_defaults(func=cmd_verify)

    sp = subs.add_parser("minweight", help="exhaustive dual minimum weight")
    _add_common(sp)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--metric", choices=["w", "sigma"], default="w")
    sp.set_defaults(func=cmd_minweight)

    sp = subs.add_parser("oracle", help="polynomial checks on an affine multiset")
    _add_common(sp, "ag")
    sp.add_argument("--multiset", required=True)
    sp.set_defaults(func=cmd_oracle)

    geom = subs.add_parser("geom", help="geometry services")
    gsubs = geom.add_subparsers(dest="geom_command", required=True)
    sp = gsubs.add_parser("enum", help="enumerate points and blocks")
    _add_common(sp, "pg")
    sp.add_argument("--dim", type=int, default=1)
    sp.add_argument("--csv", help="export points as CSV")
    sp.add_argument("--blocks-csv", dest="blocks_csv", help="export blocks as CSV")
    sp.set_defaults(func=cmd_geom_enum)

    sp = subs.add_parser("rank", help="p-rank of an incidence code")
    _add_common(sp)
    sp.add_argument("--k", type=int, default=1)
    sp.set_defaults(func=cmd_rank)

    sp = subs.add_parser("spectrum", help="hyperplane intersection spectrum")
    _add_common(sp)
    sp.add_argument("--multiset", required=True)
    sp.add_argument("--mode", choices=["support", "weighted"], default="support")
    sp.set_defaults(func=cmd_spectrum)

    sp = subs.add_parser("search-maxlinearset", help="max |L_U| over rank-r subspaces")
    _add_common(sp, "pg")
    sp.add_argument("--rank", type=int, required=True)
    sp.add_argument("--mode", choices=["exhaustive", "sampled"], default="exhaustive")
    sp.add_argument("--samples", type=int, default=1000)
    sp.set_defaults(func=cmd_search_maxlinearset)

    return ap


def _emit(report: Report, args) -> None:
    data = report.to_json()
    print(f"== {report.command} ==")
    for section, values in report.results.items():
        if isinstance(values, dict):
            shown = {k: v for k, v in values.items()
                     if k not in ("witness_basis", "basis") and not isinstance(v, (list, dict))}
            line = ", ".join(f"{k}={v}" for k, v in shown.items())
            print(f"  {section}: {line}")
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            json.dump(data, fh, indent=2, sort_keys=True)
            fh.write("\n")


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    t0 = time.perf_counter()
    try:
        report, code = args.func(args)
    except (UsageError, CapExceeded, BudgetExceeded, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report.timing["seconds"] = round(time.perf_counter() - t0, 6)
    _emit(report, args)
    return code


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
