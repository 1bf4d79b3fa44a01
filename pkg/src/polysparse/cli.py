"""``polysparse`` command line.

Exit codes: 0 success, 1 formula/oracle mismatch, 2 bad arguments or
unsupported request, 3 invalid mesh, 4 write failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from . import __version__
from .assembly_oracle import coupling_pattern, export_pattern, oracle_counts, stability_check, torus_for
from .builtin_meshes import BUILTIN_IDS, builtin
from .dof_model import METHOD_ORDER, Method
from .fixtures import has_fixture, reference_fixture
from .formula_engine import FormulaError, Metric, metric_poly, ncdof_poly, nnze_poly
from .periodic_complex import MeshError, PeriodicCellComplex, parse_mesh, validate
from .report import (
    FORMATS,
    build_table,
    compare_fixture,
    fixture_violations,
    fraction_str,
    render_errata,
    render_polynomials,
    render_topology,
)
from .topology_stats import ClassificationError, TopologyStats, classify, pair_symmetry_check

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_MESH, EXIT_WRITE = 0, 1, 2, 3, 4
K_LIMIT = 50


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _err(msg: str):
    print(f"polysparse: {msg}", file=sys.stderr)


def load_mesh(source: str) -> PeriodicCellComplex:
    if source in BUILTIN_IDS:
        return builtin(source)
    if not os.path.isfile(source):
        raise CliError(EXIT_USAGE, f"{source!r} is neither a builtin mesh ({', '.join(BUILTIN_IDS)}) nor a file")
    try:
        with open(source, encoding="utf-8") as fh:
            complex = parse_mesh(fh.read())
    except (OSError, UnicodeDecodeError) as exc:
        raise CliError(EXIT_USAGE, f"cannot read {source}: {exc}") from exc
    except MeshError as exc:
        raise CliError(EXIT_MESH, f"invalid mesh {source}: {exc}") from exc
    report = validate(complex)
    if not report.ok:
        detail = "; ".join(f"{c.name}: {c.detail}" for c in report.failures())
        raise CliError(EXIT_MESH, f"invalid mesh {source}: {detail}")
    return complex


def derived_stats(complex: PeriodicCellComplex) -> TopologyStats:
    try:
        return classify(complex)
    except ClassificationError as exc:
        raise CliError(EXIT_MESH, f"classification unstable: {exc}") from exc


def load_stats(args, complex: PeriodicCellComplex) -> TopologyStats:
    if args.fixture == "derived":
        return derived_stats(complex)
    if not has_fixture(complex.name) or args.mesh not in BUILTIN_IDS:
        raise CliError(EXIT_USAGE, f"no tabulated fixture for mesh {args.mesh!r}")
    return reference_fixture(complex.name, args.fixture)


def _parse_methods(text: str) -> list[Method]:
    out = []
    for part in text.split(","):
        part = part.strip().upper()
        try:
            out.append(Method(part))
        except ValueError:
            raise CliError(EXIT_USAGE, f"unknown method {part!r}") from None
    return out


def _methods(args) -> list[Method]:
    text = getattr(args, "method", None) or getattr(args, "methods", None)
    return _parse_methods(text) if text else list(METHOD_ORDER)


def _metrics(args) -> list[Metric]:
    if args.metric:
        return [Metric(args.metric)]
    return [Metric.NCDOF, Metric.NNZE]


def _check_k_range(args):
    if not (1 <= args.k_min <= args.k_max <= K_LIMIT):
        raise CliError(EXIT_USAGE, f"k range must satisfy 1 <= k-min <= k-max <= {K_LIMIT}")


def emit(args, text: str):
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise CliError(EXIT_WRITE, f"cannot write {args.out}: {exc}") from exc
    else:
        sys.stdout.write(text)


def _notice_if_untabulated(args, complex, stats, methods, metrics):
    """Tell the user when derived numbers differ from what the tables reproduce."""
    if args.fixture != "derived" or args.mesh not in BUILTIN_IDS or not has_fixture(complex.name):
        return
    implied = reference_fixture(complex.name, "implied")
    differ = []
    for t in metrics:
        for m in methods:
            try:
                if metric_poly(m, t, stats) != metric_poly(m, t, implied):
                    differ.append(f"{m.value} {t.value}")
            except FormulaError:
                pass
    if differ:
        _err(f"notice: mesh-derived results differ from the tabulated values for {', '.join(differ)}; "
             "use --fixture implied to reproduce the tables")


# -- commands -----------------------------------------------------------------

def cmd_topology(args) -> int:
    complex = load_mesh(args.mesh)
    stats = load_stats(args, complex)
    emit(args, render_topology(stats, args.format))
    return EXIT_OK


def cmd_poly(args) -> int:
    complex = load_mesh(args.mesh)
    stats = load_stats(args, complex)
    methods, metrics = _methods(args), _metrics(args)
    try:
        text = render_polynomials(stats, methods, metrics, args.format)
    except FormulaError as exc:
        raise CliError(EXIT_USAGE, str(exc)) from exc
    _notice_if_untabulated(args, complex, stats, methods, metrics)
    emit(args, text)
    return EXIT_OK


def cmd_table(args) -> int:
    _check_k_range(args)
    complex = load_mesh(args.mesh)
    stats = load_stats(args, complex)
    methods, metrics = _methods(args), _metrics(args)
    try:
        table = build_table(stats, methods, metrics, args.k_min, args.k_max)
    except FormulaError as exc:
        raise CliError(EXIT_USAGE, str(exc)) from exc
    _notice_if_untabulated(args, complex, stats, methods, metrics)
    emit(args, table.render(args.format, args.decimal))
    return EXIT_OK


def run_verification(complex: PeriodicCellComplex, methods: Sequence[Method], k_min: int, k_max: int,
                     tiling: int, with_fixture: bool) -> dict:
    """Invariants, oracle equivalence and fixture comparison for one mesh."""
    stats = derived_stats(complex)
    torus = torus_for(complex, tiling)
    sym = pair_symmetry_check(stats)
    invariants = [
        ("unit-cell validation", validate(complex).ok, ""),
        (f"torus {tiling} Euler characteristic", torus.euler_characteristic() == 0,
         str(torus.euler_characteristic())),
        ("Euler characteristic per element", stats.euler_per_element() == 0,
         fraction_str(stats.euler_per_element())),
        ("pair symmetry", sym.passed, ", ".join(f"{p.p}-{p.q}" for p in sym.failures())),
    ]
    checks = mismatches = stable = 0
    failures = []
    for m in methods:
        pn, pz = ncdof_poly(m, stats), nnze_poly(m, stats)
        for k in range(k_min, k_max + 1):
            o = oracle_counts(complex, m, k, tiling)
            checks += 1
            if o["ncdof_per_element"] != pn(k) or o["nnze_per_element"] != pz(k):
                mismatches += 1
                failures.append(f"{m.value} k={k}: oracle {fraction_str(o['ncdof_per_element'])}/"
                                f"{fraction_str(o['nnze_per_element'])}, formula {fraction_str(pn(k))}/"
                                f"{fraction_str(pz(k))}")
            if stability_check(complex, m, k, tiling, tiling + 1).passed:
                stable += 1
    invariants.append((f"stability {tiling} vs {tiling + 1}", stable == checks, f"{stable}/{checks}"))
    result = {
        "mesh": complex.name,
        "derivation": stats.derivation,
        "tiling": tiling,
        "k": [k_min, k_max],
        "invariants": invariants,
        "checks": checks,
        "passed": checks - mismatches,
        "failures": failures,
        "fixture": None,
    }
    if with_fixture:
        printed = reference_fixture(complex.name, "printed")
        implied = reference_fixture(complex.name, "implied")
        result["fixture"] = {
            "violations": {v: fixture_violations(s) for v, s in (("printed", printed), ("implied", implied))},
            "errata": compare_fixture(printed, stats, METHOD_ORDER),
            "implied_vs_derived": compare_fixture(implied, stats, METHOD_ORDER),
        }
    return result


def render_verification(res: dict, fmt: str) -> str:
    fx = res["fixture"]
    if fmt == "json":
        out = {k: v for k, v in res.items() if k != "fixture"}
        out["invariants"] = [{"check": c, "passed": ok, "detail": d} for c, ok, d in res["invariants"]]
        if fx is not None:
            out["fixture"] = {
                "violations": {v: [dict(zip(("check", "lhs", "rhs"), x.as_row())) for x in lst]
                               for v, lst in fx["violations"].items()},
                "errata": json.loads(render_errata(fx["errata"], "json")),
                "implied_vs_derived": json.loads(render_errata(fx["implied_vs_derived"], "json")),
            }
        return json.dumps(out, indent=2) + "\n"
    if fmt == "csv":
        return render_errata(fx["errata"] if fx else [], "csv")
    lines = [f"# Verification report: {res['mesh']}", "",
             f"Statistics: {res['derivation']}; oracle tiling {res['tiling']}; "
             f"k = {res['k'][0]}..{res['k'][1]}", "", "## Invariants", "",
             "| check | result | detail |", "|---|---|---|"]
    lines += [f"| {c} | {'pass' if ok else 'FAIL'} | {d} |" for c, ok, d in res["invariants"]]
    lines += ["", "## Oracle", "", f"oracle == formula: {res['passed']}/{res['checks']} checks"]
    lines += [f"- mismatch: {f}" for f in res["failures"]]
    if fx is not None:
        lines += ["", "## Tabulated statistics", ""]
        for variant, lst in fx["violations"].items():
            if lst:
                lines += [f"Invariant violations ({variant}):", "", "| check | lhs | rhs |", "|---|---|---|"]
                lines += ["| " + " | ".join(v.as_row()) + " |" for v in lst]
                lines.append("")
            else:
                lines += [f"Invariant violations ({variant}): none", ""]
        lines += ["### Errata", "", render_errata(fx["errata"], "md").rstrip("\n")]
        if fx["implied_vs_derived"]:
            lines += ["", "### Still differing after the implied corrections", "",
                      render_errata(fx["implied_vs_derived"], "md").rstrip("\n")]
    return "\n".join(lines) + "\n"


def cmd_verify(args) -> int:
    _check_k_range(args)
    if args.tiling < 3:
        raise CliError(EXIT_USAGE, "verification needs --tiling >= 3")
    complex = load_mesh(args.mesh)
    res = run_verification(complex, _methods(args), args.k_min, args.k_max, args.tiling,
                           args.mesh in BUILTIN_IDS and has_fixture(complex.name))
    emit(args, render_verification(res, args.format))
    if res["passed"] != res["checks"]:
        _err(f"oracle and formula disagree on {res['checks'] - res['passed']} checks")
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_export_pattern(args) -> int:
    if not args.out:
        raise CliError(EXIT_USAGE, "export-pattern needs --out")
    if args.k < 1:
        raise CliError(EXIT_USAGE, "--k must be >= 1")
    if args.tiling < 1:
        raise CliError(EXIT_USAGE, "--tiling must be >= 1")
    complex = load_mesh(args.mesh)
    method = _parse_methods(args.method)[0]
    check = stability_check(complex, method, args.k, args.tiling, max(args.tiling + 1, 3))
    if not check.passed:
        _err(f"warning: stability check failed (nnz per element {fraction_str(check.nnze_per_element[0])} "
             f"at tiling {check.tilings[0]} vs {fraction_str(check.nnze_per_element[1])} at "
             f"{check.tilings[1]}); periodic wrap collapses couplings")
        if not args.force:
            raise CliError(EXIT_USAGE, "refusing to export a collapsed pattern without --force")
    pattern = coupling_pattern(torus_for(complex, args.tiling), method, args.k, explicit=True)
    try:
        export_pattern(pattern, args.out)
    except OSError as exc:
        raise CliError(EXIT_WRITE, f"cannot write {args.out}: {exc}") from exc
    print(f"{pattern.n_dofs} {pattern.n_dofs} {pattern.nnz}")
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--mesh", required=True, help="builtin id or path to a mesh JSON file")
    shared.add_argument("--format", choices=FORMATS, default="md")
    shared.add_argument("--fixture", choices=("derived", "printed", "implied"), default="derived")
    shared.add_argument("--tiling", type=int, default=3)
    shared.add_argument("--k-min", type=int, default=1)
    shared.add_argument("--k-max", type=int, default=10)
    shared.add_argument("--decimal", action="store_true", help="one-decimal half-up rendering")
    shared.add_argument("--out", help="write output here instead of standard output")
    shared.add_argument("--force", action="store_true")

    parser = argparse.ArgumentParser(prog="polysparse",
                                     description="Sparsity statistics of polytopal discretizations.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("topology", parents=[shared], help="neighborhood topology classes")
    p.set_defaults(func=cmd_topology)

    metric = dict(choices=[m.value for m in Metric], default=None)
    p = sub.add_parser("poly", parents=[shared], help="per-element polynomials in k")
    p.add_argument("--method", "--methods", dest="method")
    p.add_argument("--metric", **metric)
    p.set_defaults(func=cmd_poly)

    p = sub.add_parser("table", parents=[shared], help="per-element counts for a k range")
    p.add_argument("--methods", "--method", dest="methods")
    p.add_argument("--metric", **metric)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("verify", parents=[shared], help="oracle equivalence, invariants and errata")
    p.add_argument("--methods", "--method", dest="methods")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export-pattern", parents=[shared], help="Matrix Market coupling pattern")
    p.add_argument("--method", required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_export_pattern)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        _err(str(exc))
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
