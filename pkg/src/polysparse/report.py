"""Rendering of topology reports, polynomial and numeric tables, and errata."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .dof_model import Method
from .formula_engine import FormulaError, Metric, metric_poly
from .periodic_complex import DIM_NAMES
from .topology_stats import TopologyStats, pair_symmetry_check, topology_rows

FORMATS = ("md", "csv", "json")


def fraction_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def decimal_str(x: Fraction) -> str:
    """Round half-up (away from zero) to one decimal; integers lose the ``.0``."""
    x = Fraction(x)
    sign = "-" if x < 0 else ""
    tenths = int(abs(x) * 10 + Fraction(1, 2))  # floor of a non-negative value
    if tenths == 0:
        sign = ""
    whole, frac = divmod(tenths, 10)
    return f"{sign}{whole}" if frac == 0 else f"{sign}{whole}.{frac}"


def _md(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    lines += ["| " + " | ".join(r) + " |" for r in rows]
    return "\n".join(lines) + "\n"


def _csv(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


# -- topology -----------------------------------------------------------------

def render_topology(stats: TopologyStats, fmt: str = "md") -> str:
    d = stats.dimension
    header = ["class", *DIM_NAMES[: d + 1], "R"]
    rows = [[label, *("-" if v is None else str(v) for v in nb), fraction_str(r)]
            for label, nb, r in topology_rows(stats)]
    if fmt == "json":
        sym = pair_symmetry_check(stats)
        return _json({
            "mesh": stats.name,
            "dimension": d,
            "derivation": stats.derivation,
            "classes": [
                {
                    "label": c.label,
                    "dim": c.dim,
                    "index": c.index,
                    "members": list(c.members),
                    "nb": {DIM_NAMES[m]: v for m, v in sorted(c.nb.items())},
                    "R": fraction_str(c.ratio),
                }
                for c in sorted(stats.classes, key=lambda c: (c.dim, c.index))
            ],
            "euler_per_element": fraction_str(stats.euler_per_element()),
            "pair_symmetry": "pass" if sym.passed else "fail",
        })
    if fmt == "csv":
        return _csv(header, rows)
    return f"Topology of {stats.name} ({stats.derivation})\n\n" + _md(header, rows)


# -- polynomial and numeric tables --------------------------------------------

def row_label(method: Method, metric: Metric) -> str:
    return f"{Metric(metric).value}_{Method(method).value}/N_El"


def render_polynomials(stats: TopologyStats, methods: Sequence[Method],
                       metrics: Sequence[Metric], fmt: str = "md") -> str:
    polys = {(m, t): metric_poly(m, t, stats) for m in methods for t in metrics}
    if fmt == "json":
        return _json({
            "mesh": stats.name,
            "derivation": stats.derivation,
            "polynomials": [
                {"method": m.value, "metric": t.value, "polynomial": polys[m, t].format(),
                 "coefficients": polys[m, t].to_json()}
                for m in methods for t in metrics
            ],
        })
    if len(polys) == 1 and fmt == "md":
        return next(iter(polys.values())).format() + "\n"
    header = ["method", *(t.value for t in metrics)]
    rows = [[m.value, *(polys[m, t].format() for t in metrics)] for m in methods]
    if fmt == "csv":
        return _csv(header, rows)
    return f"Per-element polynomials for {stats.name} ({stats.derivation})\n\n" + _md(header, rows)


@dataclass
class ReportTable:
    caption: str
    row_labels: list[str]
    ks: list[int]
    cells: list[list[Fraction]]
    derivation: str = ""

    def render_cell(self, x: Fraction, decimal: bool) -> str:
        return decimal_str(x) if decimal else fraction_str(x)

    def render(self, fmt: str = "md", decimal: bool = False) -> str:
        header = ["k", *(str(k) for k in self.ks)]
        rows = [[lab, *(self.render_cell(x, decimal) for x in row)]
                for lab, row in zip(self.row_labels, self.cells)]
        if fmt == "json":
            return _json({
                "caption": self.caption,
                "derivation": self.derivation,
                "k": self.ks,
                "rows": [
                    {"label": lab, "values": [fraction_str(x) for x in row],
                     **({"decimal": [decimal_str(x) for x in row]} if decimal else {})}
                    for lab, row in zip(self.row_labels, self.cells)
                ],
            })
        if fmt == "csv":
            return _csv(header, rows)
        return f"{self.caption}\n\n" + _md(header, rows)


def build_table(stats: TopologyStats, methods: Sequence[Method], metrics: Sequence[Metric],
                k_min: int, k_max: int) -> ReportTable:
    ks = list(range(k_min, k_max + 1))
    labels, cells = [], []
    for t in metrics:
        for m in methods:
            p = metric_poly(m, t, stats)
            labels.append(row_label(m, t))
            cells.append([p(k) for k in ks])
    caption = f"Per-element counts for {stats.name} ({stats.derivation})"
    return ReportTable(caption, labels, ks, cells, stats.derivation)


# -- errata -------------------------------------------------------------------

def _value_str(v) -> str:
    return "-" if v is None else fraction_str(v) if isinstance(v, Fraction) else str(v)


@dataclass
class ErrataEntry:
    mesh: str
    location: str
    printed: object
    derived: object
    effects: list[tuple[str, int]] = field(default_factory=list)  # (row, first k that changes)

    def __post_init__(self):
        if self.printed == self.derived:
            raise ValueError("errata entry needs differing printed and derived values")

    @property
    def downstream(self) -> str:
        if not self.effects:
            return "no tabulated row changes"
        return "; ".join(f"{row} for k >= {k}" for row, k in self.effects)

    def as_row(self) -> list[str]:
        return [self.mesh, self.location, _value_str(self.printed), _value_str(self.derived), self.downstream]


ERRATA_HEADER = ["mesh", "location", "printed", "derived", "downstream effect"]
EFFECT_K_RANGE = range(1, 11)


def _effects(before: TopologyStats, after: TopologyStats, methods: Sequence[Method]) -> list[tuple[str, int]]:
    out = []
    for t in (Metric.NCDOF, Metric.NNZE):
        for m in methods:
            try:
                p, q = metric_poly(m, t, before), metric_poly(m, t, after)
            except FormulaError:
                continue
            if p == q:
                continue
            first = next((k for k in EFFECT_K_RANGE if p(k) != q(k)), None)
            out.append((f"{m.value} {t.value}", first if first is not None else EFFECT_K_RANGE.stop))
    return out


def compare_fixture(printed: TopologyStats, derived: TopologyStats,
                    methods: Sequence[Method]) -> list[ErrataEntry]:
    """Entry-by-entry differences between tabulated and mesh-derived statistics.

    Each entry's downstream effect is found by substituting the derived value
    alone into the tabulated statistics and listing the rows that change.
    """
    entries = []
    mesh = printed.name
    keys_p = {(c.dim, c.index) for c in printed.classes}
    keys_d = {(c.dim, c.index) for c in derived.classes}
    for dim, idx in sorted(keys_p ^ keys_d):
        label = f"({DIM_NAMES[dim]},{idx})"
        entries.append(ErrataEntry(mesh, f"{label} class", "present" if (dim, idx) in keys_p else "absent",
                                   "present" if (dim, idx) in keys_d else "absent"))
    for dim, idx in sorted(keys_p & keys_d):
        cp, cd = printed.find(dim, idx), derived.find(dim, idx)
        for m in sorted(cp.nb):
            if m in cd.nb and cp.nb[m] != cd.nb[m]:
                fixed = printed.replace(dim, idx, nb={m: cd.nb[m]})
                entries.append(ErrataEntry(mesh, f"{cp.label} Nb({DIM_NAMES[m]})", cp.nb[m], cd.nb[m],
                                           _effects(printed, fixed, methods)))
    for dim in sorted({k[0] for k in keys_p & keys_d}):
        diffs = [(printed.find(dim, i), derived.find(dim, i)) for d_, i in sorted(keys_p & keys_d)
                 if d_ == dim and printed.find(dim, i).ratio != derived.find(dim, i).ratio]
        # ratios permuted within one dimension are a single mistake, not several
        if len(diffs) > 1 and sum(p.ratio for p, _ in diffs) == sum(q.ratio for _, q in diffs):
            groups = [diffs]
        else:
            groups = [[x] for x in diffs]
        for group in groups:
            fixed = printed
            for cp, cd in group:
                fixed = fixed.replace(cp.dim, cp.index, ratio=cd.ratio)
            entries.append(ErrataEntry(
                mesh, "/".join(cp.label for cp, _ in group) + " R",
                ", ".join(fraction_str(cp.ratio) for cp, _ in group),
                ", ".join(fraction_str(cd.ratio) for _, cd in group),
                _effects(printed, fixed, methods)))
    return entries


@dataclass
class InvariantViolation:
    check: str
    lhs: Fraction
    rhs: Fraction

    def as_row(self) -> list[str]:
        return [self.check, fraction_str(self.lhs), fraction_str(self.rhs)]


def fixture_violations(stats: TopologyStats) -> list[InvariantViolation]:
    """Euler and pair-symmetry failures of a (possibly tabulated) statistics set."""
    out = []
    chi = stats.euler_per_element()
    if chi != 0:
        out.append(InvariantViolation("Euler characteristic per element", chi, Fraction(0)))
    for pc in pair_symmetry_check(stats).failures():
        out.append(InvariantViolation(
            f"pair symmetry {DIM_NAMES[pc.p]}-{DIM_NAMES[pc.q]}", pc.lhs, pc.rhs))
    return out


def render_errata(entries: Sequence[ErrataEntry], fmt: str = "md") -> str:
    rows = [e.as_row() for e in entries]
    if fmt == "csv":
        return _csv(ERRATA_HEADER, rows)
    if fmt == "json":
        return _json([dict(zip(ERRATA_HEADER, r)) for r in rows])
    return _md(ERRATA_HEADER, rows) if rows else "no errata\n"
