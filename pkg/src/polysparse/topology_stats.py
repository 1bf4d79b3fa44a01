"""Entity classes, neighbor counts and per-element ratios of a periodic mesh."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .periodic_complex import (
    DIM_NAMES,
    PeriodicCellComplex,
    TorusComplex,
    euler_characteristic,
    tile,
)

DERIVATIONS = ("mesh-derived", "fixture-printed", "fixture-implied")


class ClassificationError(RuntimeError):
    """Neighbor counts changed between probe tilings."""


@dataclass(frozen=True)
class TopologyClass:
    dim: int
    index: int
    members: tuple[str, ...]
    nb: dict  # dimension -> neighbor count; missing keys mean "not given"
    ratio: Fraction

    @property
    def label(self) -> str:
        return f"({DIM_NAMES[self.dim]},{self.index})"


@dataclass(frozen=True)
class TopologyStats:
    dimension: int
    classes: tuple[TopologyClass, ...]
    derivation: str = "mesh-derived"
    name: str = ""

    def of_dim(self, m: int) -> list[TopologyClass]:
        return [c for c in self.classes if c.dim == m]

    def find(self, dim: int, index: int) -> TopologyClass:
        for c in self.classes:
            if c.dim == dim and c.index == index:
                return c
        raise KeyError(f"no class ({dim},{index})")

    def ratio_sum(self, m: int) -> Fraction:
        return sum((c.ratio for c in self.of_dim(m)), Fraction(0))

    def euler_per_element(self) -> Fraction:
        """Alternating sum of per-element entity ratios; 0 on a torus."""
        return sum(((-1) ** m * self.ratio_sum(m) for m in range(self.dimension + 1)), Fraction(0))

    def replace(self, dim: int, index: int, *, nb: Optional[dict] = None,
                ratio: Optional[Fraction] = None, derivation: Optional[str] = None) -> "TopologyStats":
        classes = []
        for c in self.classes:
            if c.dim == dim and c.index == index:
                c = TopologyClass(c.dim, c.index, c.members,
                                  {**c.nb, **(nb or {})},
                                  c.ratio if ratio is None else Fraction(ratio))
            classes.append(c)
        return TopologyStats(self.dimension, tuple(classes), derivation or self.derivation, self.name)


def neighbor_count(torus: TorusComplex, entity: int, m: int) -> int:
    """Distinct dim-``m`` entities sharing an element with ``entity`` (self included)."""
    if not 0 <= entity < len(torus.entities):
        raise KeyError(f"unknown entity {entity}")
    seen = set()
    for el in torus.star[entity]:
        seen.update(e for e in torus.element_closures[el] if torus.dims[e] == m)
    return len(seen)


def _signatures(complex: PeriodicCellComplex, probe: int) -> dict[str, tuple[int, ...]]:
    d = complex.dimension
    torus = tile(complex, (probe,) * d)
    origin = (0,) * d
    return {
        o.id: tuple(neighbor_count(torus, torus.entity(o.id, origin), m) for m in range(d + 1))
        for o in complex.orbits
    }


def classify(complex: PeriodicCellComplex, probe_tiling: int = 4) -> TopologyStats:
    """Group orbits into classes by neighbor-count signature.

    Neighbor counts are measured on a ``probe_tiling``-per-axis torus and
    re-measured one size larger; any difference raises
    :class:`ClassificationError`.
    """
    if probe_tiling < 3:
        raise ValueError("probe tiling must be at least 3 per axis")
    d = complex.dimension
    sig = _signatures(complex, probe_tiling)
    check = _signatures(complex, probe_tiling + 1)
    if sig != check:
        diff = sorted(oid for oid in sig if sig[oid] != check[oid])
        raise ClassificationError(
            f"neighbor counts of {diff} differ between probe tilings {probe_tiling} and {probe_tiling + 1}"
        )
    n_elements = len(complex.orbits_of_dim(d))
    classes = []
    for m in range(d + 1):
        groups: dict[tuple[int, ...], list[str]] = {}
        for o in complex.orbits_of_dim(m):
            groups.setdefault(sig[o.id], []).append(o.id)
        for index, (s, members) in enumerate(groups.items(), start=1):
            classes.append(TopologyClass(
                m, index, tuple(members), dict(enumerate(s)), Fraction(len(members), n_elements)
            ))
    return TopologyStats(d, tuple(classes), "mesh-derived", complex.name)


@dataclass
class PairCheck:
    p: int
    q: int
    lhs: Optional[Fraction]
    rhs: Optional[Fraction]

    @property
    def skipped(self) -> bool:
        return self.lhs is None or self.rhs is None

    @property
    def passed(self) -> bool:
        return self.skipped or self.lhs == self.rhs


@dataclass
class SymmetryReport:
    pairs: list[PairCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(p.passed for p in self.pairs)

    def failures(self) -> list[PairCheck]:
        return [p for p in self.pairs if not p.passed]


def _weighted(stats: TopologyStats, p: int, q: int) -> Optional[Fraction]:
    total = Fraction(0)
    for c in stats.of_dim(p):
        if q not in c.nb:
            return None
        total += c.ratio * c.nb[q]
    return total


def pair_symmetry_check(stats: TopologyStats) -> SymmetryReport:
    """Both sides count, per element, ordered (dim-p, dim-q) neighbor pairs.

    For every ``p < q``: ``sum R_i Nb_i(q)`` over dim-p classes must equal
    ``sum R_j Nb_j(p)`` over dim-q classes. Pairs with a missing neighbor
    count are reported as skipped.
    """
    report = SymmetryReport()
    for p in range(stats.dimension + 1):
        for q in range(p + 1, stats.dimension + 1):
            report.pairs.append(PairCheck(p, q, _weighted(stats, p, q), _weighted(stats, q, p)))
    return report


def topology_rows(stats: TopologyStats) -> list[tuple[str, list[Optional[int]], Fraction]]:
    """Rows ``(label, [Nb per dim], R)`` ordered by dimension then class index."""
    rows = []
    for c in sorted(stats.classes, key=lambda c: (c.dim, c.index)):
        rows.append((c.label, [c.nb.get(m) for m in range(stats.dimension + 1)], c.ratio))
    return rows


__all__ = [
    "ClassificationError",
    "PairCheck",
    "SymmetryReport",
    "TopologyClass",
    "TopologyStats",
    "classify",
    "euler_characteristic",
    "neighbor_count",
    "pair_symmetry_check",
    "topology_rows",
]
