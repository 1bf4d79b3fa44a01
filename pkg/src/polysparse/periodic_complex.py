"""Periodic polytopal unit-cell complexes and their finite torus tilings.

A complex is given by entity *orbits*: one representative per class of lattice
translates. Each orbit stores only its codimension-1 boundary as a list of
``(orbit id, offset)`` pairs, where ``offset`` is the integer lattice
translation (in unit cells) of the boundary entity relative to the owner.
Everything else (closures, the torus realization) is computed from that.
"""

from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

Offset = tuple[int, ...]

DIM_NAMES = ("V", "Ed", "Fa", "C")


class MeshError(ValueError):
    """Raised for malformed mesh documents or invalid complexes."""


@dataclass(frozen=True)
class EntityOrbit:
    id: str
    dim: int
    boundary: tuple[tuple[str, Offset], ...] = ()


@dataclass(frozen=True)
class PeriodicCellComplex:
    name: str
    dimension: int
    orbits: tuple[EntityOrbit, ...]

    def __post_init__(self):
        if self.dimension not in (2, 3):
            raise MeshError(f"dimension must be 2 or 3, got {self.dimension}")
        seen = set()
        for orbit in self.orbits:
            if orbit.id in seen:
                raise MeshError(f"duplicate orbit id {orbit.id!r}")
            seen.add(orbit.id)
            if not 0 <= orbit.dim <= self.dimension:
                raise MeshError(f"orbit {orbit.id!r}: dim {orbit.dim} outside [0, {self.dimension}]")
            if orbit.dim == 0 and orbit.boundary:
                raise MeshError(f"orbit {orbit.id!r}: dim-0 orbits must have an empty boundary")
            for ref, offset in orbit.boundary:
                if len(offset) != self.dimension:
                    raise MeshError(
                        f"orbit {orbit.id!r}: offset {list(offset)} has length {len(offset)}, "
                        f"expected {self.dimension}"
                    )
        by_id = {o.id: o for o in self.orbits}
        for orbit in self.orbits:
            for ref, _ in orbit.boundary:
                if ref not in by_id:
                    raise MeshError(f"orbit {orbit.id!r}: dangling boundary reference {ref!r}")
                if by_id[ref].dim != orbit.dim - 1:
                    raise MeshError(
                        f"orbit {orbit.id!r}: boundary dimension mismatch "
                        f"({ref!r} has dim {by_id[ref].dim}, expected {orbit.dim - 1})"
                    )

    @cached_property
    def _by_id(self) -> dict[str, EntityOrbit]:
        return {o.id: o for o in self.orbits}

    def orbit(self, orbit_id: str) -> EntityOrbit:
        try:
            return self._by_id[orbit_id]
        except KeyError:
            raise KeyError(f"unknown orbit {orbit_id!r}") from None

    def orbits_of_dim(self, m: int) -> list[EntityOrbit]:
        return [o for o in self.orbits if o.dim == m]

    def counts(self) -> tuple[int, ...]:
        """Orbit counts ``(N_0, ..., N_d)`` per unit cell."""
        return tuple(len(self.orbits_of_dim(m)) for m in range(self.dimension + 1))

    def structure(self) -> tuple:
        """Order-independent structural content, used for equality checks."""
        return (
            self.name,
            self.dimension,
            tuple(sorted((o.id, o.dim, tuple(sorted(o.boundary))) for o in self.orbits)),
        )


def euler_characteristic(complex: PeriodicCellComplex) -> int:
    return sum((-1) ** m * n for m, n in enumerate(complex.counts()))


# --- serialization ---------------------------------------------------------

_TOP_KEYS = {"name", "dimension", "orbits"}
_ORBIT_KEYS = {"id", "dim", "boundary"}
_ENTRY_KEYS = {"of", "offset"}


def _check_keys(obj, allowed: set, where: str):
    if not isinstance(obj, dict):
        raise MeshError(f"{where}: expected an object")
    missing = allowed - obj.keys()
    if missing:
        raise MeshError(f"{where}: missing field(s) {sorted(missing)}")
    extra = obj.keys() - allowed
    if extra:
        raise MeshError(f"{where}: unknown field(s) {sorted(extra)}")


def _is_int(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def parse_mesh(document: str) -> PeriodicCellComplex:
    """Parse a JSON mesh document into a complex.

    Raises :class:`MeshError` on schema violations and structural errors
    (dangling references, dimension mismatches). Topological checks such as
    the facet rule are left to :func:`validate`.
    """
    try:
        data = json.loads(document)
    except json.JSONDecodeError as exc:
        raise MeshError(f"not valid JSON: {exc}") from None
    _check_keys(data, _TOP_KEYS, "mesh")
    if not isinstance(data["name"], str):
        raise MeshError("mesh: 'name' must be a string")
    if not _is_int(data["dimension"]) or data["dimension"] not in (2, 3):
        raise MeshError("mesh: 'dimension' must be 2 or 3")
    if not isinstance(data["orbits"], list):
        raise MeshError("mesh: 'orbits' must be a list")
    d = data["dimension"]
    orbits = []
    for i, raw in enumerate(data["orbits"]):
        where = f"orbits[{i}]"
        _check_keys(raw, _ORBIT_KEYS, where)
        if not isinstance(raw["id"], str):
            raise MeshError(f"{where}: 'id' must be a string")
        if not _is_int(raw["dim"]):
            raise MeshError(f"{where}: 'dim' must be an integer")
        if not isinstance(raw["boundary"], list):
            raise MeshError(f"{where}: 'boundary' must be a list")
        boundary = []
        for j, entry in enumerate(raw["boundary"]):
            ew = f"{where}.boundary[{j}]"
            # orientation data is tolerated and dropped
            entry = {key: val for key, val in entry.items() if key != "sign"} if isinstance(entry, dict) else entry
            _check_keys(entry, _ENTRY_KEYS, ew)
            if not isinstance(entry["of"], str):
                raise MeshError(f"{ew}: 'of' must be a string")
            off = entry["offset"]
            if not isinstance(off, list) or not all(_is_int(x) for x in off):
                raise MeshError(f"{ew}: 'offset' must be a list of integers")
            if len(off) != d:
                raise MeshError(f"{ew}: offset dimension mismatch ({len(off)} != {d})")
            boundary.append((entry["of"], tuple(off)))
        orbits.append(EntityOrbit(raw["id"], raw["dim"], tuple(boundary)))
    return PeriodicCellComplex(data["name"], d, tuple(orbits))


def serialize_mesh(complex: PeriodicCellComplex) -> str:
    data = {
        "name": complex.name,
        "dimension": complex.dimension,
        "orbits": [
            {
                "id": o.id,
                "dim": o.dim,
                "boundary": [{"of": ref, "offset": list(off)} for ref, off in o.boundary],
            }
            for o in sorted(complex.orbits, key=lambda o: o.dim)
        ],
    }
    return json.dumps(data, indent=1) + "\n"


# --- validation ------------------------------------------------------------


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class ValidationReport:
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def _facet_rule(complex: PeriodicCellComplex) -> CheckResult:
    d = complex.dimension
    uses = Counter(ref for el in complex.orbits_of_dim(d) for ref, _ in el.boundary)
    bad = [(f.id, uses[f.id]) for f in complex.orbits_of_dim(d - 1) if uses[f.id] != 2]
    if not complex.orbits_of_dim(d) or not complex.orbits_of_dim(d - 1):
        return CheckResult("facet_rule", False, "complex needs at least one element and one facet orbit")
    if bad:
        text = ", ".join(f"orbit {fid!r} appears {n} time(s)" for fid, n in bad)
        return CheckResult("facet_rule", False, text)
    return CheckResult("facet_rule", True)


def validate(complex: PeriodicCellComplex) -> ValidationReport:
    """Run the structural checks; failures are reported, never raised."""
    report = ValidationReport()

    problems = []
    ids = {o.id: o for o in complex.orbits}
    for o in complex.orbits:
        for ref, off in o.boundary:
            if ref not in ids:
                problems.append(f"{o.id!r} references unknown {ref!r}")
            elif ids[ref].dim != o.dim - 1:
                problems.append(f"{o.id!r} references {ref!r} of wrong dimension")
            if len(off) != complex.dimension:
                problems.append(f"{o.id!r} has an offset of length {len(off)}")
        if o.dim > 0 and not o.boundary:
            problems.append(f"{o.id!r} has an empty boundary")
    report.checks.append(CheckResult("boundary_references", not problems, "; ".join(problems)))

    report.checks.append(_facet_rule(complex))

    chi = euler_characteristic(complex)
    report.checks.append(CheckResult("euler_characteristic", chi == 0, f"chi = {chi}"))

    if problems:
        report.checks.append(CheckResult("closure_consistency", False, "skipped: broken references"))
        return report
    # Element orbits need a non-empty closure in every dimension, and element
    # orbits with the same facet count must agree on all closure counts.
    d = complex.dimension
    by_facets: dict[int, tuple[str, tuple[int, ...]]] = {}
    issues = []
    for el in complex.orbits_of_dim(d):
        cl = closure(complex, el.id)
        sizes = tuple(len(cl[m]) for m in range(d + 1))
        if 0 in sizes:
            issues.append(f"{el.id!r} has an empty closure in some dimension")
        key = sizes[d - 1]
        if key in by_facets and by_facets[key][1] != sizes:
            issues.append(f"{el.id!r} closure counts {sizes} differ from {by_facets[key][0]!r}")
        by_facets.setdefault(key, (el.id, sizes))
    report.checks.append(CheckResult("closure_consistency", not issues, "; ".join(issues)))
    return report


# --- closure ---------------------------------------------------------------


def _add(a: Offset, b: Offset) -> Offset:
    return tuple(x + y for x, y in zip(a, b))


def closure(complex: PeriodicCellComplex, orbit_id: str) -> dict[int, list[tuple[str, Offset]]]:
    """Downward closure of one orbit representative.

    Returns, per dimension, the sorted distinct ``(orbit id, offset)`` pairs
    reachable through boundary chains with offsets summed along the chain.
    The orbit itself appears at its own dimension with a zero offset.
    """
    top = complex.orbit(orbit_id)
    zero = (0,) * complex.dimension
    layers: dict[int, set[tuple[str, Offset]]] = {m: set() for m in range(complex.dimension + 1)}
    layers[top.dim].add((top.id, zero))
    for m in range(top.dim, 0, -1):
        for oid, off in layers[m]:
            for ref, boff in complex.orbit(oid).boundary:
                layers[m - 1].add((ref, _add(off, boff)))
    return {m: sorted(layers[m]) for m in layers}


# --- torus tiling ----------------------------------------------------------


@dataclass
class TorusComplex:
    """Finite realization of a periodic complex on ``Z_n1 x ... x Z_nd``.

    Entities are ``(orbit id, cell)`` keys with global indices assigned in the
    order: dimension ascending, orbit order, lexicographic cell index.
    """

    base: PeriodicCellComplex
    tiling: tuple[int, ...]
    entities: list[tuple[str, Offset]]
    dims: list[int]
    index: dict[tuple[str, Offset], int]
    boundary: list[list[int]]
    element_closures: dict[int, frozenset[int]]

    @property
    def dimension(self) -> int:
        return self.base.dimension

    @property
    def num_cells(self) -> int:
        n = 1
        for x in self.tiling:
            n *= x
        return n

    def entities_of_dim(self, m: int) -> list[int]:
        return [i for i, dm in enumerate(self.dims) if dm == m]

    def counts(self) -> tuple[int, ...]:
        c = Counter(self.dims)
        return tuple(c[m] for m in range(self.dimension + 1))

    def euler_characteristic(self) -> int:
        return sum((-1) ** m * n for m, n in enumerate(self.counts()))

    def wrap(self, cell: Iterable[int]) -> Offset:
        return tuple(c % n for c, n in zip(cell, self.tiling))

    def entity(self, orbit_id: str, cell: Sequence[int]) -> int:
        key = (orbit_id, self.wrap(cell))
        try:
            return self.index[key]
        except KeyError:
            raise KeyError(f"unknown entity {key!r}") from None

    def elements(self) -> list[int]:
        return self.entities_of_dim(self.dimension)

    @cached_property
    def star(self) -> dict[int, list[int]]:
        """Elements whose closure contains each entity."""
        out: dict[int, list[int]] = {i: [] for i in range(len(self.entities))}
        for el, cl in self.element_closures.items():
            for e in cl:
                out[e].append(el)
        return out

    def closure_of(self, entity: int) -> set[int]:
        seen = {entity}
        stack = [entity]
        while stack:
            e = stack.pop()
            for b in self.boundary[e]:
                if b not in seen:
                    seen.add(b)
                    stack.append(b)
        return seen


def tile(complex: PeriodicCellComplex, n: Sequence[int]) -> TorusComplex:
    n = tuple(int(x) for x in n)
    if len(n) != complex.dimension:
        raise ValueError(f"tiling needs {complex.dimension} counts, got {len(n)}")
    if any(x < 1 for x in n):
        raise ValueError(f"tiling counts must be >= 1, got {n}")
    cells = list(itertools.product(*(range(x) for x in n)))
    entities: list[tuple[str, Offset]] = []
    dims: list[int] = []
    for m in range(complex.dimension + 1):
        for orbit in complex.orbits_of_dim(m):
            for c in cells:
                entities.append((orbit.id, c))
                dims.append(m)
    index = {key: i for i, key in enumerate(entities)}

    def wrap(cell):
        return tuple(x % k for x, k in zip(cell, n))

    boundary = []
    for (oid, c) in entities:
        boundary.append([index[(ref, wrap(_add(c, off)))] for ref, off in complex.orbit(oid).boundary])
    element_closures = {}
    d = complex.dimension
    orbit_closures = {o.id: closure(complex, o.id) for o in complex.orbits_of_dim(d)}
    for i, (oid, c) in enumerate(entities):
        if dims[i] != d:
            continue
        members = set()
        for layer in orbit_closures[oid].values():
            for ref, off in layer:
                members.add(index[(ref, wrap(_add(c, off)))])
        element_closures[i] = frozenset(members)
    return TorusComplex(complex, n, entities, dims, index, boundary, element_closures)
