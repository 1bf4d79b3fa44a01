"""Ground truth by direct assembly on a torus tiling.

Coupling unknowns are enumerated per entity and the global coupling pattern
is counted blockwise: a coupled entity pair ``(a, b)`` contributes
``ndof(a) * ndof(b)`` scalar entries. Scalar pairs are only expanded on
request (export).
"""

from __future__ import annotations

import os
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Optional, Sequence, TextIO, Union

from .builtin_meshes import builtin
from .dof_model import ELEMENT_METHODS, FACET_METHODS, DofRole, Method, local_ndof
from .periodic_complex import PeriodicCellComplex, TorusComplex, tile

MM_HEADER = "%%MatrixMarket matrix coordinate pattern general"


def _family(method: Method) -> str:
    if method in ELEMENT_METHODS:
        return "element"
    if method in FACET_METHODS:
        return "facet"
    return "sub"


def _carries_dofs(family: str, dim: int, d: int) -> bool:
    if family == "element":
        return dim == d
    if family == "facet":
        return dim == d - 1
    return dim < d


def _entity_ndof(method: Method, dim: int, d: int, k: int) -> int:
    family = _family(method)
    if family == "element":
        return local_ndof(method, DofRole.element(), d, k)
    if family == "facet":
        return local_ndof(method, DofRole.facet(), d, k)
    return local_ndof(method, DofRole.sub(dim), d, k)


@dataclass
class GlobalDofMap:
    method: Method
    k: int
    torus: TorusComplex
    entities: list[int]
    ranges: dict[int, range]

    @property
    def total(self) -> int:
        return sum(len(r) for r in self.ranges.values())

    def ndof(self, entity: int) -> int:
        return len(self.ranges[entity])


def _check_k(k: int):
    if k < 1:
        raise ValueError(f"polynomial degree must be >= 1, got {k}")


def enumerate_coupling_dofs(torus: TorusComplex, method: Method, k: int,
                            order: Optional[Sequence[int]] = None) -> GlobalDofMap:
    """Contiguous dof ranges for every coupling entity.

    ``order`` optionally permutes the coupling entities; by default they follow
    the torus enumeration (dimension, orbit, cell).
    """
    method = Method(method)
    _check_k(k)
    d = torus.dimension
    family = _family(method)
    coupling = [e for e, dm in enumerate(torus.dims) if _carries_dofs(family, dm, d)]
    if order is not None:
        if sorted(order) != coupling:
            raise ValueError("order must be a permutation of the coupling entities")
        coupling = list(order)
    ranges = {}
    start = 0
    for e in coupling:
        n = _entity_ndof(method, torus.dims[e], d, k)
        ranges[e] = range(start, start + n)
        start += n
    return GlobalDofMap(method, k, torus, coupling, ranges)


def _block_pairs(torus: TorusComplex, family: str) -> frozenset:
    """Coupled entity pairs; depends only on the method family, so cached per torus."""
    cache = torus.__dict__.setdefault("_block_pair_cache", {})
    if family in cache:
        return cache[family]
    d = torus.dimension
    pairs = set()
    if family == "element":
        for el in torus.elements():
            pairs.add((el, el))
        for f in torus.entities_of_dim(d - 1):
            star = torus.star[f]
            pairs.update(product(star, star))
    else:
        for el, cl in torus.element_closures.items():
            members = [e for e in cl if _carries_dofs(family, torus.dims[e], d)]
            pairs.update(product(members, members))
    cache[family] = frozenset(pairs)
    return cache[family]


@dataclass
class CouplingPattern:
    n_dofs: int
    nnz: int
    n_elements: int
    blocks: frozenset
    dof_map: GlobalDofMap
    pairs: Optional[list[tuple[int, int]]] = field(default=None, repr=False)

    @property
    def ncdof_per_element(self) -> Fraction:
        return Fraction(self.n_dofs, self.n_elements)

    @property
    def nnze_per_element(self) -> Fraction:
        return Fraction(self.nnz, self.n_elements)

    def is_symmetric(self) -> bool:
        if any((b, a) not in self.blocks for a, b in self.blocks):
            return False
        if self.pairs is not None:
            s = set(self.pairs)
            return all((j, i) in s for i, j in s)
        return True

    def has_complete_diagonal_blocks(self) -> bool:
        for e in self.dof_map.entities:
            if self.dof_map.ndof(e) and (e, e) not in self.blocks:
                return False
        if self.pairs is not None:
            s = set(self.pairs)
            for r in self.dof_map.ranges.values():
                if any((i, j) not in s for i in r for j in r):
                    return False
        return True


def coupling_pattern(torus: TorusComplex, method: Method, k: int, explicit: bool = False,
                     order: Optional[Sequence[int]] = None) -> CouplingPattern:
    method = Method(method)
    dof_map = enumerate_coupling_dofs(torus, method, k, order)
    blocks = _block_pairs(torus, _family(method))
    per_dim = Counter((torus.dims[a], torus.dims[b]) for a, b in blocks)
    d = torus.dimension
    nnz = sum(n * _entity_ndof(method, p, d, k) * _entity_ndof(method, q, d, k)
              for (p, q), n in per_dim.items())
    pairs = None
    if explicit:
        r = dof_map.ranges
        pairs = sorted((i, j) for a, b in blocks for i in r[a] for j in r[b])
        assert len(pairs) == nnz
    return CouplingPattern(dof_map.total, nnz, len(torus.elements()), blocks, dof_map, pairs)


@lru_cache(maxsize=64)
def _cached_torus(complex: PeriodicCellComplex, tiling: tuple[int, ...]) -> TorusComplex:
    return tile(complex, tiling)


def resolve_mesh(mesh: Union[str, PeriodicCellComplex]) -> PeriodicCellComplex:
    return builtin(mesh) if isinstance(mesh, str) else mesh


def _tiling(complex: PeriodicCellComplex, tiling: Union[int, Iterable[int]]) -> tuple[int, ...]:
    if isinstance(tiling, int):
        return (tiling,) * complex.dimension
    return tuple(tiling)


def torus_for(mesh, tiling: Union[int, Iterable[int]] = 3) -> TorusComplex:
    complex = resolve_mesh(mesh)
    return _cached_torus(complex, _tiling(complex, tiling))


def oracle_counts(mesh, method: Method, k: int, tiling: Union[int, Iterable[int]] = 3) -> dict:
    complex = resolve_mesh(mesh)
    n = _tiling(complex, tiling)
    if any(x < 3 for x in n):
        raise ValueError(f"oracle tilings need at least 3 cells per axis, got {n}")
    pat = coupling_pattern(_cached_torus(complex, n), method, k)
    return {"ncdof_per_element": pat.ncdof_per_element, "nnze_per_element": pat.nnze_per_element}


@dataclass(frozen=True)
class StabilityResult:
    passed: bool
    tilings: tuple[int, int]
    nnze_per_element: tuple[Fraction, Fraction]


def stability_check(mesh, method: Method, k: int, n1: int, n2: int) -> StabilityResult:
    """Compare nnz per element on two tiling sizes; a difference means wrap collapse."""
    if n1 == n2:
        raise ValueError("stability check needs two different tilings")
    values = tuple(coupling_pattern(torus_for(mesh, n), method, k).nnze_per_element for n in (n1, n2))
    return StabilityResult(values[0] == values[1], (n1, n2), values)


def _write_mm(pattern: CouplingPattern, fh: TextIO):
    fh.write(MM_HEADER + "\n")
    fh.write(f"{pattern.n_dofs} {pattern.n_dofs} {len(pattern.pairs)}\n")
    for i, j in pattern.pairs:
        fh.write(f"{i + 1} {j + 1}\n")


def export_pattern(pattern: CouplingPattern, destination: Union[str, os.PathLike, TextIO]):
    """Write a Matrix Market coordinate pattern file (1-based, sorted by row then column)."""
    if pattern.pairs is None:
        raise ValueError("pattern has no explicit pair set; build it with explicit=True")
    if hasattr(destination, "write"):
        _write_mm(pattern, destination)
        return
    with open(destination, "w", encoding="ascii") as fh:
        _write_mm(pattern, fh)
