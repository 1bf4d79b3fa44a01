"""Tabulated neighborhood numbers for the builtin meshes.

``printed`` holds the reference tables exactly as tabulated; 3D tables give
neighbor counts for vertices, edges and faces only. ``implied`` applies the
two corrections that the tabulated polynomials themselves require:

* tet3d face-to-face neighbor count 6 -> 7 (two tetrahedra with four faces
  each share one face);
* truncoct3d vertex ratio 5 -> 6 (24 vertices, each shared by 4 cells).
"""

from __future__ import annotations

from fractions import Fraction as Fr

from .topology_stats import TopologyClass, TopologyStats

FIXTURE_VARIANTS = ("printed", "implied")

# mesh -> (dimension, rows of (dim, index, [Nb per dim], R))
_PRINTED = {
    "triangle2d": (2, [
        (0, 1, [7, 12, 6], Fr(1, 2)),
        (1, 1, [4, 5, 2], Fr(3, 2)),
        (2, 1, [3, 3, 1], Fr(1)),
    ]),
    "quad2d": (2, [
        (0, 1, [9, 12, 4], Fr(1)),
        (1, 1, [6, 7, 2], Fr(2)),
        (2, 1, [4, 4, 1], Fr(1)),
    ]),
    "hexagon2d": (2, [
        (0, 1, [13, 15, 3], Fr(2)),
        (1, 1, [10, 11, 2], Fr(3)),
        (2, 1, [6, 6, 1], Fr(1)),
    ]),
    "tet3d": (3, [
        (0, 1, [15, 43, 57], Fr(1, 6)),
        (1, 1, [8, 18, 18], Fr(2, 3)),
        (1, 2, [6, 12, 12], Fr(1, 2)),
        (2, 1, [5, 9, 6], Fr(2)),
        (3, 1, [4, 6, 4], Fr(1)),
    ]),
    "hex3d": (3, [
        (0, 1, [27, 54, 12], Fr(1)),
        (1, 1, [18, 33, 20], Fr(3)),
        (2, 1, [12, 20, 11], Fr(3)),
        (3, 1, [8, 12, 6], Fr(1)),
    ]),
    "oct3d": (3, [
        (0, 1, [15, 44, 36], Fr(1, 3)),
        (0, 2, [27, 86, 72], Fr(2, 3)),
        (1, 1, [11, 28, 21], Fr(8, 3)),
        (1, 2, [14, 37, 28], Fr(1)),
        (2, 1, [9, 21, 15], Fr(4)),
        (3, 1, [6, 12, 8], Fr(1)),
    ]),
    "truncoct3d": (3, [
        (0, 1, [71, 116, 50], Fr(5)),
        (1, 1, [58, 93, 39], Fr(12)),
        (2, 1, [42, 66, 27], Fr(3)),
        (2, 2, [44, 68, 27], Fr(4)),
        (3, 1, [24, 36, 14], Fr(1)),
    ]),
}

# (mesh, dim, index, field, value); field is "R" or a neighbor dimension
IMPLIED_SUBSTITUTIONS = (
    ("tet3d", 2, 1, 2, 7),
    ("truncoct3d", 0, 1, "R", Fr(6)),
)


def has_fixture(mesh_id: str) -> bool:
    return mesh_id in _PRINTED


def reference_fixture(mesh_id: str, variant: str = "printed") -> TopologyStats:
    if variant not in FIXTURE_VARIANTS:
        raise ValueError(f"unknown fixture variant {variant!r}")
    try:
        d, rows = _PRINTED[mesh_id]
    except KeyError:
        raise KeyError(f"no reference fixture for {mesh_id!r}") from None
    classes = tuple(TopologyClass(dim, idx, (), dict(enumerate(nb)), ratio) for dim, idx, nb, ratio in rows)
    stats = TopologyStats(d, classes, "fixture-printed", mesh_id)
    if variant == "implied":
        stats = TopologyStats(d, classes, "fixture-implied", mesh_id)
        for mesh, dim, idx, fld, value in IMPLIED_SUBSTITUTIONS:
            if mesh != mesh_id:
                continue
            if fld == "R":
                stats = stats.replace(dim, idx, ratio=value)
            else:
                stats = stats.replace(dim, idx, nb={fld: value})
    return stats
