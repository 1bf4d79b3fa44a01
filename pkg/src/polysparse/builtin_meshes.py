"""The seven periodic reference meshes as unit-cell complexes.

Orbit order inside each complex is chosen so that topology classes come out
numbered in the conventional order (e.g. the six-element-sharing edges of the
Freudenthal tetrahedra before the four-element-sharing face diagonals).
"""

from __future__ import annotations

from itertools import permutations, product

from .periodic_complex import EntityOrbit, PeriodicCellComplex

BUILTIN_IDS = ("triangle2d", "quad2d", "hexagon2d", "tet3d", "hex3d", "oct3d", "truncoct3d")

_DESCRIPTIONS = {
    "triangle2d": "periodic square split along one diagonal into two triangles",
    "quad2d": "periodic square mesh, one quadrilateral per unit cell",
    "hexagon2d": "honeycomb mesh, one hexagon and two vertices per unit cell",
    "tet3d": "Freudenthal (Kuhn) decomposition of the unit cube into six tetrahedra",
    "hex3d": "periodic cube mesh, one hexahedron per unit cell",
    "oct3d": "three octahedra per cube, each two square pyramids glued across a cube face",
    "truncoct3d": "truncated octahedra, Voronoi cells of the body-centered cubic lattice",
}


def _orb(oid, dim, *boundary):
    return EntityOrbit(oid, dim, tuple((ref, tuple(off)) for ref, off in boundary))


def _unit(d, axis):
    return tuple(1 if i == axis else 0 for i in range(d))


def _triangle2d() -> PeriodicCellComplex:
    o = (0, 0)
    return PeriodicCellComplex("triangle2d", 2, (
        _orb("v", 0),
        _orb("ex", 1, ("v", o), ("v", (1, 0))),
        _orb("ey", 1, ("v", o), ("v", (0, 1))),
        _orb("ed", 1, ("v", (1, 0)), ("v", (0, 1))),
        _orb("t0", 2, ("ex", o), ("ey", o), ("ed", o)),
        _orb("t1", 2, ("ex", (0, 1)), ("ey", (1, 0)), ("ed", o)),
    ))


def _quad2d() -> PeriodicCellComplex:
    o = (0, 0)
    return PeriodicCellComplex("quad2d", 2, (
        _orb("v", 0),
        _orb("ex", 1, ("v", o), ("v", (1, 0))),
        _orb("ey", 1, ("v", o), ("v", (0, 1))),
        _orb("q", 2, ("ex", o), ("ex", (0, 1)), ("ey", o), ("ey", (1, 0))),
    ))


def _hexagon2d() -> PeriodicCellComplex:
    # graphene layout: a(c) is bonded to b(c), b(c - e1), b(c - e2)
    o = (0, 0)
    return PeriodicCellComplex("hexagon2d", 2, (
        _orb("a", 0),
        _orb("b", 0),
        _orb("e0", 1, ("a", o), ("b", o)),
        _orb("e1", 1, ("a", o), ("b", (-1, 0))),
        _orb("e2", 1, ("a", o), ("b", (0, -1))),
        _orb("h", 2,
             ("e0", o), ("e1", (1, 0)), ("e2", (1, 0)),
             ("e0", (1, -1)), ("e1", (1, -1)), ("e2", o)),
    ))


_AXES = "xyz"


def _subset_name(s):
    return "".join(_AXES[i] for i in sorted(s))


def _tet3d() -> PeriodicCellComplex:
    # Every simplex is a chain 0 <= u <= u+w <= ... of 0/1 vectors; an edge
    # orbit is named by its direction subset, a triangle orbit by (U, W).
    zero = (0, 0, 0)

    def vec(s):
        return tuple(1 if i in s else 0 for i in range(3))

    def edge_id(s):
        return "e" + _subset_name(s)

    orbits = [_orb("v", 0)]
    # axis edges and the body diagonal share six tetrahedra; face diagonals four
    edge_sets = [{0}, {1}, {2}, {0, 1, 2}, {0, 1}, {0, 2}, {1, 2}]
    for s in edge_sets:
        orbits.append(_orb(edge_id(s), 1, ("v", zero), ("v", vec(s))))

    def tri_id(u, w):
        return f"f{_subset_name(u)}_{_subset_name(w)}"

    tris = []
    for u_size in (1, 2):
        for u in ({0}, {1}, {2}) if u_size == 1 else ({0, 1}, {0, 2}, {1, 2}):
            rest = {0, 1, 2} - u
            ws = [{r} for r in sorted(rest)] + ([rest] if len(rest) == 2 else [])
            for w in ws:
                tris.append((frozenset(u), frozenset(w)))
    tris.sort(key=lambda uw: (len(uw[0]) + len(uw[1]), len(uw[0]), sorted(uw[0]), sorted(uw[1])))
    for u, w in tris:
        orbits.append(_orb(tri_id(u, w), 2,
                           (edge_id(u), zero),
                           (edge_id(w), vec(u)),
                           (edge_id(u | w), zero)))

    for sigma in permutations(range(3)):
        a, b, c = sigma
        ea = vec({a})
        orbits.append(_orb("t" + "".join(_AXES[i] for i in sigma), 3,
                           (tri_id({a}, {b}), zero),
                           (tri_id({b}, {c}), ea),
                           (tri_id({a, b}, {c}), zero),
                           (tri_id({a}, {b, c}), zero)))
    return PeriodicCellComplex("tet3d", 3, tuple(orbits))


def _hex3d() -> PeriodicCellComplex:
    o = (0, 0, 0)
    ex, ey, ez = (_unit(3, i) for i in range(3))
    return PeriodicCellComplex("hex3d", 3, (
        _orb("v", 0),
        _orb("ex", 1, ("v", o), ("v", ex)),
        _orb("ey", 1, ("v", o), ("v", ey)),
        _orb("ez", 1, ("v", o), ("v", ez)),
        _orb("fyz", 2, ("ey", o), ("ey", ez), ("ez", o), ("ez", ey)),
        _orb("fxz", 2, ("ex", o), ("ex", ez), ("ez", o), ("ez", ex)),
        _orb("fxy", 2, ("ex", o), ("ex", ey), ("ey", o), ("ey", ex)),
        _orb("h", 3, ("fyz", o), ("fyz", ex), ("fxz", o), ("fxz", ey), ("fxy", o), ("fxy", ez)),
    ))


def _oct3d() -> PeriodicCellComplex:
    # m = cube center, c = cube corner; spoke s<p> joins m to corner p of the
    # same cube; triangle f<i>_<q> spans m and the cube edge along axis i at q.
    zero = (0, 0, 0)
    corners = list(product((0, 1), repeat=3))

    def spoke(p):
        return "s" + "".join(map(str, p))

    def tri(i, q):
        return f"f{_AXES[i]}_{''.join(map(str, q))}"

    orbits = [_orb("m", 0), _orb("c", 0)]
    for p in corners:
        orbits.append(_orb(spoke(p), 1, ("m", zero), ("c", p)))
    for i in range(3):
        orbits.append(_orb("e" + _AXES[i], 1, ("c", zero), ("c", _unit(3, i))))
    for i in range(3):
        for q in corners:
            if q[i]:
                continue
            q2 = tuple(x + (1 if j == i else 0) for j, x in enumerate(q))
            orbits.append(_orb(tri(i, q), 2, ("e" + _AXES[i], q), (spoke(q), zero), (spoke(q2), zero)))
    # octahedron o<j> sits on the cube face with normal j at x_j = 0 of cube 0:
    # the pyramid from cube 0 plus the pyramid from cube -e_j
    for j in range(3):
        faces = []
        for side, cell in ((0, zero), (1, tuple(-x for x in _unit(3, j)))):
            for i in range(3):
                if i == j:
                    continue
                for q in corners:
                    if q[i] or q[j] != side:
                        continue
                    faces.append((tri(i, q), cell))
        orbits.append(_orb("o" + _AXES[j], 3, *faces))
    return PeriodicCellComplex("oct3d", 3, tuple(orbits))


# Body-centred cubic Voronoi cell on the primitive lattice basis
# (-1,1,1), (1,-1,1), (1,1,-1): orbit representatives all lie on the
# boundary of the cell at the origin.
_TO_VERTS = ("v0", "v1", "v2", "v3", "v4", "v5")
_TO_EDGES = (
    ("e0", (("v0", (0, 0, 0)), ("v1", (0, 0, 0)))),
    ("e1", (("v0", (0, 0, 0)), ("v2", (0, 0, 0)))),
    ("e2", (("v0", (0, 0, 0)), ("v4", (0, 0, 0)))),
    ("e3", (("v1", (0, 0, 0)), ("v3", (0, 0, 0)))),
    ("e4", (("v1", (0, 0, 0)), ("v5", (0, 0, 0)))),
    ("e5", (("v2", (0, 0, 0)), ("v3", (0, 0, 0)))),
    ("e6", (("v2", (0, 0, 0)), ("v5", (1, 1, 0)))),
    ("e7", (("v3", (0, 0, 0)), ("v4", (1, 0, 1)))),
    ("e8", (("v4", (0, 0, 0)), ("v2", (-1, 0, 0)))),
    ("e9", (("v4", (0, 0, 0)), ("v1", (0, 1, 0)))),
    ("e10", (("v5", (0, 0, 0)), ("v3", (-1, 0, 0)))),
    ("e11", (("v5", (0, 0, 0)), ("v0", (0, 0, 1)))),
)
# hexagons first, then squares
_TO_FACES = (
    ("hx0", (("e0", (1, 1, 1)), ("e2", (1, 1, 1)), ("e4", (1, 1, 1)),
             ("e8", (1, 1, 1)), ("e10", (1, 1, 1)), ("e5", (0, 1, 1)))),
    ("hx1", (("e1", (0, 0, 1)), ("e2", (0, 0, 1)), ("e6", (0, 0, 1)),
             ("e9", (0, 0, 1)), ("e10", (1, 1, 1)), ("e3", (0, 1, 1)))),
    ("hx2", (("e3", (0, 1, 0)), ("e4", (0, 1, 0)), ("e7", (0, 1, 0)),
             ("e11", (0, 1, 0)), ("e8", (1, 1, 1)), ("e1", (0, 1, 1)))),
    ("hx3", (("e5", (-1, 0, 0)), ("e6", (-1, 0, 0)), ("e7", (-1, 0, 0)),
             ("e11", (0, 1, 0)), ("e9", (0, 0, 1)), ("e0", (0, 1, 1)))),
    ("sq0", (("e0", (0, 1, 1)), ("e1", (0, 1, 1)), ("e3", (0, 1, 1)), ("e5", (0, 1, 1)))),
    ("sq1", (("e8", (1, 0, 1)), ("e9", (1, 0, 1)), ("e6", (0, 0, 1)), ("e4", (1, 1, 1)))),
    ("sq2", (("e10", (1, 1, 0)), ("e11", (1, 1, 0)), ("e7", (0, 1, 0)), ("e2", (1, 1, 1)))),
)
_TO_CELL = (
    ("hx0", (0, 0, 0)), ("hx0", (-1, -1, -1)),
    ("hx1", (0, 0, 0)), ("hx1", (0, 0, -1)),
    ("hx2", (0, 0, 0)), ("hx2", (0, -1, 0)),
    ("hx3", (0, 0, 0)), ("hx3", (1, 0, 0)),
    ("sq0", (0, 0, 0)), ("sq0", (0, -1, -1)),
    ("sq1", (0, 0, 0)), ("sq1", (-1, 0, -1)),
    ("sq2", (0, 0, 0)), ("sq2", (-1, -1, 0)),
)


def _truncoct3d() -> PeriodicCellComplex:
    orbits = [_orb(v, 0) for v in _TO_VERTS]
    orbits += [_orb(e, 1, *b) for e, b in _TO_EDGES]
    orbits += [_orb(f, 2, *b) for f, b in _TO_FACES]
    orbits.append(_orb("t", 3, *_TO_CELL))
    return PeriodicCellComplex("truncoct3d", 3, tuple(orbits))


_BUILDERS = {
    "triangle2d": _triangle2d,
    "quad2d": _quad2d,
    "hexagon2d": _hexagon2d,
    "tet3d": _tet3d,
    "hex3d": _hex3d,
    "oct3d": _oct3d,
    "truncoct3d": _truncoct3d,
}


def builtin(mesh_id: str) -> PeriodicCellComplex:
    try:
        return _BUILDERS[mesh_id]()
    except KeyError:
        raise KeyError(f"unknown builtin mesh {mesh_id!r}; choose from {', '.join(BUILTIN_IDS)}") from None


def list_builtins() -> list[tuple[str, str]]:
    return [(mid, _DESCRIPTIONS[mid]) for mid in BUILTIN_IDS]
