import io
from fractions import Fraction

import pytest
import scipy.io
from hypothesis import given, settings, strategies as st

from polysparse.assembly_oracle import (
    MM_HEADER,
    CouplingPattern,
    coupling_pattern,
    enumerate_coupling_dofs,
    export_pattern,
    oracle_counts,
    stability_check,
    torus_for,
)
from polysparse.builtin_meshes import BUILTIN_IDS
from polysparse.dof_model import METHOD_ORDER, DofRole, Method, local_ndof
from polysparse.formula_engine import nnze_poly

from conftest import derived


@pytest.mark.parametrize("mesh, n, method, k, per_element", [
    ("triangle2d", 4, Method.HDG, 3, 6),
    ("hex3d", 3, Method.VEM, 1, 1),
    ("quad2d", 3, Method.DG, 1, 3),
])
def test_dof_enumeration_examples(mesh, n, method, k, per_element):
    t = torus_for(mesh, n)
    dm = enumerate_coupling_dofs(t, method, k)
    assert Fraction(dm.total, len(t.elements())) == per_element


def test_dof_ranges_are_contiguous_and_ordered():
    t = torus_for("triangle2d", 3)
    dm = enumerate_coupling_dofs(t, Method.VEM, 3)
    assert [t.dims[e] for e in dm.entities] == sorted(t.dims[e] for e in dm.entities)
    start = 0
    for e in dm.entities:
        assert dm.ranges[e].start == start
        start = dm.ranges[e].stop
    assert start == dm.total
    assert all(t.dims[e] < 2 for e in dm.entities)


def test_rejects_k0_and_bad_order():
    t = torus_for("quad2d", 3)
    with pytest.raises(ValueError):
        enumerate_coupling_dofs(t, Method.DG, 0)
    with pytest.raises(ValueError):
        enumerate_coupling_dofs(t, Method.DG, 1, order=[0])


@pytest.mark.parametrize("mesh, n, method, k, per_element", [
    ("quad2d", 4, Method.HDG, 1, 56),
    ("triangle2d", 4, Method.VEM, 1, Fraction(7, 2)),
    ("hex3d", 3, Method.VEM, 2, 459),
])
def test_pattern_examples(mesh, n, method, k, per_element):
    assert coupling_pattern(torus_for(mesh, n), method, k).nnze_per_element == per_element


@pytest.mark.parametrize("mesh, method, k, tiling, key, value", [
    ("hexagon2d", Method.TDG2, 3, 4, "nnze_per_element", 343),
    ("oct3d", Method.HDG, 3, 3, "ncdof_per_element", 40),
    ("truncoct3d", Method.TDG1, 2, 3, "nnze_per_element", 540),
])
def test_oracle_count_examples(mesh, method, k, tiling, key, value):
    assert oracle_counts(mesh, method, k, tiling)[key] == value


def test_oracle_needs_tiling_three():
    with pytest.raises(ValueError):
        oracle_counts("quad2d", Method.DG, 1, 2)


def test_stability_examples():
    ok = stability_check("triangle2d", Method.DG, 1, 3, 4)
    assert ok.passed and ok.nnze_per_element == (36, 36)
    collapsed = stability_check("quad2d", Method.DG, 1, 1, 3)
    assert not collapsed.passed and collapsed.nnze_per_element == (9, 45)
    assert stability_check("tet3d", Method.VEM, 2, 3, 4).passed
    with pytest.raises(ValueError):
        stability_check("quad2d", Method.DG, 1, 3, 3)


@pytest.mark.parametrize("mesh", BUILTIN_IDS)
@pytest.mark.parametrize("method", METHOD_ORDER)
def test_patterns_symmetric_with_full_diagonal_blocks(mesh, method):
    p = coupling_pattern(torus_for(mesh, 3), method, 2)
    assert p.is_symmetric() and p.has_complete_diagonal_blocks()


def test_explicit_pattern_properties():
    p = coupling_pattern(torus_for("triangle2d", 3), Method.VEM, 3, explicit=True)
    assert len(p.pairs) == p.nnz == len(set(p.pairs))
    assert p.is_symmetric() and p.has_complete_diagonal_blocks()


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(BUILTIN_IDS), st.sampled_from(METHOD_ORDER), st.integers(1, 4), st.randoms())
def test_nnz_invariant_under_relabeling(mesh, method, k, rnd):
    t = torus_for(mesh, 3)
    base = coupling_pattern(t, method, k)
    order = list(base.dof_map.entities)
    rnd.shuffle(order)
    assert coupling_pattern(t, method, k, order=order).nnz == base.nnz


@pytest.mark.parametrize("mesh", BUILTIN_IDS)
def test_dg_block_count_is_the_dg_formula(mesh):
    s = derived(mesh)
    d = s.dimension
    t = torus_for(mesh, 3)
    p = coupling_pattern(t, Method.DG, 1)
    blocks = Fraction(len(p.blocks), len(t.elements()))
    assert blocks == sum(c.ratio * (c.nb[d - 1] + 1) for c in s.of_dim(d))
    ndof = local_ndof(Method.DG, DofRole.element(), d, 1)
    assert nnze_poly(Method.DG, s)(1) == blocks * ndof ** 2


def test_export_matrix_market(tmp_path):
    p = coupling_pattern(torus_for("triangle2d", 3), Method.HDG, 1, explicit=True)
    path = tmp_path / "hdg.mtx"
    export_pattern(p, path)
    lines = path.read_text().splitlines()
    assert lines[0] == MM_HEADER
    assert lines[1] == "54 54 540"
    entries = [tuple(map(int, ln.split())) for ln in lines[2:]]
    assert entries == sorted(entries) and min(min(e) for e in entries) == 1
    m = scipy.io.mmread(str(path)).tocsr()
    assert m.nnz == 540 and (m != m.T).nnz == 0


def test_export_empty_pattern():
    empty = CouplingPattern(0, 0, 1, frozenset(), None, [])
    buf = io.StringIO()
    export_pattern(empty, buf)
    assert buf.getvalue().splitlines()[1] == "0 0 0"


def test_export_needs_explicit_pairs(tmp_path):
    p = coupling_pattern(torus_for("quad2d", 3), Method.DG, 1)
    with pytest.raises(ValueError):
        export_pattern(p, tmp_path / "x.mtx")


def test_export_write_failure(tmp_path):
    p = coupling_pattern(torus_for("quad2d", 3), Method.DG, 1, explicit=True)
    with pytest.raises(OSError):
        export_pattern(p, tmp_path / "missing" / "x.mtx")
