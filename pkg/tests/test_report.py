from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from polysparse.dof_model import METHOD_ORDER
from polysparse.fixtures import reference_fixture
from polysparse.report import ErrataEntry, compare_fixture, decimal_str, fraction_str

from conftest import derived


@pytest.mark.parametrize("x, text", [
    (Fraction(1, 6), "0.2"),
    (Fraction(10, 3), "3.3"),
    (Fraction(135, 2), "67.5"),
    (Fraction(36), "36"),
    (Fraction(1, 4), "0.3"),
    (Fraction(1, 20), "0.1"),
    (Fraction(0), "0"),
    (Fraction(-1, 4), "-0.3"),
    (Fraction(-1, 100), "0"),
    (Fraction(7607, 3), "2535.7"),
])
def test_decimal_rounding(x, text):
    assert decimal_str(x) == text


@given(st.fractions(max_denominator=60).filter(lambda f: 0 <= f < 10**6))
def test_decimal_is_within_half_a_tenth(x):
    text = decimal_str(x)
    assert abs(Fraction(text) - x) <= Fraction(1, 20)
    assert not text.endswith(".0")


def test_fraction_str():
    assert fraction_str(Fraction(3, 2)) == "3/2" and fraction_str(Fraction(4, 2)) == "2"


def test_errata_entry_requires_difference():
    with pytest.raises(ValueError):
        ErrataEntry("m", "loc", 3, 3)


@pytest.mark.parametrize("mesh", ["triangle2d", "quad2d", "hexagon2d"])
def test_no_errata_in_2d(mesh):
    assert compare_fixture(reference_fixture(mesh, "printed"), derived(mesh), METHOD_ORDER) == []


def test_tet_errata():
    entries = compare_fixture(reference_fixture("tet3d", "printed"), derived("tet3d"), METHOD_ORDER)
    found = {e.location: (e.printed, e.derived) for e in entries}
    assert found["(V,1) Nb(Ed)"] == (43, 50)
    assert found["(V,1) Nb(Fa)"] == (57, 60)
    assert found["(Fa,1) Nb(Fa)"] == (6, 7)
    face = next(e for e in entries if e.location == "(Fa,1) Nb(Fa)")
    assert ("HDG nnze", 1) in face.effects


def test_truncoct_face_ratio_swap_is_one_entry():
    entries = compare_fixture(reference_fixture("truncoct3d", "printed"), derived("truncoct3d"), METHOD_ORDER)
    locations = [e.location for e in entries]
    assert locations == ["(V,1) R", "(Fa,1)/(Fa,2) R"]
    swap = entries[1]
    assert swap.effects == [("VEM nnze", 2)]
