from math import comb

import pytest
from hypothesis import given, strategies as st

from polysparse.dof_model import (
    ELEMENT_METHODS,
    DofRole,
    Method,
    RoleError,
    local_ndof,
    local_ndof_poly,
    vem_element_moments_poly,
)
from polysparse.polynomial import RationalPolynomial

E, F = DofRole.element(), DofRole.facet()


def roles(d):
    for m in ELEMENT_METHODS:
        yield m, E
    yield Method.HDG, F
    yield Method.HHO, F
    for sub in range(d + 1):
        yield Method.VEM, DofRole.sub(sub)


@pytest.mark.parametrize("method, role, d, k, expected", [
    (Method.DG, E, 3, 2, 10),
    (Method.TDG2, E, 2, 5, 11),
    (Method.VEM, DofRole.sub(1), 2, 1, 0),
    (Method.HHO, F, 3, 1, 1),
    (Method.VEM, DofRole.sub(0), 3, 4, 1),
    (Method.VEM, DofRole.sub(3), 3, 4, 0),
    (Method.TDG1, E, 2, 3, 4),
])
def test_examples(method, role, d, k, expected):
    assert local_ndof(method, role, d, k) == expected


@pytest.mark.parametrize("method, role, d, coeffs", [
    (Method.HDG, F, 2, [1, 1]),
    (Method.TDG2, E, 3, [1, 2, 1]),
    (Method.TDG1, E, 3, [1, "3/2", "1/2"]),
])
def test_polynomial_examples(method, role, d, coeffs):
    assert local_ndof_poly(method, role, d) == RationalPolynomial(coeffs)


@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("k", range(1, 11))
def test_polynomial_agrees_with_count_from_k1(d, k):
    for method, role in roles(d):
        assert local_ndof_poly(method, role, d)(k) == local_ndof(method, role, d, k)


@given(st.sampled_from([2, 3]), st.integers(1, 30))
def test_orderings_and_identities(d, k):
    dg, t2, t1 = (local_ndof(m, E, d, k) for m in (Method.DG, Method.TDG2, Method.TDG1))
    assert t1 <= t2 <= dg
    dg_lower = comb(k - 2 + d, d) if k >= 2 else 0
    assert t2 == dg - dg_lower
    if k >= 2:
        assert local_ndof(Method.HHO, F, d, k) == local_ndof(Method.HDG, F, d, k - 1)


@pytest.mark.parametrize("method, role", [
    (Method.DG, F), (Method.HDG, E), (Method.VEM, E), (Method.HHO, DofRole.sub(0)),
])
def test_role_mismatch(method, role):
    with pytest.raises(RoleError):
        local_ndof(method, role, 2, 1)
    with pytest.raises(RoleError):
        local_ndof_poly(method, role, 2)


def test_rejects_k0_and_bad_dimension():
    with pytest.raises(ValueError):
        local_ndof(Method.DG, E, 2, 0)
    with pytest.raises(ValueError):
        local_ndof(Method.DG, E, 4, 1)


def test_vem_element_moments():
    assert [vem_element_moments_poly(2)(k) for k in (1, 2, 3)] == [0, 1, 3]
    assert [vem_element_moments_poly(3)(k) for k in (1, 2, 3)] == [0, 1, 4]
