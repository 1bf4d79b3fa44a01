"""Local unknown counts per method and mesh entity, numeric and symbolic in k."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import comb

from .polynomial import RationalPolynomial, binomial_poly


class Method(str, enum.Enum):
    DG = "DG"
    TDG1 = "TDG1"
    TDG2 = "TDG2"
    HDG = "HDG"
    HHO = "HHO"
    VEM = "VEM"

    def __str__(self):
        return self.value


# Presentation order used by tables.
METHOD_ORDER = (Method.DG, Method.TDG2, Method.TDG1, Method.HDG, Method.HHO, Method.VEM)
ELEMENT_METHODS = (Method.DG, Method.TDG1, Method.TDG2)
FACET_METHODS = (Method.HDG, Method.HHO)


@dataclass(frozen=True)
class DofRole:
    """Where unknowns live: ``"element"``, ``"facet"`` or ``"sub"`` with ``dim``."""

    kind: str
    dim: int = -1

    @classmethod
    def element(cls) -> "DofRole":
        return cls("element")

    @classmethod
    def facet(cls) -> "DofRole":
        return cls("facet")

    @classmethod
    def sub(cls, m: int) -> "DofRole":
        return cls("sub", m)

    def __str__(self):
        return f"sub({self.dim})" if self.kind == "sub" else self.kind


class RoleError(ValueError):
    pass


def _binom(n: int, r: int) -> int:
    if n < 0 or r < 0:
        return 0
    return comb(n, r)


def _check(method: Method, role: DofRole, d: int):
    method = Method(method)
    if d not in (2, 3):
        raise ValueError(f"dimension must be 2 or 3, got {d}")
    ok = (
        (method in ELEMENT_METHODS and role.kind == "element")
        or (method in FACET_METHODS and role.kind == "facet")
        or (method is Method.VEM and role.kind == "sub" and 0 <= role.dim <= d)
    )
    if not ok:
        raise RoleError(f"role {role} is not meaningful for {method.value}")
    return method


def local_ndof(method: Method, role: DofRole, d: int, k: int) -> int:
    """Coupling unknowns on one entity after static condensation."""
    method = _check(method, role, d)
    if k < 1:
        raise ValueError(f"polynomial degree must be >= 1, got {k}")
    if method is Method.DG:
        return _binom(k + d, d)
    if method is Method.TDG2:
        return _binom(k + d, d) - _binom(k - 2 + d, d)
    if method is Method.TDG1:
        return _binom(k + d, d) - _binom(k - 1 + d, d)
    if method is Method.HDG:
        return _binom(k + d - 1, d - 1)
    if method is Method.HHO:
        return _binom(k - 1 + d - 1, d - 1)
    # VEM: element moments are condensed away
    m = role.dim
    if m == d:
        return 0
    if m == 0:
        return 1
    return _binom(k - 2 + m, m)


def local_ndof_poly(method: Method, role: DofRole, d: int) -> RationalPolynomial:
    """Polynomial form of :func:`local_ndof`; agrees with it for every k >= 1."""
    method = _check(method, role, d)
    if method is Method.DG:
        return binomial_poly(d, d)
    if method is Method.TDG2:
        return binomial_poly(d, d) - binomial_poly(d - 2, d)
    if method is Method.TDG1:
        return binomial_poly(d, d) - binomial_poly(d - 1, d)
    if method is Method.HDG:
        return binomial_poly(d - 1, d - 1)
    if method is Method.HHO:
        return binomial_poly(d - 2, d - 1)
    m = role.dim
    if m == d:
        return RationalPolynomial()
    if m == 0:
        return RationalPolynomial([1])
    return binomial_poly(m - 2, m)


# Smallest k for which local_ndof_poly(...)(k) == local_ndof(...). Every entry
# of the table vanishes polynomially where the count is truncated, so this is 1.
VALIDITY_MIN_K = 1


def vem_element_moments_poly(d: int) -> RationalPolynomial:
    """VEM element-interior unknowns before condensation, ``C(k-2+d, d)``."""
    return binomial_poly(d - 2, d)
