"""Closed-form ncdof / nnze per element from topology statistics.

All results are :class:`RationalPolynomial` values in the degree ``k``,
normalized by the number of elements.
"""

from __future__ import annotations

import enum
from fractions import Fraction

from .dof_model import (
    ELEMENT_METHODS,
    FACET_METHODS,
    VALIDITY_MIN_K,
    DofRole,
    Method,
    local_ndof_poly,
    vem_element_moments_poly,
)
from .polynomial import RationalPolynomial
from .topology_stats import TopologyClass, TopologyStats


class Metric(str, enum.Enum):
    NDOF = "ndof"
    NCDOF = "ncdof"
    NNZE = "nnze"

    def __str__(self):
        return self.value


class FormulaError(ValueError):
    pass


def _zero() -> RationalPolynomial:
    return RationalPolynomial()


def _nb(cls: TopologyClass, m: int) -> int:
    try:
        return cls.nb[m]
    except KeyError:
        raise FormulaError(f"class {cls.label} has no neighbor count for dimension {m}") from None


def _vem_sub(d: int, m: int) -> RationalPolynomial:
    return local_ndof_poly(Method.VEM, DofRole.sub(m), d)


def ncdof_poly(method: Method, stats: TopologyStats) -> RationalPolynomial:
    method = Method(method)
    d = stats.dimension
    total = _zero()
    if method in ELEMENT_METHODS:
        per = local_ndof_poly(method, DofRole.element(), d)
        for c in stats.of_dim(d):
            total += per * c.ratio
    elif method in FACET_METHODS:
        per = local_ndof_poly(method, DofRole.facet(), d)
        for c in stats.of_dim(d - 1):
            total += per * c.ratio
    else:
        for c in stats.classes:
            if c.dim < d:
                total += _vem_sub(d, c.dim) * c.ratio
    return total


def nnze_poly(method: Method, stats: TopologyStats) -> RationalPolynomial:
    method = Method(method)
    d = stats.dimension
    total = _zero()
    if method in ELEMENT_METHODS:
        per = local_ndof_poly(method, DofRole.element(), d)
        for c in stats.of_dim(d):
            total += per * per * (c.ratio * (_nb(c, d - 1) + 1))
    elif method in FACET_METHODS:
        per = local_ndof_poly(method, DofRole.facet(), d)
        for c in stats.of_dim(d - 1):
            total += per * per * (c.ratio * _nb(c, d - 1))
    else:
        for c in stats.classes:
            if c.dim == d:
                continue  # condensed element moments
            row = _zero()
            for m in range(d):
                row += _vem_sub(d, m) * _nb(c, m)
            total += _vem_sub(d, c.dim) * row * c.ratio
    return total


def ndof_total_poly(method: Method, stats: TopologyStats) -> RationalPolynomial:
    """Unknowns per element before static condensation."""
    method = Method(method)
    d = stats.dimension
    if method in ELEMENT_METHODS:
        return ncdof_poly(method, stats)
    if method is Method.HHO:
        raise FormulaError("HHO element-unknown degree is unspecified; no pre-condensation total")
    if method is Method.HDG:
        return local_ndof_poly(Method.DG, DofRole.element(), d) + ncdof_poly(Method.HDG, stats)
    total = _zero()
    for c in stats.classes:
        per = vem_element_moments_poly(d) if c.dim == d else _vem_sub(d, c.dim)
        total += per * c.ratio
    return total


def metric_poly(method: Method, metric: Metric, stats: TopologyStats) -> RationalPolynomial:
    metric = Metric(metric)
    if metric is Metric.NCDOF:
        return ncdof_poly(method, stats)
    if metric is Metric.NNZE:
        return nnze_poly(method, stats)
    return ndof_total_poly(method, stats)


def evaluate(poly: RationalPolynomial, k: int, min_k: int = VALIDITY_MIN_K) -> Fraction:
    if k < min_k:
        raise ValueError(f"k = {k} is below the validity threshold {min_k}")
    return poly(k)
