"""Exact univariate polynomials in the degree variable ``k``."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Union

Number = Union[int, Fraction]


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot use {value!r} as an exact coefficient")


class RationalPolynomial:
    """Polynomial with :class:`~fractions.Fraction` coefficients.

    ``coeffs[i]`` is the coefficient of ``k**i``. Trailing zeros are stripped
    on construction, so the zero polynomial has an empty coefficient tuple and
    two polynomials are equal iff their coefficient tuples are equal.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def constant(cls, value) -> "RationalPolynomial":
        return cls([value])

    @classmethod
    def k(cls) -> "RationalPolynomial":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, power: int) -> Fraction:
        if 0 <= power < len(self.coeffs):
            return self.coeffs[power]
        return Fraction(0)

    # arithmetic

    @staticmethod
    def _coerce(other) -> "RationalPolynomial":
        if isinstance(other, RationalPolynomial):
            return other
        return RationalPolynomial([_as_fraction(other)])

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return RationalPolynomial(self.coefficient(i) + other.coefficient(i) for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return RationalPolynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return RationalPolynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RationalPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            return NotImplemented
        result = RationalPolynomial([1])
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, RationalPolynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == RationalPolynomial([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def shift(self, offset) -> "RationalPolynomial":
        """Return ``p(k + offset)``."""
        result = RationalPolynomial()
        arg = RationalPolynomial([offset, 1])
        for c in reversed(self.coeffs):
            result = result * arg + c
        return result

    def __call__(self, k) -> Fraction:
        """Horner evaluation; exact for integer or rational ``k``."""
        k = _as_fraction(k)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * k + c
        return acc

    # rendering

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"RationalPolynomial({self.format()!r})"

    def format(self, var: str = "k") -> str:
        """Canonical text form, descending powers: ``"3/2*k^2 - k + 1"``."""
        if not self.coeffs:
            return "0"
        parts: list[str] = []
        for power in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[power]
            if c == 0:
                continue
            mag = abs(c)
            if power == 0:
                body = str(mag)
            else:
                mono = var if power == 1 else f"{var}^{power}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return " ".join(parts)

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Iterable[str]) -> "RationalPolynomial":
        return cls(Fraction(c) for c in data)


def binomial_poly(offset: int, r: int) -> RationalPolynomial:
    """``C(k + offset, r)`` as a polynomial in ``k`` (falling-factorial form)."""
    if r < 0:
        return RationalPolynomial()
    result = RationalPolynomial([1])
    for j in range(r):
        result = result * RationalPolynomial([Fraction(offset - j, j + 1), Fraction(1, j + 1)])
    return result
