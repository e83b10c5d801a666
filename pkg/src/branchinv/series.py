"""Exact truncated power series in one variable over the rationals.

A series carries a sparse exponent -> coefficient map together with a
truncation order: coefficients at exponents >= ``trunc`` are *unknown*,
not zero.  ``trunc is None`` marks a fully known (polynomial) series.
Truncations propagate pessimistically through arithmetic, so an order or
coefficient read below the truncation of a result is always trustworthy.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Optional


class OrderUnknown(ArithmeticError):
    """The series is zero up to its truncation, so its order is undecidable."""


class InsufficientTruncation(ArithmeticError):
    """A computation needed coefficients beyond the known window."""


def _min_trunc(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class TruncatedSeries:
    """Sparse exact power series sum(c_i * t**i) known below ``trunc``."""

    __slots__ = ("coeffs", "trunc")

    def __init__(self, coeffs: Mapping[int, Fraction], trunc: Optional[int] = None):
        clean = {}
        for e, c in coeffs.items():
            c = Fraction(c)
            if c == 0:
                continue
            if e < 0:
                raise ValueError(f"negative exponent {e}")
            if trunc is not None and e >= trunc:
                continue
            clean[int(e)] = c
        self.coeffs = clean
        self.trunc = trunc

    @staticmethod
    def zero(trunc: Optional[int] = None) -> "TruncatedSeries":
        return TruncatedSeries({}, trunc)

    @staticmethod
    def monomial(exp: int, coeff=1, trunc: Optional[int] = None) -> "TruncatedSeries":
        return TruncatedSeries({exp: Fraction(coeff)}, trunc)

    # -- inspection -------------------------------------------------------

    @property
    def is_exact_zero(self) -> bool:
        return not self.coeffs and self.trunc is None

    @property
    def is_zero_below_trunc(self) -> bool:
        return not self.coeffs

    def order(self) -> int:
        if not self.coeffs:
            if self.trunc is None:
                raise OrderUnknown("series is exactly zero")
            raise OrderUnknown(f"series vanishes up to its truncation {self.trunc}")
        return min(self.coeffs)

    def order_lower_bound(self) -> Optional[int]:
        """min exponent with a known nonzero coefficient, else the truncation
        (None for the exact zero series, whose order is +infinity)."""
        if self.coeffs:
            return min(self.coeffs)
        return self.trunc

    def leading_coeff(self) -> Fraction:
        return self.coeffs[self.order()]

    def coefficient(self, exp: int) -> Fraction:
        if self.trunc is not None and exp >= self.trunc:
            raise InsufficientTruncation(
                f"coefficient of t^{exp} unknown beyond truncation {self.trunc}"
            )
        return self.coeffs.get(exp, Fraction(0))

    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self.coeffs))

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        trunc = _min_trunc(self.trunc, other.trunc)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, Fraction(0)) + c
        return TruncatedSeries(out, trunc)

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries({e: -c for e, c in self.coeffs.items()}, self.trunc)

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self + (-other)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        if self.is_exact_zero or other.is_exact_zero:
            return TruncatedSeries.zero()
        cands = []
        if self.trunc is not None:
            lo = other.order_lower_bound()
            cands.append(self.trunc + (lo if lo is not None else 0))
        if other.trunc is not None:
            lo = self.order_lower_bound()
            cands.append(other.trunc + (lo if lo is not None else 0))
        trunc = min(cands) if cands else None
        out: dict[int, Fraction] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                if trunc is not None and e >= trunc:
                    continue
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return TruncatedSeries(out, trunc)

    def scale(self, factor) -> "TruncatedSeries":
        factor = Fraction(factor)
        if factor == 0:
            return TruncatedSeries.zero(self.trunc)
        return TruncatedSeries(
            {e: c * factor for e, c in self.coeffs.items()}, self.trunc
        )

    def shift(self, k: int) -> "TruncatedSeries":
        """Multiply by t**k (k >= 0)."""
        if k < 0:
            raise ValueError("negative shift")
        return TruncatedSeries(
            {e + k: c for e, c in self.coeffs.items()},
            None if self.trunc is None else self.trunc + k,
        )

    def derivative(self) -> "TruncatedSeries":
        return TruncatedSeries(
            {e - 1: c * e for e, c in self.coeffs.items() if e > 0},
            None if self.trunc is None else self.trunc - 1,
        )

    def truncate(self, n: Optional[int]) -> "TruncatedSeries":
        return TruncatedSeries(self.coeffs, _min_trunc(self.trunc, n))

    def power(self, m: int) -> "TruncatedSeries":
        if m < 0:
            raise ValueError("negative power")
        result = TruncatedSeries({0: Fraction(1)})
        base = self
        while m:
            if m & 1:
                result = result * base
            base = base * base if m > 1 else base
            m >>= 1
        return result

    # -- misc -------------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TruncatedSeries)
            and self.coeffs == other.coeffs
            and self.trunc == other.trunc
        )

    def __hash__(self):
        return hash((frozenset(self.coeffs.items()), self.trunc))

    def __repr__(self) -> str:
        if not self.coeffs:
            body = "0"
        else:
            parts = []
            for e in sorted(self.coeffs):
                c = self.coeffs[e]
                parts.append(f"{c}*t^{e}" if e else f"{c}")
            body = " + ".join(parts)
        tail = "" if self.trunc is None else f" + O(t^{self.trunc})"
        return f"<{body}{tail}>"

    def to_list(self) -> list[list[int]]:
        return [
            [e, self.coeffs[e].numerator, self.coeffs[e].denominator]
            for e in sorted(self.coeffs)
        ]

    @staticmethod
    def from_list(items: Iterable, trunc: Optional[int] = None) -> "TruncatedSeries":
        return TruncatedSeries(
            {int(e): Fraction(int(num), int(den)) for e, num, den in items}, trunc
        )
