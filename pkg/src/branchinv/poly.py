"""Bivariate polynomials over the rationals, sparse in (x, y).

These hold Weierstrass polynomials, semiroots and the coefficient pairs of
differential forms.  The x-coefficients may be truncated power series in
disguise: ``x_trunc`` marks the first unknown x-power (None means exact).

Key operations: substitution of a parametrization (pullback), Weierstrass
division by a monic-in-y polynomial, and implicitization of a
parametrization (t**n, phi(t)) into the monic degree-n polynomial that
vanishes on it.  Implicitization uses power sums of the conjugate roots:
sum over the n-th roots zeta of phi(zeta * x^(1/n))**m is rational because
contributions at t-exponents not divisible by n cancel, so the elementary
symmetric functions follow from Newton's identities without ever leaving
exact rational arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Optional

from .series import InsufficientTruncation, TruncatedSeries, _min_trunc


class NotMonic(ValueError):
    """Weierstrass division requires a monic divisor in y."""


class NotPrimitive(ValueError):
    """The parametrization is not primitive: gcd(n, support of phi) > 1."""


class PlaneCurvePoly:
    """Element of Q[[x]][y], sparse map (x_exp, y_exp) -> coefficient."""

    __slots__ = ("coeffs", "x_trunc")

    def __init__(
        self,
        coeffs: Mapping[tuple[int, int], Fraction],
        x_trunc: Optional[int] = None,
    ):
        clean = {}
        for (i, j), c in coeffs.items():
            c = Fraction(c)
            if c == 0:
                continue
            if i < 0 or j < 0:
                raise ValueError(f"negative exponent pair {(i, j)}")
            if x_trunc is not None and i >= x_trunc:
                continue
            clean[(int(i), int(j))] = c
        self.coeffs = clean
        self.x_trunc = x_trunc

    # -- constructors -----------------------------------------------------

    @staticmethod
    def zero(x_trunc: Optional[int] = None) -> "PlaneCurvePoly":
        return PlaneCurvePoly({}, x_trunc)

    @staticmethod
    def monomial(i: int, j: int, coeff=1) -> "PlaneCurvePoly":
        return PlaneCurvePoly({(i, j): Fraction(coeff)})

    @staticmethod
    def variable_x() -> "PlaneCurvePoly":
        return PlaneCurvePoly.monomial(1, 0)

    @staticmethod
    def variable_y() -> "PlaneCurvePoly":
        return PlaneCurvePoly.monomial(0, 1)

    # -- inspection -------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def y_degree(self) -> int:
        """Degree in y; -1 for the zero polynomial."""
        return max((j for _, j in self.coeffs), default=-1)

    def x_order(self) -> Optional[int]:
        return min((i for i, _ in self.coeffs), default=self.x_trunc)

    def y_coefficient(self, j: int) -> dict[int, Fraction]:
        """The x-series coefficient of y**j, as exponent -> value."""
        return {i: c for (i, jj), c in self.coeffs.items() if jj == j}

    def is_monic_in_y(self) -> bool:
        d = self.y_degree()
        if d < 0:
            return False
        lead = self.y_coefficient(d)
        return lead == {0: Fraction(1)}

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other: "PlaneCurvePoly") -> "PlaneCurvePoly":
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, Fraction(0)) + c
        return PlaneCurvePoly(out, _min_trunc(self.x_trunc, other.x_trunc))

    def __neg__(self) -> "PlaneCurvePoly":
        return PlaneCurvePoly(
            {k: -c for k, c in self.coeffs.items()}, self.x_trunc
        )

    def __sub__(self, other: "PlaneCurvePoly") -> "PlaneCurvePoly":
        return self + (-other)

    def __mul__(self, other: "PlaneCurvePoly") -> "PlaneCurvePoly":
        cands = []
        if self.x_trunc is not None:
            lo = other.x_order()
            if lo is None:  # other is exactly zero
                return PlaneCurvePoly.zero()
            cands.append(self.x_trunc + lo)
        if other.x_trunc is not None:
            lo = self.x_order()
            if lo is None:
                return PlaneCurvePoly.zero()
            cands.append(other.x_trunc + lo)
        trunc = min(cands) if cands else None
        out: dict[tuple[int, int], Fraction] = {}
        for (i1, j1), c1 in self.coeffs.items():
            for (i2, j2), c2 in other.coeffs.items():
                key = (i1 + i2, j1 + j2)
                if trunc is not None and key[0] >= trunc:
                    continue
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return PlaneCurvePoly(out, trunc)

    def scale(self, factor) -> "PlaneCurvePoly":
        factor = Fraction(factor)
        if factor == 0:
            return PlaneCurvePoly.zero(self.x_trunc)
        return PlaneCurvePoly(
            {k: c * factor for k, c in self.coeffs.items()}, self.x_trunc
        )

    def diff_x(self) -> "PlaneCurvePoly":
        return PlaneCurvePoly(
            {
                (i - 1, j): c * i
                for (i, j), c in self.coeffs.items()
                if i > 0
            },
            None if self.x_trunc is None else self.x_trunc - 1,
        )

    def diff_y(self) -> "PlaneCurvePoly":
        return PlaneCurvePoly(
            {
                (i, j - 1): c * j
                for (i, j), c in self.coeffs.items()
                if j > 0
            },
            self.x_trunc,
        )

    def truncate_x(self, n: Optional[int]) -> "PlaneCurvePoly":
        return PlaneCurvePoly(self.coeffs, _min_trunc(self.x_trunc, n))

    # -- substitution -----------------------------------------------------

    def substitute(
        self, x_of_t: TruncatedSeries, y_of_t: TruncatedSeries
    ) -> TruncatedSeries:
        """Pullback h(x(t), y(t)) by Horner evaluation in y."""
        if self.is_zero:
            return TruncatedSeries.zero(
                None
                if self.x_trunc is None
                else self.x_trunc * (x_of_t.order_lower_bound() or 0)
            )
        x_pows: dict[int, TruncatedSeries] = {
            0: TruncatedSeries({0: Fraction(1)}),
            1: x_of_t,
        }

        def x_power(i: int) -> TruncatedSeries:
            if i not in x_pows:
                x_pows[i] = x_power(i // 2) * x_power(i - i // 2)
            return x_pows[i]

        result = TruncatedSeries.zero()
        for j in range(self.y_degree(), -1, -1):
            result = result * y_of_t
            row = self.y_coefficient(j)
            for i, c in row.items():
                result = result + x_power(i).scale(c)
        if self.x_trunc is not None:
            x_ord = x_of_t.order()
            result = result.truncate(self.x_trunc * x_ord)
        return result

    # -- division ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PlaneCurvePoly)
            and self.coeffs == other.coeffs
            and self.x_trunc == other.x_trunc
        )

    def __hash__(self):
        return hash((frozenset(self.coeffs.items()), self.x_trunc))

    def __repr__(self) -> str:
        if not self.coeffs:
            return "<0>"
        parts = []
        for i, j in sorted(self.coeffs, key=lambda k: (k[1], k[0])):
            c = self.coeffs[(i, j)]
            term = f"{c}"
            if i:
                term += f"*x^{i}"
            if j:
                term += f"*y^{j}"
            parts.append(term)
        tail = "" if self.x_trunc is None else f" + O(x^{self.x_trunc})"
        return "<" + " + ".join(parts) + tail + ">"

    def to_list(self) -> list[list[int]]:
        return [
            [i, j, self.coeffs[(i, j)].numerator, self.coeffs[(i, j)].denominator]
            for i, j in sorted(self.coeffs)
        ]

    @staticmethod
    def from_list(items: Iterable, x_trunc: Optional[int] = None) -> "PlaneCurvePoly":
        return PlaneCurvePoly(
            {
                (int(i), int(j)): Fraction(int(num), int(den))
                for i, j, num, den in items
            },
            x_trunc,
        )


def weierstrass_divide(
    h: PlaneCurvePoly, f: PlaneCurvePoly
) -> tuple[PlaneCurvePoly, PlaneCurvePoly]:
    """Division h = q*f + r with deg_y(r) < deg_y(f), f monic in y."""
    if not f.is_monic_in_y():
        raise NotMonic(f"divisor is not monic in y: {f!r}")
    n = f.y_degree()
    q = PlaneCurvePoly.zero(_min_trunc(h.x_trunc, f.x_trunc))
    r = h.truncate_x(_min_trunc(h.x_trunc, f.x_trunc))
    while r.y_degree() >= n:
        j = r.y_degree()
        lead = PlaneCurvePoly(
            {(i, j - n): c for i, c in r.y_coefficient(j).items()}, r.x_trunc
        )
        q = q + lead
        r = r - lead * f
    return q, r


def implicitize(n: int, phi: TruncatedSeries) -> PlaneCurvePoly:
    """Monic degree-n polynomial in y vanishing on (t**n, phi(t)).

    Equals the resultant in t of (t**n - x) and (y - phi(t)); computed via
    power sums p_m(x) = sum over n-divisible exponents of n * [t^i](phi^m)
    * x^(i/n) and Newton's identities, which keeps everything rational.
    """
    if n < 1:
        raise ValueError("ramification index must be positive")
    support = phi.support()
    if gcd(n, gcd(*support) if support else 0) != 1:
        raise NotPrimitive(
            f"gcd of {n} and the exponent support {support} exceeds 1"
        )
    phi_power = TruncatedSeries({0: Fraction(1)})
    power_sums = []
    for _ in range(n):
        phi_power = phi_power * phi
        coeffs = {
            i // n: c * n for i, c in phi_power.coeffs.items() if i % n == 0
        }
        trunc = phi_power.trunc
        power_sums.append(
            TruncatedSeries(coeffs, None if trunc is None else -(-trunc // n))
        )
    elementary = [TruncatedSeries({0: Fraction(1)})]
    for m in range(1, n + 1):
        acc = TruncatedSeries.zero()
        for i in range(1, m + 1):
            term = elementary[m - i] * power_sums[i - 1]
            acc = acc + (term if i % 2 == 1 else -term)
        elementary.append(acc.scale(Fraction(1, m)))
    out: dict[tuple[int, int], Fraction] = {}
    x_trunc = None
    for k in range(n + 1):
        e_k = elementary[k]
        x_trunc = _min_trunc(x_trunc, e_k.trunc)
        sign = 1 if k % 2 == 0 else -1
        for i, c in e_k.coeffs.items():
            out[(i, n - k)] = out.get((i, n - k), Fraction(0)) + sign * c
    return PlaneCurvePoly(out, x_trunc)
