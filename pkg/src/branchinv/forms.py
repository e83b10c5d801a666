"""Differential forms on a plane branch.

The pullback of a form A dx + B dy along (t**n, phi(t)) is
t * (A(x(t), y(t)) x'(t) + B(x(t), y(t)) y'(t)); its order is the value of
the form.  The set of values of all non-torsion forms is an analytic
invariant refining the value semigroup: it contains every nonzero
semigroup element, and the number of gap-values it picks up is exactly
mu - tau.

Alongside the value set this module computes the Jacobian pairing
P(w) = A f_y - B f_x (the coefficient of w wedge df), the logarithmic
forms (P(w) divisible by f) with their cofactors, the Weierstrass-form
splitting of an arbitrary form, the value set of the Jacobian ideal, and
the two transfer gadgets for semiroots: the maximal attainable
dy-coefficient valuation among forms of a fixed value, and the induced
injection of semiroot gap-values into the parent's.

Sign convention, used consistently: w = A dx + B dy and
P(w) = A f_y - B f_x.  Statements about leading coefficients pick up a
sign relative to sources that write w = A dx - B dy.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .branch import PuiseuxBranch
from .closure import module_order_minima, values_in_window
from .jets import Echelon, feasible_with_nonzeros, kernel_basis
from .poly import PlaneCurvePoly, weierstrass_divide
from .semigroup import NumericalSemigroup
from .series import InsufficientTruncation, TruncatedSeries


class TorsionOrTruncation(ArithmeticError):
    """The form pulls back to zero: torsion class (or window too small)."""


class WindowTooLarge(ValueError):
    """Requested search window exceeds what the machinery supports."""


class DeltaInSemigroup(ValueError):
    """The value is a semigroup member, where the maximum is unbounded."""


class DeltaNotValue(ValueError):
    """The integer is not a value of any differential form."""


class NotLogarithmic(ValueError):
    """The form's Jacobian pairing is not divisible by the equation."""


@dataclass(frozen=True)
class DifferentialForm:
    """w = a dx + b dy with polynomial coefficients."""

    a: PlaneCurvePoly
    b: PlaneCurvePoly

    @staticmethod
    def differential(h: PlaneCurvePoly) -> "DifferentialForm":
        return DifferentialForm(h.diff_x(), h.diff_y())

    def __add__(self, other: "DifferentialForm") -> "DifferentialForm":
        return DifferentialForm(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "DifferentialForm") -> "DifferentialForm":
        return DifferentialForm(self.a - other.a, self.b - other.b)

    def scale(self, c) -> "DifferentialForm":
        return DifferentialForm(self.a.scale(c), self.b.scale(c))

    def to_json(self) -> str:
        return json.dumps({"a": self.a.to_list(), "b": self.b.to_list()})

    @staticmethod
    def from_json(text: str) -> "DifferentialForm":
        data = json.loads(text)
        return DifferentialForm(
            PlaneCurvePoly.from_list(data["a"]),
            PlaneCurvePoly.from_list(data["b"]),
        )


@dataclass(frozen=True)
class ValueSet:
    """Values of differentials: the semigroup, the attained gap-values, and
    the threshold above which every integer is a value."""

    semigroup: NumericalSemigroup
    extra: tuple[int, ...]
    guarantee: int

    def contains_value(self, v: int) -> bool:
        if v < 1:
            return False
        return v in self.extra or self.semigroup.contains(v)

    def missing_gaps(self) -> tuple[int, ...]:
        """Positive integers that are not values (always gap numbers)."""
        return tuple(g for g in self.semigroup.gaps() if g not in self.extra)

    def to_json(self) -> str:
        mu = self.semigroup.conductor
        return json.dumps(
            {
                "semigroup": list(self.semigroup.generators),
                "lambda_minus_gamma": list(self.extra),
                "tau": mu - len(self.extra),
                "mu": mu,
            }
        )


# -- values of forms ----------------------------------------------------------


def form_pullback(branch: PuiseuxBranch, form: DifferentialForm) -> TruncatedSeries:
    x, phi = branch.x_series(), branch.phi
    return (
        form.a.substitute(x, phi) * branch.x_derivative_times_t()
        + form.b.substitute(x, phi) * branch.y_derivative_times_t()
    )


def form_value(
    branch: PuiseuxBranch, form: DifferentialForm
) -> tuple[int, Fraction]:
    s = form_pullback(branch, form)
    if s.is_zero_below_trunc:
        raise TorsionOrTruncation(
            "form pulls back to zero"
            + ("" if s.trunc is None else f" up to t^{s.trunc}")
        )
    return s.order(), s.leading_coeff()


def differential_values(branch: PuiseuxBranch) -> ValueSet:
    """The value set of differentials, exact on [1, mu)."""
    s = branch.semigroup
    if s.is_natural:
        return ValueSet(s, (), 1)
    mu, v0 = s.conductor, s.multiplicity
    bound = mu + v0
    if branch.trunc < bound:
        raise InsufficientTruncation(
            f"window {branch.trunc} below the closure bound {bound}"
        )
    minima = module_order_minima(
        [branch.x_derivative_times_t(), branch.y_derivative_times_t()],
        branch.phi,
        v0,
        bound,
    )
    table = s.membership_table(bound)
    for r in range(1, bound + 1):
        if table[r] and minima.get(r % v0, bound + 1) > r:
            raise AssertionError(
                f"semigroup value {r} missed by the closure on {branch}"
            )
    extra = tuple(
        g for g in s.gaps() if minima.get(g % v0, bound + 1) <= g
    )
    return ValueSet(s, extra, mu)


def tjurina_number(
    branch: PuiseuxBranch, values: Optional[ValueSet] = None
) -> int:
    """mu minus the number of attained gap-values."""
    if values is None:
        values = differential_values(branch)
    return branch.semigroup.conductor - len(values.extra)


def delta_values(values: ValueSet, lo: int, hi: int) -> tuple[int, ...]:
    """The residue-value dual on [lo, hi]: nonzero d with -d not a value."""
    return tuple(
        d
        for d in range(lo, hi + 1)
        if d != 0 and not values.contains_value(-d)
    )


def jacobian_value_set(
    branch: PuiseuxBranch, f: Optional[PlaneCurvePoly] = None
) -> tuple[int, ...]:
    """Values of the ideal generated by the two partials of the equation,
    reported on [mu - 1, 2 mu]."""
    s = branch.semigroup
    mu, v0 = s.conductor, s.multiplicity
    bound = 2 * mu + v0
    if branch.trunc < bound:
        raise InsufficientTruncation(
            f"window {branch.trunc} below the closure bound {bound}"
        )
    if f is None:
        f = branch.equation()
    seeds = [
        f.diff_x().substitute(branch.x_series(), branch.phi),
        f.diff_y().substitute(branch.x_series(), branch.phi),
    ]
    minima = module_order_minima(seeds, branch.phi, v0, bound)
    return values_in_window(minima, v0, mu - 1, 2 * mu)


# -- logarithmic forms and the pairing ---------------------------------------


def jacobian_pairing(
    f: PlaneCurvePoly, form: DifferentialForm
) -> PlaneCurvePoly:
    """(w wedge df) / (dx wedge dy) = A f_y - B f_x."""
    return form.a * f.diff_y() - form.b * f.diff_x()


def is_logarithmic(
    f: PlaneCurvePoly, form: DifferentialForm
) -> tuple[bool, Optional[PlaneCurvePoly]]:
    """Whether the pairing is divisible by f; the cofactor when it is."""
    q, r = weierstrass_divide(jacobian_pairing(f, form), f)
    if r.is_zero:
        return True, q
    return False, None


def weierstrass_form_decompose(
    f: PlaneCurvePoly, form: DifferentialForm
) -> tuple[DifferentialForm, tuple[PlaneCurvePoly, PlaneCurvePoly]]:
    """Split w = (A1 dx + B1 dy) + (Q df + P f dx) with deg_y A1 < n and
    deg_y B1 < n - 1.  The splitting is unique; reconstruction is exact."""
    n = f.y_degree()
    f_y = f.diff_y()
    monic_fy = f_y.scale(Fraction(1, n))
    q_scaled, b1 = weierstrass_divide(form.b, monic_fy)
    q = q_scaled.scale(Fraction(1, n))
    p, a1 = weierstrass_divide(form.a - q * f.diff_x(), f)
    return DifferentialForm(a1, b1), (q, p)


def log_form_search(
    branch: PuiseuxBranch,
    max_cofactor_value: Optional[int] = None,
    f: Optional[PlaneCurvePoly] = None,
) -> list[DifferentialForm]:
    """Logarithmic forms with bounded y-degrees (deg_y A < n, deg_y B < n-1),
    echelonized so the returned dy-coefficients have pairwise distinct
    valuations, found by exact kernel computation of "pairing = cofactor *
    equation" on coefficient jets.

    ``max_cofactor_value`` bounds the cofactor valuation the family aims to
    cover (default mu + v_g; hard cap 2 mu + v0)."""
    s = branch.semigroup
    mu, v0 = s.conductor, s.multiplicity
    hi = max_cofactor_value
    if hi is None:
        hi = mu + s.generators[-1]
    if hi > 2 * mu + v0:
        raise WindowTooLarge(f"cofactor window {hi} exceeds {2 * mu + v0}")
    if f is None:
        f = branch.equation()
    n = f.y_degree()
    deg_x_f = max((i for i, _ in f.coeffs), default=0)
    x_bound = (hi + v0) // v0 + 2

    variables: list[tuple[str, int, int]] = []
    for i in range(x_bound + 1):
        for j in range(n):
            variables.append(("a", i, j))
    for i in range(x_bound + 1):
        for j in range(max(n - 1, 1)):
            variables.append(("b", i, j))
    q_x_bound = x_bound + deg_x_f
    for i in range(q_x_bound + 1):
        for j in range(max(n - 1, 1)):
            variables.append(("q", i, j))
    index = {v: k for k, v in enumerate(variables)}

    f_y, f_x = f.diff_y(), f.diff_x()
    equations: dict[tuple[int, int], dict[int, Fraction]] = {}

    def accumulate(which: str, mult: PlaneCurvePoly, sign: int):
        for (kind, i, j) in variables:
            if kind != which:
                continue
            col = index[(kind, i, j)]
            for (mi, mj), c in mult.coeffs.items():
                key = (i + mi, j + mj)
                row = equations.setdefault(key, {})
                row[col] = row.get(col, Fraction(0)) + sign * c
                if row[col] == 0:
                    del row[col]

    accumulate("a", f_y, 1)
    accumulate("b", f_x, -1)
    accumulate("q", f, -1)

    vectors = kernel_basis(equations.values(), len(variables))
    ladder: dict[int, tuple[DifferentialForm, TruncatedSeries]] = {}
    for vec in vectors:
        a = PlaneCurvePoly(
            {(i, j): vec[index[("a", i, j)]] for (k, i, j) in variables if k == "a"}
        )
        b = PlaneCurvePoly(
            {(i, j): vec[index[("b", i, j)]] for (k, i, j) in variables if k == "b"}
        )
        if b.is_zero and a.is_zero:
            continue
        form = DifferentialForm(a, b)
        pull = b.substitute(branch.x_series(), branch.phi)
        while not pull.is_zero_below_trunc:
            order = pull.order()
            held = ladder.get(order)
            if held is None:
                ladder[order] = (form, pull)
                break
            ratio = pull.leading_coeff() / held[1].leading_coeff()
            form = form - held[0].scale(ratio)
            pull = pull - held[1].scale(ratio)
    return [ladder[o][0] for o in sorted(ladder)]


def log_form_order_law(
    branch: PuiseuxBranch,
    form: DifferentialForm,
    f: Optional[PlaneCurvePoly] = None,
) -> dict:
    """Check the order and leading-coefficient laws of a logarithmic form
    with bounded y-degrees: the dy-coefficient B and the cofactor M satisfy
    nu(B) = nu(M) + v0 and n * lead(M) = -e_k v_{k+1} lead(B), where k is
    the largest level whose gcd does not divide nu(B) - nu(f_y).

    Returns the witness data; raises NotLogarithmic when the pairing is
    not divisible by the equation."""
    s = branch.semigroup
    if f is None:
        f = branch.equation()
    ok, cofactor = is_logarithmic(f, form)
    if not ok:
        raise NotLogarithmic("pairing is not a multiple of the equation")
    nu_b, lead_b = branch.valuation(form.b)
    nu_m, lead_m = branch.valuation(cofactor)
    nu_fy, _ = branch.valuation(f.diff_y())
    diff = nu_b - nu_fy
    level = max(
        (i for i in range(s.genus + 1) if diff % s.gcd_chain[i] != 0),
        default=None,
    )
    if level is None:
        raise AssertionError(
            f"nu(B) - nu(f_y) = {diff} divisible by every gcd level"
        )
    v_next = s.generators[level + 1]
    e_k = s.gcd_chain[level]
    order_law = nu_b == nu_m + s.multiplicity
    lead_law = lead_m * branch.n == -e_k * v_next * lead_b
    return {
        "nu_b": nu_b,
        "nu_m": nu_m,
        "level": level,
        "order_law": order_law,
        "leading_law": lead_law,
        "lead_b": lead_b,
        "lead_m": lead_m,
        "cofactor": cofactor,
    }


# -- the semiroot transfer gadgets -------------------------------------------


def _curve_monomial_jets(
    branch: PuiseuxBranch, max_value: int, jet_order: int
) -> list[tuple[int, int, TruncatedSeries]]:
    """Monomials x^p y^q (q < n) of pullback order <= max_value, with their
    pullback series cut at t^jet_order."""
    n = branch.n
    v0 = branch.semigroup.multiplicity
    v1 = branch.phi.order()
    out = []
    phi_pow = TruncatedSeries({0: Fraction(1)})
    for q in range(n):
        if q:
            phi_pow = phi_pow * branch.phi
        base = q * v1
        if base > max_value:
            break
        for p in range((max_value - base) // v0 + 1):
            out.append((p, q, phi_pow.shift(p * v0).truncate(jet_order)))
    return out


def max_b_valuation(
    branch: PuiseuxBranch,
    delta: int,
    values: Optional[ValueSet] = None,
) -> int:
    """Largest valuation of the dy-coefficient among forms of value delta
    (delta must be an attained gap-value; the maximum then exists and is at
    most delta - v1).  Feasibility of each candidate is an exact linear
    question on coefficient jets."""
    s = branch.semigroup
    if s.contains(delta):
        raise DeltaInSemigroup(f"{delta} lies in {s}")
    if values is None:
        values = differential_values(branch)
    if not values.contains_value(delta):
        raise DeltaNotValue(f"{delta} is not a value of any form on {branch}")
    v0, v1 = s.multiplicity, s.generators[1]
    u1 = branch.x_derivative_times_t()
    u2 = branch.y_derivative_times_t()
    a_mons = _curve_monomial_jets(branch, delta - v0, delta + 1)
    b_mons = _curve_monomial_jets(branch, delta - v1, delta + 1)
    ncols = len(a_mons) + len(b_mons)

    pull_rows: dict[int, dict[int, Fraction]] = {}
    b_rows: dict[int, dict[int, Fraction]] = {}
    for col, (_, _, jet) in enumerate(a_mons):
        contrib = jet * u1
        for e, c in contrib.coeffs.items():
            if e <= delta:
                pull_rows.setdefault(e, {})[col] = c
    for k, (_, _, jet) in enumerate(b_mons):
        col = len(a_mons) + k
        contrib = jet * u2
        for e, c in contrib.coeffs.items():
            if e <= delta:
                pull_rows.setdefault(e, {})[col] = c
        for e, c in jet.coeffs.items():
            if e <= delta:
                b_rows.setdefault(e, {})[col] = c

    for b_target in range(delta - v1, -1, -1):
        if not s.contains(b_target):
            continue
        rows = [r for e, r in pull_rows.items() if e < delta]
        rows += [r for e, r in b_rows.items() if e < b_target]
        functionals = [
            pull_rows.get(delta, {}),
            b_rows.get(b_target, {}),
        ]
        if feasible_with_nonzeros(rows, ncols, functionals):
            return b_target
    raise AssertionError(f"no feasible dy-valuation for value {delta}")


def transfer_value(
    parent: NumericalSemigroup, k: int, delta: int, theta_delta: int
) -> int:
    """The parent gap-value induced by a semiroot gap-value delta with
    maximal dy-valuation theta_delta: e_k * delta when the spread
    e_k (delta - theta) stays below the next characteristic exponent,
    else beta_{k+1} + e_k * theta."""
    e_k = parent.gcd_chain[k]
    beta_next = parent.char_exponents[k + 1]
    spread = e_k * (delta - theta_delta)
    if spread == beta_next:
        raise AssertionError(
            "spread equals the characteristic exponent, which the gcd rules out"
        )
    if spread < beta_next:
        return e_k * delta
    return beta_next + e_k * theta_delta


@dataclass(frozen=True)
class ThetaTable:
    """Per-gap-value maximal dy-valuations of a semiroot branch, with the
    induced split and transfer relative to a parent class."""

    parent: NumericalSemigroup
    k: int
    theta: dict[int, int]
    small_spread: tuple[int, ...]
    large_spread: tuple[int, ...]
    transfer: dict[int, int]


def theta_table(
    parent: NumericalSemigroup,
    k: int,
    semiroot_branch: PuiseuxBranch,
    values: Optional[ValueSet] = None,
) -> ThetaTable:
    """Build the transfer table over every attained gap-value of the
    semiroot.  Checks injectivity of both maps as it goes."""
    if values is None:
        values = differential_values(semiroot_branch)
    e_k = parent.gcd_chain[k]
    beta_next = parent.char_exponents[k + 1]
    theta: dict[int, int] = {}
    transfer: dict[int, int] = {}
    small, large = [], []
    for delta in values.extra:
        theta[delta] = max_b_valuation(semiroot_branch, delta, values)
        transfer[delta] = transfer_value(parent, k, delta, theta[delta])
        if e_k * (delta - theta[delta]) < beta_next:
            small.append(delta)
        else:
            large.append(delta)
    if len(set(theta.values())) != len(theta):
        raise AssertionError(f"maximal dy-valuation not injective: {theta}")
    if len(set(transfer.values())) != len(transfer):
        raise AssertionError(f"transfer map not injective: {transfer}")
    return ThetaTable(
        parent, k, theta, tuple(small), tuple(large), transfer
    )
