"""Plane branches: construction, valuations, semiroots, adic expansion.

A branch is a primitive parametrization (t**n, phi(t)) in normal form: the
support of phi starts at the first characteristic exponent and every
exponent below the next characteristic exponent is divisible by the
running gcd.  That makes the characteristic sequence a syntactic function
of the support, so membership of a sample in its intended equisingularity
class never needs a certificate.

Branches are exact objects (phi is a polynomial); ``trunc`` is the
observation window used to size value computations.  Samples drawn with
``seed=...`` populate every allowed exponent below the window with a
nonzero rational from a small fixed pool, and widening the window extends
the sample deterministically, which is what the truncation-doubling
checks exercise.
"""

from __future__ import annotations

import json
import os
import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional

from .poly import PlaneCurvePoly, implicitize, weierstrass_divide
from .semigroup import NumericalSemigroup, semigroup_from_char
from .series import TruncatedSeries


class SupportViolation(ValueError):
    """Coefficient at a forbidden exponent, or a vanishing characteristic one."""


class ValueAboveTruncation(ArithmeticError):
    """A pullback vanished: the germ lies on the branch (or the window is
    too small to tell for truncated inputs)."""


COEFFICIENT_POOL = (
    Fraction(1),
    Fraction(-1),
    Fraction(2),
    Fraction(1, 2),
    Fraction(3),
    Fraction(-1, 3),
)


def truncation_factor() -> int:
    """Multiplier applied to the default window mu + 2*v_g (env override)."""
    raw = os.environ.get("BRANCHINV_TRUNC_FACTOR", "1")
    factor = int(raw)
    if factor < 1:
        raise ValueError(f"BRANCHINV_TRUNC_FACTOR must be >= 1, got {raw}")
    return factor


def default_truncation(semigroup: NumericalSemigroup) -> int:
    mu = semigroup.conductor
    v_g = semigroup.generators[-1]
    return (mu + 2 * v_g) * truncation_factor()


def allowed_exponent(semigroup: NumericalSemigroup, exp: int) -> bool:
    """Normal-form support rule: below the (k+1)-st characteristic exponent
    only multiples of e_k may appear, and nothing below the first."""
    beta = semigroup.char_exponents
    if exp < beta[1]:
        return False
    level = max(k for k in range(1, len(beta)) if beta[k] <= exp)
    return exp % semigroup.gcd_chain[level] == 0


def extract_char(n: int, support) -> tuple[int, ...]:
    """Characteristic exponents from a parametrization support (syntactic)."""
    beta = [n]
    e = n
    for i in sorted(support):
        if i % e != 0:
            beta.append(i)
            e = gcd(e, i)
    return tuple(beta)


@dataclass(frozen=True)
class PuiseuxBranch:
    """Primitive plane branch (t**n, phi(t)) in support normal form."""

    n: int
    phi: TruncatedSeries
    semigroup: NumericalSemigroup
    trunc: int
    seed: Optional[str] = None

    # -- basic series data --------------------------------------------------

    def x_series(self) -> TruncatedSeries:
        return TruncatedSeries.monomial(self.n)

    def x_derivative_times_t(self) -> TruncatedSeries:
        return TruncatedSeries.monomial(self.n, self.n)

    def y_derivative_times_t(self) -> TruncatedSeries:
        return self.phi.derivative().shift(1)

    def pullback(self, h: PlaneCurvePoly) -> TruncatedSeries:
        return h.substitute(self.x_series(), self.phi)

    def valuation(self, h: PlaneCurvePoly) -> tuple[int, Fraction]:
        """Order and leading coefficient of the pullback of h."""
        s = self.pullback(h)
        if s.is_zero_below_trunc:
            raise ValueAboveTruncation(
                "pullback vanishes"
                + ("" if s.trunc is None else f" up to t^{s.trunc}")
            )
        return s.order(), s.leading_coeff()

    # -- semiroots ----------------------------------------------------------

    def truncated_parametrization(self, k: int) -> tuple[int, TruncatedSeries]:
        """Parametrization of the k-th truncation: exponents below the
        (k+1)-st characteristic exponent, rescaled by the gcd e_k."""
        g = self.semigroup.genus
        if not 0 <= k <= g:
            raise ValueError(f"semiroot level {k} out of range 0..{g}")
        if k == g:
            return self.n, self.phi
        e_k = self.semigroup.gcd_chain[k]
        cut = self.semigroup.char_exponents[k + 1]
        kept = {
            i // e_k: c for i, c in self.phi.coeffs.items() if i < cut
        }
        return self.n // e_k, TruncatedSeries(kept)

    def semiroot(self, k: int) -> PlaneCurvePoly:
        """The k-semiroot of the branch (Zariski: minimal polynomial of the
        truncated parametrization).  deg_y = n/e_k, value = v_{k+1}."""
        m, psi = self.truncated_parametrization(k)
        return implicitize(m, psi)

    def semiroot_branch(self, k: int) -> "PuiseuxBranch":
        m, psi = self.truncated_parametrization(k)
        sub = self.semigroup.semiroot_semigroup(k)
        return PuiseuxBranch(m, psi, sub, max(default_truncation(sub), self.trunc))

    def equation(self) -> PlaneCurvePoly:
        """Monic Weierstrass polynomial defining the branch."""
        return implicitize(self.n, self.phi)

    def complete_semiroots(self) -> "SemirootSystem":
        polys = tuple(
            self.semiroot(k) for k in range(self.semigroup.genus + 1)
        )
        return SemirootSystem(polys, self)

    # -- window management ----------------------------------------------------

    def widened(self, factor: int = 2) -> "PuiseuxBranch":
        """Same curve class, observation window multiplied by ``factor``.

        Seeded branches re-sample: the coefficients already drawn are kept
        (per-exponent derivation) and newly allowed exponents get fresh
        pool values.  Explicit branches keep their polynomial."""
        new_trunc = self.trunc * factor
        if self.seed is not None:
            return make_branch(
                self.semigroup.char_exponents,
                seed=self.seed,
                trunc=new_trunc,
            )
        return PuiseuxBranch(self.n, self.phi, self.semigroup, new_trunc)

    # -- serialization ----------------------------------------------------

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.n,
                "phi": self.phi.to_list(),
                "char": list(self.semigroup.char_exponents),
                "trunc": self.trunc,
            }
        )

    def __str__(self) -> str:
        return f"(t^{self.n}, {self.phi})"


@dataclass(frozen=True)
class SemirootSystem:
    """A complete system of semiroots f_0, ..., f_g of the parent branch."""

    polys: tuple[PlaneCurvePoly, ...]
    parent: PuiseuxBranch


def _pool_coefficient(seed: str, exp: int) -> Fraction:
    rng = random.Random(f"{seed}|{exp}")
    return COEFFICIENT_POOL[rng.randrange(len(COEFFICIENT_POOL))]


def make_branch(
    char,
    *,
    coefficients=None,
    seed=None,
    trunc: Optional[int] = None,
) -> PuiseuxBranch:
    """Build a branch in the class of the characteristic sequence ``char``.

    Exactly one of ``coefficients`` (map exponent -> rational) and ``seed``
    must be given.  Seeded branches draw a pool value for every allowed
    exponent below the window; the draw depends only on (seed, exponent),
    so widening the window extends rather than reshuffles the sample.
    """
    semigroup = semigroup_from_char(char)
    if trunc is None:
        trunc = default_truncation(semigroup)
    if (coefficients is None) == (seed is None):
        raise ValueError("give exactly one of coefficients= or seed=")

    beta = semigroup.char_exponents
    if trunc <= beta[-1]:
        raise ValueError(f"window {trunc} does not even cover {beta[-1]}")

    if coefficients is not None:
        coeffs = {}
        for e, c in coefficients.items():
            e = int(e)
            c = Fraction(c)
            if c == 0:
                continue
            if not allowed_exponent(semigroup, e):
                raise SupportViolation(
                    f"exponent {e} is forbidden in class {beta}"
                )
            coeffs[e] = c
        seed_tag = None
    else:
        seed_tag = str(seed)
        coeffs = {
            e: _pool_coefficient(seed_tag, e)
            for e in range(beta[1], trunc)
            if allowed_exponent(semigroup, e)
        }
    for k in range(1, len(beta)):
        if coeffs.get(beta[k], 0) == 0:
            raise SupportViolation(
                f"characteristic exponent {beta[k]} has zero coefficient"
            )
    phi = TruncatedSeries(coeffs)
    if extract_char(semigroup.multiplicity, phi.support()) != beta:
        raise SupportViolation(
            "support does not realize the requested characteristic sequence"
        )
    return PuiseuxBranch(
        semigroup.multiplicity, phi, semigroup, trunc, seed_tag
    )


def branch_from_json(text: str) -> PuiseuxBranch:
    data = json.loads(text)
    phi = TruncatedSeries.from_list(data["phi"])
    return make_branch(
        data["char"],
        coefficients=dict(phi.coeffs),
        trunc=data["trunc"],
    )


def adic_expansion(
    h: PlaneCurvePoly, system: SemirootSystem
) -> dict[tuple[int, ...], PlaneCurvePoly]:
    """Unique expansion of h as sum(b_alpha * f_0**a_0 * ... * f_g**a_g)
    with 0 <= a_k < n_{k+1} for k < g and b_alpha in the x-coefficient ring,
    by iterated Weierstrass division from the top semiroot down."""

    def expand(part: PlaneCurvePoly, level: int):
        if level < 0:
            if part.y_degree() > 0:
                raise AssertionError("adic expansion left a y-dependent base")
            return {(): part}
        f_level = system.polys[level]
        layers = []
        rem = part
        while True:
            q, r = weierstrass_divide(rem, f_level)
            layers.append(r)
            if q.is_zero:
                break
            rem = q
        out = {}
        for power, layer in enumerate(layers):
            if layer.is_zero:
                continue
            for alpha, base in expand(layer, level - 1).items():
                out[alpha + (power,)] = base
        return out

    g = system.parent.semigroup.genus
    result = expand(h, g)
    quotients = system.parent.semigroup.quotients
    for alpha in result:
        for k in range(g):
            if alpha[k] >= quotients[k]:
                raise AssertionError(
                    f"adic exponent bound violated at {alpha}"
                )
    return result
