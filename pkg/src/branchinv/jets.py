"""Exact linear algebra on jet spaces.

Sparse Gauss-Jordan over the rationals, plus the two finite-dimensional
models used as independent oracles and feasibility solvers:

* ``tjurina_oracle``: codimension of the ideal generated by the defining
  equation and its partials, computed inside the rank-n free module
  Q[x]/(x^K) (x) y^{0..n-1} obtained by reducing mod the monic equation.
  The cut-off K is conductor-derived: every ring element of order at least
  2*mu - 1 + v1 lies in the ideal image, so x^K kills nothing that
  matters once K*v0 reaches that bound.
* ``tjurina_oracle_total_degree``: the naive model on monomials of total
  degree <= mu + 2 in the ambient plane, used to cross-check the reduced
  model on small inputs.
* feasibility of linear systems with "this coefficient must be nonzero"
  side conditions, used by the maximal-dy-valuation search.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .branch import PuiseuxBranch
from .poly import PlaneCurvePoly, weierstrass_divide
from .series import InsufficientTruncation

Row = dict[int, Fraction]


class Echelon:
    """Incremental reduced row echelon form over Q with sparse rows."""

    def __init__(self):
        self.pivots: dict[int, Row] = {}

    def reduce(self, row: Row) -> Row:
        # Pivot rows never contain other pivot columns (insert keeps them
        # Jordan-reduced), so one pass over the row's pivot columns leaves
        # a row supported on free columns only.
        row = dict(row)
        for lead in sorted(c for c in row if c in self.pivots):
            factor = row.get(lead)
            if not factor:
                continue
            for col, val in self.pivots[lead].items():
                new = row.get(col, Fraction(0)) - factor * val
                if new == 0:
                    row.pop(col, None)
                else:
                    row[col] = new
        return row

    def insert(self, row: Row) -> bool:
        """Reduce and, if independent, add the row.  Returns whether added."""
        row = self.reduce(row)
        if not row:
            return False
        lead = min(row)
        inv = 1 / row[lead]
        row = {c: v * inv for c, v in row.items()}
        for other in self.pivots.values():
            if lead in other:
                factor = other[lead]
                for col, val in row.items():
                    new = other.get(col, Fraction(0)) - factor * val
                    if new == 0:
                        other.pop(col, None)
                    else:
                        other[col] = new
        self.pivots[lead] = row
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)


def rank_of(rows) -> int:
    ech = Echelon()
    for row in rows:
        ech.insert(row)
    return ech.rank


def kernel_basis(rows, ncols: int) -> list[list[Fraction]]:
    """Basis of the solution space of the homogeneous system."""
    ech = Echelon()
    for row in rows:
        ech.insert(row)
    basis = []
    pivot_cols = set(ech.pivots)
    for free in range(ncols):
        if free in pivot_cols:
            continue
        vec = [Fraction(0)] * ncols
        vec[free] = Fraction(1)
        for col, prow in ech.pivots.items():
            vec[col] = -prow.get(free, Fraction(0))
        basis.append(vec)
    return basis


def feasible_with_nonzeros(rows, ncols: int, functionals) -> bool:
    """Is there a solution of the homogeneous system on which every given
    functional (a sparse row) is nonzero?  Over an infinite field this
    holds iff no functional vanishes identically on the solution space."""
    basis = kernel_basis(rows, ncols)
    if not basis:
        return False
    for func in functionals:
        if not any(
            sum(coef * vec[col] for col, coef in func.items())
            for vec in basis
        ):
            return False
    return True


# -- Tjurina number oracles -------------------------------------------------


def _y_ladder(seed: PlaneCurvePoly, f: PlaneCurvePoly, n: int):
    """seed, y*seed mod f, ..., y^{n-1}*seed mod f."""
    y = PlaneCurvePoly.variable_y()
    ladder = [seed]
    for _ in range(n - 1):
        _, rem = weierstrass_divide(ladder[-1] * y, f)
        ladder.append(rem)
    return ladder


def tjurina_oracle(
    branch: PuiseuxBranch, f: Optional[PlaneCurvePoly] = None
) -> int:
    """dim of the local algebra by the defining equation and its partials,
    via exact Gaussian elimination in the mod-equation jet module."""
    s = branch.semigroup
    if s.is_natural:
        return 0
    mu = s.conductor
    v0, v1 = s.generators[0], s.generators[1]
    n = branch.n
    if f is None:
        f = branch.equation()
    bound = 2 * mu - 1 + v1
    cut = -(-bound // v0) + 1
    if f.x_trunc is not None and f.x_trunc < cut:
        raise InsufficientTruncation(
            f"equation known to x^{f.x_trunc}, need x^{cut}"
        )

    def row_of(p: PlaneCurvePoly, x_shift: int) -> Row:
        return {
            (i + x_shift) * n + j: c
            for (i, j), c in p.coeffs.items()
            if i + x_shift < cut
        }

    ech = Echelon()
    for seedpoly in (f.diff_x(), f.diff_y()):
        for reduced in _y_ladder(seedpoly, f, n):
            for a in range(cut):
                ech.insert(row_of(reduced, a))
    return n * cut - ech.rank


def tjurina_oracle_total_degree(
    branch: PuiseuxBranch, f: Optional[PlaneCurvePoly] = None
) -> int:
    """Naive jet-space model: codimension of the span of all monomial
    multiples of (f, f_x, f_y) among monomials of total degree <= mu + 2.
    Quadratic-size matrix; intended for small conductors."""
    s = branch.semigroup
    if s.is_natural:
        return 0
    mu = s.conductor
    if f is None:
        f = branch.equation()
    degree_cap = mu + 2
    cols = {}
    for i in range(degree_cap + 1):
        for j in range(degree_cap + 1 - i):
            cols[(i, j)] = len(cols)

    def row_of(p: PlaneCurvePoly, a: int, b: int) -> Row:
        return {
            cols[(i + a, j + b)]: c
            for (i, j), c in p.coeffs.items()
            if i + a + j + b <= degree_cap
        }

    ech = Echelon()
    for h in (f, f.diff_x(), f.diff_y()):
        order = min(i + j for i, j in h.coeffs)
        room = degree_cap - order
        for a in range(room + 1):
            for b in range(room + 1 - a):
                ech.insert(row_of(h, a, b))
    return len(cols) - ech.rank
