"""Numerical semigroups of plane branches.

A branch with characteristic exponents ``b = (b0, ..., bg)`` carries the
gcd chain ``e_i = gcd(b0, ..., bi)``, the quotients ``n_i = e_{i-1}/e_i``
and the minimal generators of its value semigroup,

    v0 = b0,    v_{i+1} = n_i * v_i + b_{i+1} - b_i.

The conductor of the semigroup equals the Milnor number of the branch and
is twice the number of gaps.  Everything here is exact integer arithmetic;
the only algorithmic choice is a boolean sieve for membership tables,
which is plenty at the sizes these invariants live at.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import gcd


class NonPrimitive(ValueError):
    """gcd of the characteristic exponents is not 1."""


class NotCharSequence(ValueError):
    """The divisibility pattern required of characteristic exponents fails."""


class NotPlaneBranchSemigroup(ValueError):
    """No characteristic sequence produces these generators."""


@dataclass(frozen=True)
class StandardRepresentation:
    """The unique writing r = sum(s_i * v_i) with 0 <= s_i < n_i for i >= 1.

    Membership in the semigroup is equivalent to s0 >= 0.
    """

    coefficients: tuple[int, ...]
    value: int

    @property
    def is_member(self) -> bool:
        return self.coefficients[0] >= 0


@dataclass(frozen=True)
class NumericalSemigroup:
    """Value semigroup of a plane branch, with its derived structure data.

    ``generators`` are the minimal generators v0 < v1 < ... < vg,
    ``char_exponents`` the characteristic sequence b0 < ... < bg,
    ``gcd_chain`` the sequence e_0 > e_1 > ... > e_g = 1 and ``quotients``
    the integers n_1, ..., n_g (each >= 2).  The conductor is the Milnor
    number.  The semigroup of a smooth branch is represented by
    ``NumericalSemigroup.natural()`` with conductor 0.
    """

    generators: tuple[int, ...]
    char_exponents: tuple[int, ...]
    gcd_chain: tuple[int, ...]
    quotients: tuple[int, ...]
    conductor: int

    @staticmethod
    def natural() -> "NumericalSemigroup":
        """The full semigroup of non-negative integers (smooth branch)."""
        return NumericalSemigroup((1,), (1,), (1,), (), 0)

    @property
    def is_natural(self) -> bool:
        return self.generators == (1,)

    @property
    def genus(self) -> int:
        return len(self.generators) - 1

    @property
    def multiplicity(self) -> int:
        return self.generators[0]

    def milnor_number(self) -> int:
        """Conductor, via the closed form sum((n_i - 1) v_i) - v0 + 1."""
        total = sum(
            (n - 1) * v for n, v in zip(self.quotients, self.generators[1:])
        )
        return total - self.generators[0] + 1

    def standard_form(self, r: int) -> StandardRepresentation:
        coeffs = [0] * (self.genus + 1)
        rem = r
        for i in range(self.genus, 0, -1):
            e_i = self.gcd_chain[i]
            n_i = self.quotients[i - 1]
            v_i = self.generators[i]
            # rem is divisible by e_i at this stage; v_i/e_i is a unit mod n_i.
            s_i = ((rem // e_i) * pow(v_i // e_i, -1, n_i)) % n_i
            coeffs[i] = s_i
            rem -= s_i * v_i
        if rem % self.generators[0] != 0:
            raise AssertionError("standard form reduction left a non-multiple")
        coeffs[0] = rem // self.generators[0]
        return StandardRepresentation(tuple(coeffs), r)

    def __contains__(self, r: int) -> bool:
        return self.contains(r)

    def contains(self, r: int) -> bool:
        return self.standard_form(r).is_member

    def gaps(self) -> tuple[int, ...]:
        """Non-members below the conductor; there are conductor/2 of them."""
        return tuple(
            r for r in range(1, self.conductor) if not self.contains(r)
        )

    def membership_table(self, limit: int) -> list[bool]:
        """Sieve table: table[r] is True iff r is in the semigroup, r <= limit."""
        table = [False] * (limit + 1)
        table[0] = True
        for r in range(1, limit + 1):
            table[r] = any(
                r >= v and table[r - v] for v in self.generators
            )
        return table

    def semiroot_semigroup(self, k: int) -> "NumericalSemigroup":
        """Value semigroup <v0/e_k, ..., vk/e_k> of a k-semiroot."""
        if not 0 <= k <= self.genus:
            raise ValueError(f"semiroot level {k} out of range 0..{self.genus}")
        if k == 0:
            return NumericalSemigroup.natural()
        if k == self.genus:
            return self
        e_k = self.gcd_chain[k]
        return semigroup_from_char(
            tuple(b // e_k for b in self.char_exponents[: k + 1])
        )

    def unit_root_sum(self, j: int, alpha: int) -> int:
        """sum(eta**alpha) over the e_j-th roots of unity that are not
        e_{j+1}-th roots, evaluated by the divisibility rule: the sum over
        all e-th roots of unity of eta**alpha is e when e | alpha, else 0.
        """
        if not 0 <= j < self.genus:
            raise ValueError(f"level {j} out of range 0..{self.genus - 1}")
        e_j, e_j1 = self.gcd_chain[j], self.gcd_chain[j + 1]
        full = e_j if alpha % e_j == 0 else 0
        sub = e_j1 if alpha % e_j1 == 0 else 0
        return full - sub

    def to_json(self) -> str:
        return json.dumps(
            {
                "generators": list(self.generators),
                "char_exponents": list(self.char_exponents),
                "conductor": self.conductor,
            }
        )

    def __str__(self) -> str:
        return "<" + ",".join(str(v) for v in self.generators) + ">"


def semigroup_from_char(beta) -> NumericalSemigroup:
    """Build the semigroup from a characteristic sequence.

    Validates the defining pattern: strictly increasing, b0 >= 2, overall
    gcd 1, and each b_{i+1} not divisible by e_i = gcd(b0, ..., bi).
    """
    beta = tuple(int(b) for b in beta)
    if len(beta) < 2:
        raise NotCharSequence("need at least two characteristic exponents")
    if any(b2 <= b1 for b1, b2 in zip(beta, beta[1:])):
        raise NotCharSequence(f"exponents {beta} are not strictly increasing")
    if beta[0] < 2:
        raise NotCharSequence("multiplicity must be at least 2")
    e_chain = [beta[0]]
    for b in beta[1:]:
        if b % e_chain[-1] == 0:
            raise NotCharSequence(
                f"exponent {b} is divisible by the running gcd {e_chain[-1]}"
            )
        e_chain.append(gcd(e_chain[-1], b))
    if e_chain[-1] != 1:
        raise NonPrimitive(f"gcd of {beta} is {e_chain[-1]}, not 1")
    quotients = tuple(
        e_chain[i] // e_chain[i + 1] for i in range(len(beta) - 1)
    )
    gens = [beta[0], beta[1]]
    for i in range(1, len(beta) - 1):
        gens.append(quotients[i - 1] * gens[i] + beta[i + 1] - beta[i])
    semigroup = NumericalSemigroup(
        tuple(gens), beta, tuple(e_chain), quotients, 0
    )
    mu = semigroup.milnor_number()
    return NumericalSemigroup(
        tuple(gens), beta, tuple(e_chain), quotients, mu
    )


def char_from_semigroup(generators) -> tuple[int, ...]:
    """Recover the characteristic sequence from minimal generators.

    Raises NotPlaneBranchSemigroup when no valid sequence exists, e.g. when
    v_{i+1} <= n_i v_i, or the given tuple is not minimally generating.
    """
    v = tuple(int(x) for x in generators)
    if len(v) < 2 or any(b <= a for a, b in zip(v, v[1:])):
        raise NotPlaneBranchSemigroup(
            f"generators {v} are not strictly increasing"
        )
    if v[0] < 2 or v[1] % v[0] == 0:
        raise NotPlaneBranchSemigroup(
            f"generators {v} do not start a plane-branch semigroup"
        )
    e = [v[0]]
    for x in v[1:]:
        e.append(gcd(e[-1], x))
    beta = [v[0], v[1]]
    for i in range(1, len(v) - 1):
        n_i = e[i - 1] // e[i]
        b_next = v[i + 1] - n_i * v[i] + beta[i]
        if b_next <= beta[i]:
            raise NotPlaneBranchSemigroup(
                f"{v}: v_{i + 1} <= n_{i} v_{i} violates minimal generation"
            )
        beta.append(b_next)
    try:
        rebuilt = semigroup_from_char(beta)
    except (NonPrimitive, NotCharSequence) as exc:
        raise NotPlaneBranchSemigroup(f"{v}: {exc}") from exc
    if rebuilt.generators != v:
        raise NotPlaneBranchSemigroup(
            f"{v} is not the minimal generator tuple of a plane branch"
        )
    return tuple(beta)


def semigroup_from_generators(generators) -> NumericalSemigroup:
    return semigroup_from_char(char_from_semigroup(generators))


def semigroup_from_json(text: str) -> NumericalSemigroup:
    data = json.loads(text)
    s = semigroup_from_char(data["char_exponents"])
    if list(s.generators) != list(data["generators"]):
        raise NotPlaneBranchSemigroup(
            "generators in record do not match its characteristic exponents"
        )
    return s


def plane_branch_characters(max_conductor: int):
    """Yield every characteristic sequence whose semigroup has conductor
    at most ``max_conductor``, in lexicographic order."""

    results = []

    def extend(beta, e):
        if e == 1:
            s = semigroup_from_char(beta)
            if s.conductor <= max_conductor:
                results.append(s.char_exponents)
            return
        # Any extension contributes at least v_next - b0 + 1 to the final
        # conductor, so exponents beyond last + 2*max_conductor + 1 cannot
        # occur; the partial bound is not monotone in b_next (the gcd
        # jumps), hence skip rather than stop.
        for b_next in range(beta[-1] + 1, beta[-1] + 2 * max_conductor + 2):
            if b_next % e == 0:
                continue
            cand = beta + (b_next,)
            if partial_conductor(cand) > max_conductor:
                continue
            extend(cand, gcd(e, b_next))

    def partial_conductor(beta) -> int:
        # Conductor lower bound for any completion of the partial sequence:
        # the completed Milnor number only grows with further exponents.
        e = [beta[0]]
        for b in beta[1:]:
            e.append(gcd(e[-1], b))
        gens = [beta[0], beta[1]]
        for i in range(1, len(beta) - 1):
            gens.append((e[i - 1] // e[i]) * gens[i] + beta[i + 1] - beta[i])
        total = sum(
            (e[i - 1] // e[i] - 1) * gens[i] for i in range(1, len(beta))
        )
        return total - beta[0] + 1

    for b0 in range(2, max_conductor + 2):
        for b1 in range(b0 + 1, 2 * b0 + 2 * max_conductor + 2):
            if b1 % b0 == 0:
                continue
            if partial_conductor((b0, b1)) > max_conductor:
                continue
            extend((b0, b1), gcd(b0, b1))
    return results
