"""Order-staircase closure for modules of series over a branch ring.

The local ring of a branch embeds in C{t}; a finitely generated module
over it (differentials via their pullbacks, the Jacobian ideal, ...) has a
value set that is closed under adding v0 = ord x(t), so it is determined
by the least value in each residue class mod v0.  The closure below keeps
one representative of least known order per class, reduces every incoming
element against the representatives (cancelling leading terms with x-shift
multiples), and feeds back y-multiples whenever a class minimum improves.
Orders above ``bound`` are irrelevant by construction of the callers'
windows and are dropped.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable

from .series import InsufficientTruncation, TruncatedSeries


def module_order_minima(
    seeds: Iterable[TruncatedSeries],
    y_series: TruncatedSeries,
    v0: int,
    bound: int,
) -> dict[int, int]:
    """Least order per residue class mod v0 in the module generated by the
    seeds over the algebra generated by t**v0 and ``y_series``.

    Only minima <= ``bound`` are reported; every class whose true minimum
    exceeds the bound is simply absent.  Raises InsufficientTruncation when
    an order decision at or below the bound falls beyond a series window.
    """
    best: dict[int, tuple[int, TruncatedSeries]] = {}
    queue: deque[TruncatedSeries] = deque(seeds)

    def landing(e: TruncatedSeries):
        # Reduce e against the current representatives until it is dropped
        # or strictly improves some class.
        while True:
            if e.is_zero_below_trunc:
                if e.trunc is not None and e.trunc <= bound:
                    raise InsufficientTruncation(
                        f"order undecidable below bound {bound}: "
                        f"series known only up to t^{e.trunc}"
                    )
                return None
            o = e.order()
            if o > bound:
                return None
            cur = best.get(o % v0)
            if cur is None or o < cur[0]:
                return o, e
            co, ce = cur
            e = e - ce.shift(o - co).scale(e.coeffs[o] / ce.coeffs[co])

    while queue:
        element = queue.popleft()
        landed = landing(element)
        if landed is None:
            continue
        order, element = landed
        residue = order % v0
        previous = best.get(residue)
        best[residue] = (order, element)
        queue.append(element * y_series)
        if previous is not None:
            queue.append(previous[1])
    return {r: o for r, (o, _) in best.items()}


def values_in_window(
    minima: dict[int, int], v0: int, lo: int, hi: int
) -> tuple[int, ...]:
    """All attained values in [lo, hi] given per-class minima."""
    out = []
    for r, m in minima.items():
        first = m if m >= lo else m + ((lo - m + v0 - 1) // v0) * v0
        out.extend(range(first, hi + 1, v0))
    return tuple(sorted(out))
