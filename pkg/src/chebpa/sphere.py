"""Counting permutations near the identity, and the bounds that follow.

V(n, d) is the number of permutations of [1..n] that move every symbol by at
most d.  It equals the permanent of the n x n banded 0/1 matrix with band
half-width d, computed here by a sliding-window bitmask dynamic program:
rows are processed in order, the state records which columns inside the
active width-(2d+1) window are already occupied, and a column hardens into
"must be used" the moment it slides out of reach.

Counts are exact Python integers throughout; n! outgrows 64 bits at n = 21
and the tables go well past that.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial

from .core import DomainError, InfeasibleError

# Window widths beyond this make the bitmask DP state space explode; the
# bound engine treats the missing count as "no bound from this rule".
MAX_WINDOW_BITS = 31


@dataclass(frozen=True)
class SphereSize:
    n: int
    d: int
    count: int


@lru_cache(maxsize=None)
def _count(n: int, d: int) -> int:
    if d <= 0:
        return 1
    if d >= n - 1:
        return factorial(n)
    window = 2 * d + 1
    if window > MAX_WINDOW_BITS:
        raise InfeasibleError(
            f"sphere count for d={d} needs a {window}-bit window; infeasible at desk scale"
        )
    # bit k of a state refers to column (row - d) + k
    states = {0: 1}
    for row in range(1, n + 1):
        base = row - d
        lo = max(1, base)
        hi = min(n, row + d)
        nxt: dict[int, int] = {}
        for mask, cnt in states.items():
            for col in range(lo, hi + 1):
                bit = 1 << (col - base)
                if mask & bit:
                    continue
                key = mask | bit
                nxt[key] = nxt.get(key, 0) + cnt
        # column `base` can only be used by rows <= base + d = row, so it
        # must be occupied now; shift the window one column right
        states = {}
        for mask, cnt in nxt.items():
            if base >= 1 and not mask & 1:
                continue
            key = mask >> 1
            states[key] = states.get(key, 0) + cnt
    # columns n-d+1 .. n sit in bits 0 .. d-1 of the final states
    full = (1 << d) - 1
    return sum(cnt for mask, cnt in states.items() if mask & full == full)


def sphere_size(n: int, d: int) -> SphereSize:
    """Exact number of permutations of [1..n] within distance d of the
    identity."""
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    if d < 0:
        raise DomainError(f"need d >= 0, got {d}")
    return SphereSize(n, d, _count(n, d))


def gv_lower_bound(n: int, d: int) -> int:
    """Greedy sphere-covering lower bound: ceil(n! / V(n, d-1)).

    Any maximal array at distance d covers all of S_n with radius-(d-1)
    spheres, so at least this many members exist.
    """
    if not n > d >= 2:
        raise DomainError(f"need n > d >= 2, got n={n}, d={d}")
    v = _count(n, d - 1)
    return -(-factorial(n) // v)


def sphere_packing_upper_bound(n: int, d: int) -> int:
    """Packing upper bound floor((n+1)! / V(n+1, d/2)) for even d with
    d <= n <= 2d."""
    if d % 2 != 0:
        raise DomainError(f"need even d, got {d}")
    if not (2 * d >= n >= d >= 2):
        raise DomainError(f"need 2d >= n >= d >= 2, got n={n}, d={d}")
    v = _count(n + 1, d // 2)
    return factorial(n + 1) // v
