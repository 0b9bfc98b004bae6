"""Interval-query uniformity testing.

binary_descent estimates the mass of a single point using only
interval conditioning: it walks a binary search tree over [1, N],
comparing the two halves of the current interval at each level, and
multiplies the per-level conditional estimates together. Each level
also checks that the halves split the way a uniform distribution
would; a violation aborts the walk.
"""

from __future__ import annotations

import math

from .distcore import QuerySet
from .errors import ZeroMassSet
from .oracles import OracleHandle
from .profiles import DESK
from .subroutines import compare
from .uniformity import ACCEPT, REJECT


def descent_tolerances(n, eps):
    """(eta, delta) used by every level of the walk."""
    log_n = math.log2(n)
    return eps / (48.0 * log_n), eps / (100.0 * (1.0 + log_n))


def binary_descent(h: OracleHandle, y: int, eps: float, profile=DESK):
    """Estimate D(y), or return None when some level's split is far
    from the uniform one."""
    n = h.dist.n
    a, b = 1, n
    if a == b:
        return 1.0
    eta, delta = descent_tolerances(n, eps)
    value = 1.0
    while a < b:
        c = (a + b) // 2
        half = (b - a + 1) / 2.0
        if y <= c:
            side = (a, c)
            other = (c + 1, b)
            rho_star = math.ceil(half) / math.floor(half)
        else:
            side = (c + 1, b)
            other = (a, c)
            rho_star = math.floor(half) / math.ceil(half)
        try:
            # Estimates D(side)/D(other).
            out = compare(
                h,
                QuerySet.interval(*other),
                QuerySet.interval(*side),
                eta,
                2.0,
                delta,
                profile,
            )
        except ZeroMassSet:
            return None
        if not out.is_ratio:
            return None
        if not ((1.0 - eta) * rho_star <= out.rho <= (1.0 + eta) * rho_star):
            return None
        value *= out.rho / (1.0 + out.rho)
        a, b = side
    return value


def icond_test_uniform(h: OracleHandle, eps: float, profile=DESK) -> str:
    n = h.dist.n
    if n == 1:
        return ACCEPT
    t = math.ceil(profile["icond_t_c"] / eps)
    pts = h.draw_many(QuerySet.full(), t)
    lo = (1.0 - eps / 12.0) / n
    hi = (1.0 + eps / 12.0) / n
    for y in pts:
        v = binary_descent(h, int(y), eps, profile)
        if v is None or not (lo <= v <= hi):
            return REJECT
    return ACCEPT
