"""Shared estimation subroutines used by every tester.

compare estimates the mass ratio of two disjoint sets from conditional
draws on their union. estimate_neighborhood estimates the mass of the
weight-neighborhood of a point at a randomized radius.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distcore import INTERVAL, QuerySet
from .errors import SetsNotDisjoint
from .oracles import OracleHandle
from .profiles import DESK


LOW = "low"
HIGH = "high"
RATIO = "ratio"


@dataclass(frozen=True)
class CompareOutcome:
    tag: str
    rho: float = None

    @property
    def is_low(self):
        return self.tag == LOW

    @property
    def is_high(self):
        return self.tag == HIGH

    @property
    def is_ratio(self):
        return self.tag == RATIO

    def hit_fraction(self):
        """The underlying hit-rate estimate mapped back from the ratio;
        0 and 1 for the saturated outcomes."""
        if self.tag == LOW:
            return 0.0
        if self.tag == HIGH:
            return 1.0
        return self.rho / (1.0 + self.rho)


@dataclass(frozen=True)
class NeighborhoodEstimate:
    w_hat: float
    alpha: float
    theta: float


def compare_budget(eta, K, delta, profile=DESK) -> int:
    m = math.ceil(profile["compare_c"] * K * math.log(2.0 / delta) / eta**2)
    return int(min(m, profile["compare_max_draws"]))


def _union_set(x: QuerySet, y: QuerySet, n) -> QuerySet:
    if x.shape == INTERVAL and y.shape == INTERVAL:
        if x.b + 1 == y.a:
            return QuerySet.interval(x.a, y.b)
        if y.b + 1 == x.a:
            return QuerySet.interval(y.a, x.b)
    xi = x.members(n)
    yi = y.members(n)
    if xi.size == 1 and yi.size == 1:
        return QuerySet.pair(int(xi[0]), int(yi[0]))
    merged = np.concatenate((xi, yi))
    merged.sort()
    return QuerySet.explicit(merged)


def compare(
    h: OracleHandle,
    x: QuerySet,
    y: QuerySet,
    eta: float,
    K: float,
    delta: float,
    profile=DESK,
) -> CompareOutcome:
    """Estimate D(Y)/D(X) from conditional draws on X union Y.

    Returns Low when the hit fraction for Y is below (2/3)/(K+1), High
    when the miss fraction is, and otherwise the ratio estimate
    mu/(1-mu). The draw budget is ceil(compare_c*K*ln(2/delta)/eta^2).
    """
    n = h.dist.n
    xi = x.members(n)
    yi = y.members(n)
    if np.intersect1d(xi, yi).size:
        raise SetsNotDisjoint("compare needs disjoint sets")
    union = _union_set(x, y, n)
    m = compare_budget(eta, K, delta, profile)
    hits = h.draw_subset_count(union, y, m)
    mu = hits / m
    thr = (2.0 / 3.0) / (K + 1.0)
    if mu < thr:
        return CompareOutcome(LOW)
    if 1.0 - mu < thr:
        return CompareOutcome(HIGH)
    return CompareOutcome(RATIO, mu / (1.0 - mu))


def compare_points(h, px, py, eta, K, delta, profile=DESK) -> CompareOutcome:
    return compare(
        h,
        QuerySet.explicit([px]),
        QuerySet.explicit([py]),
        eta,
        K,
        delta,
        profile,
    )


def ratio_in_window(out: CompareOutcome, alpha: float, theta: float) -> bool:
    """Whether a compare outcome lands inside the closed window
    [1/(1+alpha+theta/2), 1+alpha+theta/2]."""
    if not out.is_ratio:
        return False
    hi = 1.0 + alpha + theta / 2.0
    return 1.0 / hi <= out.rho <= hi


def neighborhood_grid(kappa, beta, eta, delta):
    """(theta, r): grid step and grid size for the radius draw."""
    theta = kappa * eta * beta * delta / 64.0
    r = int(round(kappa / theta))  # = 64/(eta beta delta)
    return theta, r


def estimate_neighborhood(
    h: OracleHandle,
    x: int,
    kappa: float,
    beta: float,
    eta: float,
    delta: float,
    profile=DESK,
    sample_cap=None,
    eta_floor=None,
    delta_floor=None,
) -> NeighborhoodEstimate:
    """Estimate the mass of the weight-neighborhood of x.

    Draws a radius alpha uniformly from the theta-grid strictly inside
    (kappa, 2 kappa), samples Theta(log(1/delta)/(beta eta^2)) points,
    and classifies each distinct point by one ratio comparison against
    x. Returns the fraction of the sample (as a multiset) whose ratio
    lands in the closed window for alpha.
    """
    if sample_cap is None:
        sample_cap = profile["en_sample_cap"]
    if eta_floor is None:
        eta_floor = profile["en_compare_eta_floor"]
    if delta_floor is None:
        delta_floor = profile["en_compare_delta_floor"]
    theta, r = neighborhood_grid(kappa, beta, eta, delta)
    i = int(h.rng.integers(1, r))
    alpha = kappa + i * theta
    size = math.ceil(profile["en_sample_c"] * math.log(4.0 / delta) / (beta * eta**2))
    size = int(min(size, sample_cap))
    pts = h.draw_many(QuerySet.full(), size)
    uniq, counts = np.unique(pts, return_counts=True)
    c_eta = max(theta / 4.0, eta_floor)
    c_delta = max(delta / (4.0 * size), delta_floor)
    inside = 0
    for y, mult in zip(uniq, counts):
        y = int(y)
        if y == x:
            # Ratio exactly 1, always inside the window.
            inside += int(mult)
            continue
        out = compare_points(h, x, y, c_eta, 4.0, c_delta, profile)
        if ratio_in_window(out, alpha, theta):
            inside += int(mult)
    return NeighborhoodEstimate(inside / size, alpha, theta)
