"""Testing equality to a fully specified target distribution.

Two testers share the KnownTarget wrapper: a pair-query tester built
on bucket screening plus cross-sample ratio checks, and a general
conditional-query tester that splits into a Heavy branch (a few points
carry almost everything above the split) and a Main branch built on
comparable-witness intervals.

The general tester keeps an oblivious query schedule in the Main
branch: every drawn point costs the same number of queries whether or
not it lands above the split, so the ledger total is a deterministic
function of epsilon for targets without point weights above eps/10.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .distcore import Distribution, KnownIdentity, QuerySet, bucketize
from .errors import NotInNoGapRegime, ZeroMassSet
from .oracles import OracleHandle
from .profiles import DESK
from .subroutines import compare, compare_budget, compare_points
from .uniformity import ACCEPT, REJECT


def epsilon_ladder(eps: float):
    """The four derived tolerances (eps1, eps2, eps3, eps4)."""
    return eps / 10.0, eps / 2.0, eps / 48.0, eps / 6.0


@dataclass(frozen=True)
class SplitPoint:
    i_star: int   # first position (ascending-weight order) with prefix > 2 eps1
    k_star: int   # i_star - 1 (meaningful in the no-gap regime)
    heavy: bool   # True when the prefix below i_star weighs at most eps1


class KnownTarget:
    """A target distribution reordered by ascending weight.

    Positions 1..N refer to the ascending-weight order; sorted_order
    maps position -> original label and prefix_sums[k] is the target
    mass of positions 1..k.
    """

    def __init__(self, dstar: Distribution):
        self.dstar = dstar
        self.n = dstar.n
        self.sorted_order = np.argsort(dstar.weights, kind="stable") + 1
        self.sorted_weights = dstar.weights[self.sorted_order - 1]
        self.prefix_sums = np.concatenate(([0.0], np.cumsum(self.sorted_weights)))
        self.position_of = np.empty(self.n, dtype=np.int64)
        self.position_of[self.sorted_order - 1] = np.arange(1, self.n + 1)

    def weight_at(self, pos):
        """Target weight of the point at ascending position pos."""
        return float(self.sorted_weights[pos - 1])

    def prefix_mass(self, k):
        """Target mass of positions 1..k."""
        return float(self.prefix_sums[k])

    def prefix_labels(self, k):
        """Original labels of positions 1..k, sorted ascending."""
        return np.sort(self.sorted_order[:k])

    def interval_labels(self, lo, hi):
        """Original labels of positions lo..hi, sorted ascending."""
        return np.sort(self.sorted_order[lo - 1 : hi])

    @lru_cache(maxsize=8)
    def split(self, eps1: float) -> SplitPoint:
        # Tiny slack so accumulated float error in the prefix sums
        # cannot flip a prefix that equals 2 eps1 exactly.
        thr = 2.0 * eps1 * (1.0 + 1e-12) + 1e-15
        i_star = int(np.searchsorted(self.prefix_sums, thr, side="right"))
        heavy = self.prefix_mass(i_star - 1) <= eps1
        return SplitPoint(i_star, i_star - 1, heavy)

    def sample(self, rng, size):
        """size iid original labels drawn from the target itself."""
        u = rng.random(size)
        pos = np.searchsorted(self.dstar.prefix[1:], u, side="right")
        np.clip(pos, 0, self.n - 1, out=pos)
        return pos + 1


@dataclass
class WitnessPartition:
    intervals: list  # (lo, hi) position intervals, rightmost first
    target_point: int  # position j
    heavy: bool  # single wide witness because the point itself is heavy


def build_witnesses(target: KnownTarget, j: int, eps1: float) -> WitnessPartition:
    """Partition positions 1..j-1 into comparable-witness intervals.

    When the target weight of j is at least eps1 the whole prefix is a
    single witness. Otherwise a right-to-left greedy scan cuts maximal
    intervals of mass at most w(j); each has mass at least w(j)/2, and
    a light leftover prefix is merged into the last interval (mass at
    most 2 w(j)).
    """
    sp = target.split(eps1)
    if sp.heavy:
        raise NotInNoGapRegime("target splits into the heavy regime")
    if j <= sp.k_star:
        raise NotInNoGapRegime(f"position {j} not above the split {sp.k_star}")
    wj = target.weight_at(j)
    if wj >= eps1:
        return WitnessPartition([(1, j - 1)], j, True)
    prefix = target.prefix_sums
    intervals = []
    cur = j - 1
    while cur >= 1:
        m = int(np.searchsorted(prefix, prefix[cur] - wj, side="left"))
        m = min(m, cur - 1)
        if m <= 0:
            intervals.append((1, cur))
            break
        intervals.append((m + 1, cur))
        cur = m
        if prefix[cur] <= wj:
            lo, hi = intervals.pop()
            intervals.append((1, hi))
            break
    return WitnessPartition(intervals, j, False)


# Pair-query tester -------------------------------------------------


def pcond_test_known(h: OracleHandle, target: KnownTarget, eps: float,
                     profile=DESK) -> str:
    dstar = target.dstar
    n = h.dist.n
    eta = eps / 6.0
    buckets = bucketize(dstar, KnownIdentity(eta))
    b = buckets.b
    # Phase one: bucket weight screening from plain samples.
    m = math.ceil(profile["known_m_c"] * b * b * math.log2(2.0 * b) / eta**2)
    idx, counts = h.draw_counts(QuerySet.full(), m)
    est = np.zeros(b)
    np.add.at(est, buckets.bucket_index_of[idx - 1], counts)
    est /= m
    for j in range(b):
        star = buckets.bucket_mass(dstar, j)
        if abs(star - est[j]) > eta / b:
            return REJECT
    # Phase two: cross-sample ratio checks on comparable pairs.
    s = math.ceil(profile["known_s_c"] * b / eps)
    xs = target.sample(h.rng, s)
    ys = h.draw_many(QuerySet.full(), s)
    delta = 1.0 / (10.0 * s * s)
    for x in xs:
        x = int(x)
        wx = dstar.weight(x)
        for y in ys:
            y = int(y)
            wy = dstar.weight(y)
            if wy <= 0 or not (0.5 <= wx / wy <= 2.0):
                continue
            if x == y:
                continue  # exact ratio 1 passes the one-sided check
            try:
                out = compare_points(h, x, y, eta / (4.0 * b), 2.0, delta, profile)
            except ZeroMassSet:
                return REJECT
            # The comparison estimates D(y)/D(x); hold it against the
            # matching target ratio.
            if out.is_low or (out.is_ratio
                              and out.rho < (1.0 - eta / (2.0 * b)) * wy / wx):
                return REJECT
    return ACCEPT


# General conditional-query tester ----------------------------------


def cond_test_known(h: OracleHandle, target: KnownTarget, eps: float,
                    profile=DESK) -> str:
    eps1 = epsilon_ladder(eps)[0]
    sp = target.split(eps1)
    if sp.heavy:
        return _test_known_heavy(h, target, eps, sp, profile)
    return _test_known_main(h, target, eps, sp, profile)


def _test_known_heavy(h, target, eps, sp, profile):
    """Every position at or above the split is individually heavy;
    check their frequencies point by point."""
    eps1 = eps / 10.0
    m = math.ceil(profile["heavy_m_c"] * math.log2(4.0 / eps) / eps**4)
    idx, counts = h.draw_counts(QuerySet.full(), m)
    freq = np.zeros(target.n + 1)
    freq[idx] = counts / m
    upper_mass = 0.0
    reject = False
    for pos in range(sp.i_star, target.n + 1):
        label = int(target.sorted_order[pos - 1])
        est = float(freq[label])
        upper_mass += est
        if abs(est - target.weight_at(pos)) > eps1**2:
            reject = True
    leftover = 1.0 - upper_mass
    if leftover - target.prefix_mass(sp.i_star - 1) > eps1:
        reject = True
    return REJECT if reject else ACCEPT


def _test_known_main(h, target, eps, sp, profile):
    eps1, eps2, eps3, eps4 = epsilon_ladder(eps)
    k = sp.k_star
    full = QuerySet.full()
    low_prefix = QuerySet.explicit(target.prefix_labels(k))
    reject = False
    # Gate: the mass below the split must look right.
    m_gate = math.ceil(profile["main_gate_c"] / eps**2)
    gate = h.draw_subset_count(full, low_prefix, m_gate) / m_gate
    if not (eps1 / 2.0 <= gate <= 2.5 * eps1):
        reject = True
    ell = math.ceil(profile["main_l_c"] / eps)
    h_count = math.ceil(profile["main_h_c"] / eps)
    m_recheck = math.ceil(profile["main_recheck_c"] * math.log2(4.0 / eps) / eps)
    witness_delta = 1.0 / (10.0 * ell * h_count)
    witness_m = compare_budget(eps4 / 8.0, 4.0, witness_delta, profile)
    drawn = h.draw_many(full, ell)
    for label in drawn:
        label = int(label)
        j = int(target.position_of[label - 1])
        if j <= k:
            # Oblivious padding: a below-split point burns the same
            # budget the above-split checks would have used.
            h.burn(full, m_recheck + h_count * witness_m)
            continue
        # Re-check the target prefix mass up to this point.
        up_to_j = QuerySet.explicit(target.prefix_labels(j))
        est = h.draw_subset_count(full, up_to_j, m_recheck) / m_recheck
        star = target.prefix_mass(j)
        if not ((1.0 - eps3) * star <= est <= (1.0 + eps3) * star):
            reject = True
        wj = target.weight_at(j)
        if wj >= eps1:
            # The whole prefix below j is a single wide witness.
            try:
                out = compare(
                    h,
                    QuerySet.explicit([label]),
                    QuerySet.explicit(target.prefix_labels(j - 1)),
                    eps2 / 16.0,
                    2.0 / eps1,
                    1.0 / (10.0 * ell),
                    profile,
                )
            except ZeroMassSet:
                reject = True
                continue
            ratio_star = target.prefix_mass(j - 1) / wj
            if not (out.is_ratio
                    and (1.0 - eps2 / 8.0) * ratio_star
                    <= out.rho
                    <= (1.0 + eps2 / 8.0) * ratio_star):
                reject = True
            continue
        parts = build_witnesses(target, j, eps1)
        picks = h.rng.integers(0, len(parts.intervals), size=h_count)
        for a in picks:
            lo, hi = parts.intervals[int(a)]
            wit = QuerySet.explicit(target.interval_labels(lo, hi))
            try:
                out = compare(
                    h,
                    QuerySet.explicit([label]),
                    wit,
                    eps4 / 8.0,
                    4.0,
                    witness_delta,
                    profile,
                )
            except ZeroMassSet:
                reject = True
                continue
            ratio_star = (target.prefix_mass(hi) - target.prefix_mass(lo - 1)) / wj
            if not (out.is_ratio
                    and (1.0 - eps4 / 4.0) * ratio_star
                    <= out.rho
                    <= (1.0 + eps4 / 4.0) * ratio_star):
                reject = True
    return REJECT if reject else ACCEPT
