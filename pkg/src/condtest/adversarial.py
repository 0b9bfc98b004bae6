"""Hard-instance generators.

Three families of far-from-reference distributions with exactly known
total variation distances, plus seeded random wrappers for drawing
from each family. All constructions are rational, so mass sums and
distances are exact up to float rounding.
"""

from __future__ import annotations

import numpy as np

from .distcore import Distribution, make_distribution
from .errors import BadBlockGeometry, DomainTooLarge, OddN

UP_DOWN = "up_down"
DOWN_UP = "down_up"


def gen_half_split(n: int, eps: float) -> Distribution:
    """Left half (1+2eps)/n, right half (1-2eps)/n; distance from
    uniform exactly eps."""
    if n % 2:
        raise OddN(f"n={n} must be even")
    if not 0.0 <= eps <= 0.5:
        raise ValueError("eps must lie in [0, 1/2]")
    w = np.empty(n)
    w[: n // 2] = (1.0 + 2.0 * eps) / n
    w[n // 2 :] = (1.0 - 2.0 * eps) / n
    return make_distribution(w)


def staircase_domain_size(k: int, r: int) -> int:
    return int(sum(k**i for i in range(1, 2 * r + 1)))


def gen_staircase(k: int, r: int, profile=None) -> Distribution:
    """Geometric staircase of 2r buckets, bucket i holding k^i points.

    profile=None gives the reference shape: every bucket has mass
    1/(2r), spread uniformly inside. A profile is a length-r vector of
    "up_down"/"down_up" flags; flag i shifts mass within bucket pair
    (2i-1, 2i) to (3/(4r), 1/(4r)) or the reverse. A fully perturbed
    staircase sits at distance exactly 1/4 from the reference shape.
    """
    if k < 2 or r < 1:
        raise ValueError("need k >= 2 and r >= 1")
    n = staircase_domain_size(k, r)
    if n > 2**20:
        raise DomainTooLarge(f"domain size {n} exceeds 2^20")
    if profile is not None and len(profile) != r:
        raise ValueError(f"profile must have length r={r}")
    masses = np.full(2 * r, 1.0 / (2.0 * r))
    if profile is not None:
        for i, flag in enumerate(profile):
            if flag == UP_DOWN:
                masses[2 * i] = 3.0 / (4.0 * r)
                masses[2 * i + 1] = 1.0 / (4.0 * r)
            elif flag == DOWN_UP:
                masses[2 * i] = 1.0 / (4.0 * r)
                masses[2 * i + 1] = 3.0 / (4.0 * r)
            else:
                raise ValueError(f"bad profile flag {flag!r}")
    w = np.empty(n)
    pos = 0
    for i in range(1, 2 * r + 1):
        size = k**i
        w[pos : pos + size] = masses[i - 1] / size
        pos += size
    return make_distribution(w)


def gen_block_profile(n: int, x: int, offset: int, profile, eps: float) -> Distribution:
    """2^x equal blocks, each with a heavy and a light half per its
    profile flag, the whole pattern rotated by offset; distance from
    uniform exactly eps."""
    b = 2**x
    if x < 0 or n % b:
        raise BadBlockGeometry(f"2^{x} blocks do not divide n={n}")
    delta = n // b
    if delta < 2 or delta % 2:
        raise BadBlockGeometry(f"block size {delta} must be even and >= 2")
    if len(profile) != b:
        raise ValueError(f"profile must have length 2^x={b}")
    if not 0.0 <= eps <= 0.5:
        raise ValueError("eps must lie in [0, 1/2]")
    hi = (1.0 + 2.0 * eps) / n
    lo = (1.0 - 2.0 * eps) / n
    base = np.empty(n)
    for j, flag in enumerate(profile):
        start = j * delta
        half = delta // 2
        if flag == UP_DOWN:
            base[start : start + half] = hi
            base[start + half : start + delta] = lo
        elif flag == DOWN_UP:
            base[start : start + half] = lo
            base[start + half : start + delta] = hi
        else:
            raise ValueError(f"bad profile flag {flag!r}")
    w = np.roll(base, offset % n)
    return make_distribution(w)


# Seeded random wrappers --------------------------------------------


def rand_profile(rng, length):
    return [UP_DOWN if rng.random() < 0.5 else DOWN_UP for _ in range(length)]


def rand_staircase(k: int, r: int, rng) -> Distribution:
    return gen_staircase(k, r, rand_profile(rng, r))


def valid_block_exponents(n):
    """All x with 2^x blocks of even size >= 2 inside [1, n]."""
    out = []
    x = 0
    while True:
        b = 2**x
        if b > n // 2:
            break
        if n % b == 0 and (n // b) % 2 == 0 and n // b >= 2:
            out.append(x)
        x += 1
    return out

def rand_block_profile(n: int, eps: float, rng, x=None) -> Distribution:
    choices = valid_block_exponents(n)
    if not choices:
        raise BadBlockGeometry(f"no valid block exponent for n={n}")
    if x is None:
        x = int(rng.choice(choices))
    elif x not in choices:
        raise BadBlockGeometry(f"x={x} invalid for n={n}")
    offset = int(rng.integers(0, n))
    return gen_block_profile(n, x, offset, rand_profile(rng, 2**x), eps)


GENERATORS = {
    "half_split": lambda n, eps: gen_half_split(int(n), float(eps)),
    "staircase": lambda k, r, profile=None: gen_staircase(int(k), int(r), profile),
    "block_profile": lambda n, x, offset, profile, eps: gen_block_profile(
        int(n), int(x), int(offset), profile, float(eps)
    ),
}
