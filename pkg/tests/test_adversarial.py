import numpy as np
import pytest

from condtest.adversarial import (
    GENERATORS,
    gen_block_profile,
    gen_half_split,
    gen_staircase,
    rand_block_profile,
    rand_profile,
    rand_staircase,
    staircase_domain_size,
    valid_block_exponents,
)
from condtest.distcore import tv_distance, uniform
from condtest.errors import BadBlockGeometry, DomainTooLarge, OddN


class TestHalfSplit:
    def test_frozen_example(self):
        d = gen_half_split(4, 0.25)
        assert d.weights.tolist() == [0.375, 0.375, 0.125, 0.125]

    def test_zero_eps_is_uniform(self):
        assert tv_distance(gen_half_split(10, 0.0), uniform(10)) == 0.0

    def test_exact_distance(self):
        for n in (4, 1024):
            for eps in (0.1, 0.25, 0.5):
                d = gen_half_split(n, eps)
                assert tv_distance(d, uniform(n)) == pytest.approx(eps, abs=1e-12)

    def test_guards(self):
        with pytest.raises(OddN):
            gen_half_split(5, 0.25)
        with pytest.raises(ValueError):
            gen_half_split(4, 0.75)


class TestStaircase:
    def test_frozen_small(self):
        d = gen_staircase(2, 1)
        assert d.n == 6
        assert d.weights.tolist() == pytest.approx([0.25, 0.25] + [0.125] * 4)

    def test_bucket_masses(self):
        k, r = 3, 2
        d = gen_staircase(k, r)
        pos = 0
        for i in range(1, 2 * r + 1):
            size = k**i
            assert d.weights[pos : pos + size].sum() == pytest.approx(1 / (2 * r))
            # uniform inside the bucket
            assert np.allclose(d.weights[pos : pos + size],
                               d.weights[pos])
            pos += size

    def test_pair_mass_conserved_under_perturbation(self):
        k, r = 2, 3
        base = gen_staircase(k, r)
        pert = gen_staircase(k, r, ["up_down", "down_up", "up_down"])
        pos = 0
        for i in range(1, 2 * r + 1, 2):
            pair = k**i + k ** (i + 1)
            assert pert.weights[pos : pos + pair].sum() == pytest.approx(1 / r)
            pos += pair
        assert base.n == pert.n

    def test_perturbed_distance_closed_form(self):
        # Full perturbation moves 1/(4r) per pair: L1 totals 1/2, so
        # the distance is exactly 1/4 for every r.
        for k, r in ((2, 1), (2, 4), (3, 2)):
            base = gen_staircase(k, r)
            pert = gen_staircase(k, r, ["up_down"] * r)
            assert tv_distance(base, pert) == pytest.approx(0.25, abs=1e-12)
            assert tv_distance(base, pert) == pytest.approx(
                r * (1.0 / (4.0 * r)), abs=1e-12
            )

    def test_direction_flags_differ(self):
        up = gen_staircase(2, 1, ["up_down"])
        down = gen_staircase(2, 1, ["down_up"])
        assert up.weights[0] == pytest.approx(0.375)
        assert down.weights[0] == pytest.approx(0.125)
        assert tv_distance(up, down) == pytest.approx(0.5)

    def test_domain_guard(self):
        with pytest.raises(DomainTooLarge):
            gen_staircase(16, 4)
        assert staircase_domain_size(2, 4) == 510

    def test_bad_args(self):
        with pytest.raises(ValueError):
            gen_staircase(1, 2)
        with pytest.raises(ValueError):
            gen_staircase(2, 2, ["up_down"])
        with pytest.raises(ValueError):
            gen_staircase(2, 1, ["sideways"])


class TestBlockProfile:
    def test_frozen_example(self):
        d = gen_block_profile(8, 1, 0, ["up_down", "down_up"], 0.25)
        hi, lo = 1.5 / 8, 0.5 / 8
        assert d.weights.tolist() == pytest.approx(
            [hi, hi, lo, lo, lo, lo, hi, hi]
        )

    def test_rotation(self):
        base = gen_block_profile(8, 1, 0, ["up_down", "down_up"], 0.25)
        rot = gen_block_profile(8, 1, 3, ["up_down", "down_up"], 0.25)
        assert rot.weights.tolist() == np.roll(base.weights, 3).tolist()

    def test_exact_distance_random(self):
        rng = np.random.default_rng(9)
        n = 256
        for _ in range(10):
            x = int(rng.choice(valid_block_exponents(n)))
            offset = int(rng.integers(0, n))
            prof = rand_profile(rng, 2**x)
            d = gen_block_profile(n, x, offset, prof, 0.25)
            assert tv_distance(d, uniform(n)) == pytest.approx(0.25, abs=1e-12)

    def test_block_mass_conserved(self):
        n, x = 64, 3
        d = gen_block_profile(n, x, 0, ["up_down"] * 8, 0.5)
        delta = n // 2**x
        for j in range(2**x):
            assert d.weights[j * delta : (j + 1) * delta].sum() == pytest.approx(
                delta / n
            )

    def test_geometry_guards(self):
        with pytest.raises(BadBlockGeometry):
            gen_block_profile(10, 2, 0, ["up_down"] * 4, 0.25)  # 10/4 not integer
        with pytest.raises(BadBlockGeometry):
            gen_block_profile(12, 2, 0, ["up_down"] * 4, 0.25)  # block size 3 odd
        with pytest.raises(ValueError):
            gen_block_profile(16, 2, 0, ["up_down"] * 3, 0.25)


class TestRandomWrappers:
    def test_seed_reproducibility(self):
        a = rand_staircase(2, 3, np.random.default_rng(5))
        b = rand_staircase(2, 3, np.random.default_rng(5))
        assert a == b
        c = rand_block_profile(64, 0.25, np.random.default_rng(5))
        d = rand_block_profile(64, 0.25, np.random.default_rng(5))
        assert c == d

    def test_block_wrapper_distance(self):
        d = rand_block_profile(128, 0.5, np.random.default_rng(1))
        assert tv_distance(d, uniform(128)) == pytest.approx(0.5, abs=1e-12)

    def test_exponent_validation(self):
        with pytest.raises(BadBlockGeometry):
            rand_block_profile(64, 0.25, np.random.default_rng(0), x=6)  # size 1


class TestRegistry:
    def test_names_and_dispatch(self):
        assert set(GENERATORS) == {"half_split", "staircase", "block_profile"}
        d = GENERATORS["half_split"](n=4, eps=0.25)
        assert d.weights[0] == pytest.approx(0.375)
        d = GENERATORS["staircase"](k=2, r=1)
        assert d.n == 6
        d = GENERATORS["block_profile"](
            n=8, x=1, offset=0, profile=["up_down", "down_up"], eps=0.25
        )
        assert d.n == 8
