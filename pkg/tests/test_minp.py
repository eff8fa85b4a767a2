from fractions import Fraction

import numpy as np
import pytest

from oracles import p_pool_direct, p_sample_direct
from sigpat.dataset import load_transactions
from sigpat.miners import MinerSpec
from sigpat.minp import (
    ADVERSARIAL_EXACT,
    adversarial_exact,
    adversarial_simulation,
    curve_export,
    curve_from_p_hats,
    curve_load,
    minp_curves,
    minp_test,
    p_hats_split_half,
)
from sigpat.randomizers import RandomizerSpec
from sigpat.statistics import StatisticSpec


def test_adversarial_exact_value():
    assert ADVERSARIAL_EXACT == Fraction(4, 5) * Fraction(5, 9) + Fraction(1, 5)
    assert adversarial_exact(0.6) == pytest.approx(29 / 45)
    assert adversarial_exact(1.0) == 1.0


def test_adversarial_simulation_estimate():
    assert abs(adversarial_simulation(100_000, seed=1) - 29 / 45) < 0.01


def test_adversarial_threshold_one():
    assert adversarial_simulation(10_000, seed=2, threshold=1.0) == 1.0


def test_adversarial_single_run_and_determinism():
    assert adversarial_simulation(1, seed=3) in (0.0, 1.0)
    assert adversarial_simulation(500, seed=9) == adversarial_simulation(500, seed=9)
    with pytest.raises(ValueError):
        adversarial_simulation(0)


def test_adversarial_p_hats_fail_the_check():
    rng = np.random.default_rng(0)
    runs = 4000
    two = rng.random(runs) < 0.2
    p = np.where(two, 2 * rng.uniform(0, 0.1, runs), rng.uniform(0.1, 1, runs))
    assert not curve_from_p_hats(p).passes


def test_uniform_p_hats_pass():
    rng = np.random.default_rng(1)
    assert curve_from_p_hats(rng.random(2000)).passes


def test_single_p_hat_step():
    c = curve_from_p_hats([0.3], grid=[0.0, 0.29, 0.3, 0.31, 1.0])
    assert c.fraction.tolist() == [0.0, 0.0, 1.0, 1.0, 1.0]


def test_curve_properties():
    rng = np.random.default_rng(4)
    p_hats = rng.random(50) * 0.9
    c = curve_from_p_hats(p_hats)
    assert c.fraction[np.searchsorted(c.grid, p_hats.max())] == 1.0
    jumps = np.diff(c.fraction)
    assert np.all(jumps >= 0)
    assert np.allclose(jumps / (1 / 50), np.round(jumps * 50))
    assert np.all((c.exceedance >= -1) & (c.exceedance <= 1))


def test_empty_outputs_counted_in_denominator():
    first = [np.array([3.0]), np.array([])]
    second = [np.array([1.0])]
    p_hats, n_empty = p_hats_split_half(first, second)
    assert n_empty == 1 and len(p_hats) == 1
    c = curve_from_p_hats(p_hats, n=2, n_empty=1)
    assert c.fraction[-1] == 0.5


def test_split_half_against_direct_p_values():
    rng = np.random.default_rng(5)
    first = [rng.integers(0, 6, rng.integers(1, 5)).astype(float) for _ in range(6)]
    second = [rng.integers(0, 6, rng.integers(0, 5)).astype(float) for _ in range(7)]
    for method, direct in (("sample", p_sample_direct), ("pool", p_pool_direct)):
        p_hats, _ = p_hats_split_half(first, second, method)
        expected = [len(s) * float(direct(s.max(), second + [s])) for s in first]
        np.testing.assert_allclose(p_hats, expected, rtol=1e-12)


def test_constant_size_pipeline_passes():
    rng = np.random.default_rng(8)
    data = rng.standard_normal((400, 30))
    curves = minp_curves(lambda i: np.sort(data[i])[-5:], 400)
    assert curves["sample"].passes and curves["pool"].passes
    np.testing.assert_array_equal(curves["sample"].p_hats, curves["pool"].p_hats)


def test_minp_test_binary_pipeline(demo_path):
    d = load_transactions(demo_path)
    c = minp_test(d, RandomizerSpec("col", seed=3), MinerSpec("itemsets", 8, 2), StatisticSpec("lift"), 40)
    assert c.n == 20 and len(c.grid) == 1000
    assert len(c.p_hats) + c.n_empty == 20
    with pytest.raises(ValueError, match="even"):
        minp_test(d, RandomizerSpec("col"), MinerSpec("itemsets", 8), StatisticSpec("lift"), 5)


def test_curve_export_round_trip(tmp_path):
    rng = np.random.default_rng(6)
    c = curve_from_p_hats(rng.random(37) / 3)
    path = tmp_path / "c.csv"
    curve_export(c, path)
    grid, fraction = curve_load(path)
    assert grid.tobytes() == c.grid.tobytes()
    assert fraction.tobytes() == c.fraction.tobytes()


def test_curve_export_sizes(tmp_path):
    empty = curve_from_p_hats([0.5], grid=[])
    curve_export(empty, tmp_path / "e.csv")
    assert (tmp_path / "e.csv").read_text() == "t,empirical_fraction,diagonal\n"
    three = curve_from_p_hats([0.5], grid=[0.0, 0.5, 1.0])
    curve_export(three, tmp_path / "t.csv")
    assert len((tmp_path / "t.csv").read_text().splitlines()) == 4


@pytest.mark.slow
def test_max10_curve_calibrated_across_seeds():
    from sigpat.synthetic import GaussianConfig, minp_test_synthetic

    seeds = 200
    fractions = np.array([
        minp_test_synthetic(GaussianConfig(k=100, seed=s), "max10", 1000, ("sample",))["sample"].fraction
        for s in range(seeds)
    ])
    grid = np.linspace(0, 1, 1000)
    se = fractions.std(axis=0, ddof=1) / np.sqrt(seeds)
    assert np.all(fractions.mean(axis=0) - grid <= 3 * se + 1e-12)


def test_pointwise_band_rejects_uniform_often():
    # Pointwise two-SE band over 1000 points: a single curve is not a reliable verdict.
    rng = np.random.default_rng(11)
    rate = np.mean([curve_from_p_hats(rng.random(500)).passes for _ in range(400)])
    assert 0.4 < rate < 0.75
