import math

import numpy as np
import pytest

from bornsim import (
    ConfigError,
    EmpiricalDistribution,
    ModelConfig,
    RangeError,
    SampleBatch,
    born_probabilities,
    chi_square_gof,
    chi_square_homogeneity,
    ks_uniformity,
    marginalize,
    normalize,
    quadrature_P,
    quadrature_probabilities,
)


def batch_of(ns):
    ns = np.asarray(ns, dtype=np.int64)
    return SampleBatch(
        x=np.zeros(ns.size), y=np.zeros(ns.size), n=ns, proposals_used=max(1, ns.size)
    )


class TestEmpiricalDistribution:
    def test_total_must_match(self):
        with pytest.raises(ConfigError):
            EmpiricalDistribution(counts=np.array([1, 2]), total=4)

    def test_negative_counts_rejected(self):
        with pytest.raises(ConfigError):
            EmpiricalDistribution(counts=np.array([-1, 2]), total=1)


class TestMarginalize:
    def test_counting(self):
        emp = marginalize(batch_of([0] * 10), dim=2)
        assert emp.counts.tolist() == [10, 0]
        assert emp.total == 10

    def test_empty_batch_rejected(self):
        empty = SampleBatch(
            x=np.empty(0), y=np.empty(0), n=np.empty(0, dtype=np.int64), proposals_used=0
        )
        with pytest.raises(ConfigError):
            marginalize(empty, dim=2)

    def test_out_of_range_label(self):
        with pytest.raises(IndexError):
            marginalize(batch_of([0, 3]), dim=2)


class TestChiSquareGof:
    def test_perfect_fit(self):
        emp = EmpiricalDistribution(counts=np.array([36, 64]), total=100)
        rep = chi_square_gof(emp, [0.36, 0.64], alpha=0.01)
        assert rep.statistic == 0.0
        assert rep.p_value == 1.0
        assert rep.passed

    def test_hand_computed_statistic_and_p(self):
        # stat = 196/36 + 196/64; p for one degree of freedom equals
        # erfc(sqrt(stat / 2)), an independent route to the survival function.
        emp = EmpiricalDistribution(counts=np.array([50, 50]), total=100)
        rep = chi_square_gof(emp, [0.36, 0.64], alpha=0.01)
        expected_stat = 196.0 / 36.0 + 196.0 / 64.0
        assert rep.statistic == pytest.approx(expected_stat, rel=1e-12)
        assert rep.p_value == pytest.approx(math.erfc(math.sqrt(expected_stat / 2.0)), abs=1e-12)
        assert rep.p_value == pytest.approx(0.0035, abs=2e-4)
        assert not rep.passed
        assert rep.params["dof"] == 1

    def test_statistic_matches_direct_summation(self):
        rng = np.random.default_rng(13)
        for _ in range(30):
            dim = int(rng.integers(2, 9))
            counts = rng.integers(1, 500, size=dim)
            probs = rng.random(dim) + 0.05
            probs /= probs.sum()
            emp = EmpiricalDistribution(counts=counts, total=int(counts.sum()))
            rep = chi_square_gof(emp, probs, alpha=0.01)
            direct = 0.0
            for c, q in zip(counts, probs):
                e = emp.total * q
                direct += (c - e) ** 2 / e
            assert rep.statistic == pytest.approx(direct, rel=1e-9)

    def test_expected_must_sum_to_one(self):
        emp = EmpiricalDistribution(counts=np.array([5, 5]), total=10)
        with pytest.raises(ConfigError):
            chi_square_gof(emp, [0.5, 0.4], alpha=0.01)

    def test_count_in_zero_probability_category(self):
        emp = EmpiricalDistribution(counts=np.array([5, 5]), total=10)
        with pytest.raises(ConfigError):
            chi_square_gof(emp, [1.0, 0.0], alpha=0.01)

    def test_zero_probability_category_dropped(self):
        emp = EmpiricalDistribution(counts=np.array([7, 0, 13]), total=20)
        rep = chi_square_gof(emp, [0.36, 0.0, 0.64], alpha=0.01)
        assert rep.params["dof"] == 1

    def test_small_expected_count_warns(self):
        emp = EmpiricalDistribution(counts=np.array([99, 1]), total=100)
        with pytest.warns(UserWarning):
            chi_square_gof(emp, [0.999, 0.001], alpha=0.01)

    def test_single_category(self):
        emp = EmpiricalDistribution(counts=np.array([10]), total=10)
        rep = chi_square_gof(emp, [1.0], alpha=0.01)
        assert rep.statistic == 0.0
        assert rep.p_value == 1.0
        assert rep.passed


class TestChiSquareHomogeneity:
    def test_identical_counts_pass(self):
        a = EmpiricalDistribution(counts=np.array([40, 60]), total=100)
        rep = chi_square_homogeneity(a, a, alpha=0.01)
        assert rep.statistic == 0.0
        assert rep.passed

    def test_disjoint_counts_fail(self):
        a = EmpiricalDistribution(counts=np.array([100, 0]), total=100)
        b = EmpiricalDistribution(counts=np.array([0, 100]), total=100)
        rep = chi_square_homogeneity(a, b, alpha=0.01)
        assert not rep.passed

    def test_shape_mismatch(self):
        a = EmpiricalDistribution(counts=np.array([1, 1]), total=2)
        b = EmpiricalDistribution(counts=np.array([1, 1, 1]), total=3)
        with pytest.raises(ConfigError):
            chi_square_homogeneity(a, b, alpha=0.01)


class TestKsUniformity:
    def test_midpoint_grid_near_perfect(self):
        m = 1000
        values = (np.arange(m) + 0.5) / m
        rep = ks_uniformity(values, 0.0, 1.0, alpha=0.001)
        assert rep.statistic <= 1.0 / (2.0 * m) + 1e-15
        assert rep.passed

    def test_degenerate_sample_fails(self):
        rep = ks_uniformity(np.zeros(1000), 0.0, 1.0, alpha=0.001)
        assert rep.statistic == pytest.approx(1.0, abs=1e-3)
        assert not rep.passed

    def test_empty_rejected(self):
        with pytest.raises(ConfigError):
            ks_uniformity(np.empty(0), 0.0, 1.0, alpha=0.001)

    def test_bad_interval_rejected(self):
        with pytest.raises(ConfigError):
            ks_uniformity(np.array([0.5]), 1.0, 0.0, alpha=0.001)

    def test_out_of_range_rejected(self):
        with pytest.raises(RangeError):
            ks_uniformity(np.array([0.5, 1.1]), 0.0, 1.0, alpha=0.001)

    def test_slack_tolerated(self):
        rep = ks_uniformity(np.array([0.2, 0.5, 1.0 + 5e-10]), 0.0, 1.0, alpha=0.001)
        assert rep.params["n"] == 3

    def test_uniform_sample_passes(self):
        rng = np.random.default_rng(19)
        rep = ks_uniformity(rng.random(20_000), 0.0, 1.0, alpha=0.001)
        assert rep.passed


class TestQuadrature:
    def test_single_outcome_exact(self):
        cfg = ModelConfig(state=normalize([2.0j]))
        for grid in (64, 128, 1000):
            assert quadrature_P(cfg, 0, grid) == 1.0

    def test_equal_pair_exact_by_symmetry(self, state_equal_pair):
        cfg = ModelConfig(state=state_equal_pair)
        probs = quadrature_probabilities(cfg, 256)
        assert probs[0] == 0.5 and probs[1] == 0.5

    def test_two_outcome_reference_grid(self, cfg_two):
        probs = quadrature_probabilities(cfg_two, 4096)
        assert abs(probs[0] - 0.36) <= 2e-3
        assert abs(probs[1] - 0.64) <= 2e-3

    def test_cutoff_value_does_not_matter(self, state_two):
        a = quadrature_probabilities(ModelConfig(state=state_two, R=1.0), 512)
        b = quadrature_probabilities(ModelConfig(state=state_two, R=7.3), 512)
        # Counts are scale-free: thresholds and cell radii scale together.
        assert np.max(np.abs(a - b)) < 1e-12

    def test_grid_too_small_rejected(self, cfg_two):
        with pytest.raises(ConfigError):
            quadrature_probabilities(cfg_two, 63)

    def test_out_of_range_outcome(self, cfg_two):
        with pytest.raises(IndexError):
            quadrature_P(cfg_two, 2, 64)

    def test_matches_born_on_random_state(self):
        rng = np.random.default_rng(23)
        raw = rng.normal(size=4) + 1j * rng.normal(size=4)
        state = normalize(raw)
        cfg = ModelConfig(state=state)
        probs = quadrature_probabilities(cfg, 2048)
        assert np.max(np.abs(probs - born_probabilities(state))) <= 4e-3
