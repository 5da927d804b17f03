# -*- coding: utf-8 -*-

import math
from fractions import Fraction

import numpy as np
import pytest

from miniminimax.constants import RNG_STREAM_SAMPLES
from miniminimax.dataset import Dataset, synthesize
from miniminimax.envelope import EnvelopeModel
from miniminimax.errors import ConfigError, DegenerateError, EmptyError
from miniminimax.helpers import RunConfig, stream_generator
from miniminimax.montecarlo import (binomial_tail, build_report, mean_lcb,
                                    quantile_lcb, sample_error, sample_points,
                                    summarize, unit_scale)


def exact_tail(k, n, q):
    q = Fraction(q)
    return sum(
        Fraction(math.comb(n, j)) * q ** j * (1 - q) ** (n - j) for j in range(k, n + 1)
    )


@pytest.fixture
def centroid_model():
    return EnvelopeModel.build(Dataset.from_arrays([[0.5, 0.5, 0.5]], [0.0]), "linf", kappa=1.0)


class TestQuantileBound:
    def test_picks_order_statistic(self):
        values = np.arange(10, dtype=float)[::-1]
        # P(Bin(10, 1/2) >= 2) = 0.989, P(Bin(10, 1/2) >= 3) = 0.945
        assert quantile_lcb(values, 0.5, 0.95) == 1.0

    @pytest.mark.parametrize("n", [1, 5, 12, 30])
    @pytest.mark.parametrize("q", [0.1, 0.5, 0.75])
    def test_binomial_tail_is_exact(self, n, q):
        for k in range(0, n + 2):
            assert binomial_tail(k, n, q) == pytest.approx(float(exact_tail(k, n, q)), abs=1e-12)

    def test_no_nontrivial_bound(self):
        assert quantile_lcb([0.1, 0.2, 0.3], 0.5, 0.95) == -math.inf

    def test_all_equal(self):
        assert quantile_lcb(np.full(100, 0.25), 0.5, 0.95) == 0.25

    def test_monotone(self):
        values = np.random.default_rng(1).exponential(size=500)
        by_q = [quantile_lcb(values, q, 0.95) for q in (0.1, 0.25, 0.5, 0.75, 0.9)]
        assert by_q == sorted(by_q)
        by_confidence = [quantile_lcb(values, 0.5, c) for c in (0.5, 0.8, 0.95, 0.99)]
        assert by_confidence == sorted(by_confidence, reverse=True)

    def test_below_empirical_quantile(self):
        values = np.sort(np.random.default_rng(2).random(1000))
        for q in (0.05, 0.25, 0.5, 0.75, 0.95):
            assert quantile_lcb(values, q, 0.95) <= values[math.ceil(1000 * q) - 1]

    def test_median_coverage(self):
        rng = np.random.default_rng(12)
        n = 200
        covered = sum(quantile_lcb(rng.random(n), 0.5, 0.95) <= 0.5 for _ in range(1000))
        assert covered / 1000 >= 0.95

        k = max(
            k for k in range(1, n + 1) if binomial_tail(k, n, 0.5) >= 0.95
        )
        assert binomial_tail(k, n, 0.5) >= 0.95

    @pytest.mark.parametrize("q,confidence", [(0.0, 0.95), (1.0, 0.95), (0.5, 0.0), (0.5, 1.0)])
    def test_invalid(self, q, confidence):
        with pytest.raises(ConfigError):
            quantile_lcb([1.0, 2.0], q, confidence)

    def test_empty(self):
        with pytest.raises(EmptyError):
            quantile_lcb([], 0.5, 0.95)


class TestMeanBound:
    def test_known_value(self):
        assert mean_lcb(np.arange(1, 101, dtype=float), 0.95) == pytest.approx(45.72803, abs=1e-4)

    def test_constant(self):
        assert mean_lcb([2.0, 2.0, 2.0], 0.95) == 2.0

    def test_floored_at_zero(self):
        assert mean_lcb([0.0, 0.0, 10.0], 0.95) == 0.0

    def test_too_few(self):
        with pytest.raises(DegenerateError):
            mean_lcb([1.0], 0.95)

    def test_coverage_on_skewed_data(self):
        rng = np.random.default_rng(5)
        covered = sum(mean_lcb(rng.exponential(size=200), 0.95) <= 1.0 for _ in range(1000))
        assert covered / 1000 >= 0.93


class TestSampling:
    def test_determined_function(self):
        model = EnvelopeModel.build(Dataset.from_arrays([[0.0], [1.0]], [0.0, 1.0]), "linf")
        np.testing.assert_allclose(sample_error(model, 2000, seed=0), 0.0, atol=1e-12)

    def test_centroid_distribution(self, centroid_model):
        errors = sample_error(centroid_model, 20000, seed=3)
        # e* = max |w_k - 1/2|: the largest of three uniforms on [0, 1/2]
        assert abs(errors.mean() - 0.375) <= 3 * 0.000685
        (report,) = build_report(
            centroid_model, RunConfig(subcommand="mc", quantiles=(0.5,), units=("kappa2",)), errors
        )
        assert report.scale == 0.5
        median = 0.5 ** (1.0 / 3.0)
        assert 0.775 < report.quantile_lcbs[0][1] <= median + 0.01

    def test_sorted_and_nonnegative(self):
        dataset, _ = synthesize("random-lipschitz", 4, 50, seed=3)
        model = EnvelopeModel.build(dataset, "l2")
        errors = sample_error(model, 3000, seed=1)
        assert np.all(np.diff(errors) >= 0)
        assert errors[0] >= -1e-12

    def test_threads_do_not_change_sample(self):
        dataset, _ = synthesize("random-lipschitz", 3, 40, seed=2)
        model = EnvelopeModel.build(dataset, "linf")
        np.testing.assert_array_equal(
            sample_error(model, 10000, seed=9, threads=1), sample_error(model, 10000, seed=9, threads=4)
        )

    def test_prefix(self):
        np.testing.assert_array_equal(sample_points(3, 5000, seed=4), sample_points(3, 10000, seed=4)[:5000])

    def test_drawn_from_samples_stream(self):
        expected = stream_generator(4, RNG_STREAM_SAMPLES, 0).random((10, 3))
        np.testing.assert_array_equal(sample_points(3, 10, seed=4), expected)

    def test_seed_matters(self):
        assert not np.array_equal(sample_points(2, 100, seed=1), sample_points(2, 100, seed=2))

    def test_in_cube(self):
        points = sample_points(5, 1000, seed=0)
        assert points.shape == (1000, 5)
        assert points.min() >= 0.0 and points.max() < 1.0

    def test_no_samples(self):
        with pytest.raises(ConfigError):
            sample_points(2, 0, seed=0)


class TestReport:
    def test_units(self, centroid_model):
        errors = sample_error(centroid_model, 500, seed=0)
        config = RunConfig(subcommand="mc", units=("abs", "kappa2"), quantiles=(0.25, 0.75))
        absolute, scaled = build_report(centroid_model, config, errors)
        assert absolute.scale == 1.0
        assert scaled.mean_lcb == pytest.approx(absolute.mean_lcb / 0.5)
        assert scaled.max_observed == pytest.approx(absolute.max_observed / 0.5)
        assert [q for q, _ in scaled.quantile_lcbs] == [0.25, 0.75]
        assert absolute.n_samples == 500

    def test_gammahat(self):
        model = EnvelopeModel.build(Dataset.from_arrays([[0.2], [0.8]], [2.0, 6.0]), "linf")
        assert unit_scale(model, "gammahat") == 4.0
        assert unit_scale(model, "khat2") == pytest.approx(model.khat / 2)

    def test_khat2_ignores_kappa(self):
        dataset = Dataset.from_arrays([[0.0], [1.0]], [0.0, 1.0])
        model = EnvelopeModel.build(dataset, "linf", kappa=4.0)
        errors = sample_error(model, 1000, seed=0)
        config = RunConfig(subcommand="mc", units=("abs", "khat2", "kappa2"), quantiles=(0.5,))
        absolute, khat2, kappa2 = build_report(model, config, errors)
        assert model.khat == 1.0
        assert khat2.scale == 0.5
        assert kappa2.scale == 2.0
        assert khat2.max_observed * model.khat / 2 == pytest.approx(absolute.max_observed)
        assert khat2.mean_lcb * model.khat / 2 == pytest.approx(absolute.mean_lcb)
        assert kappa2.max_observed * model.kappa / 2 == pytest.approx(absolute.max_observed)

    def test_undefined_units(self):
        model = EnvelopeModel.build(Dataset.from_arrays([[0.2], [0.8]], [1.0, -1.0]), "linf", kappa=0.0)
        with pytest.raises(DegenerateError):
            unit_scale(model, "kappa2")
        flat = EnvelopeModel.build(Dataset.from_arrays([[0.2], [0.8]], [1.0, 1.0]), "linf")
        with pytest.raises(DegenerateError):
            unit_scale(flat, "khat2")
        with pytest.raises(DegenerateError):
            unit_scale(model, "gammahat")
        with pytest.raises(ConfigError):
            unit_scale(model, "percent")

    def test_summarize(self, centroid_model):
        errors = np.sort(np.linspace(0.0, 0.5, 101))
        report = summarize(centroid_model, errors, seed=7, confidence=0.9, quantiles=(0.5,), unit="abs")
        assert report.seed == 7
        assert report.sample_mean == pytest.approx(0.25)
        assert report.max_observed == 0.5
        assert report.metric == "linf"

    def test_single_sample(self, centroid_model):
        with pytest.raises(DegenerateError):
            build_report(centroid_model, RunConfig(subcommand="mc"), np.array([0.1]))
