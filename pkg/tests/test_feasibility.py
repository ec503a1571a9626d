import math

import mpmath
import pytest

from geo_route_sim.feasibility import (
    AnalyzeConfig,
    FeasibilityParams,
    RegionKind,
    analyze_csv,
    feasibility_table,
    mean_node_count,
    monte_carlo_at_least_k,
    poisson_pmf,
    prob_at_least_k,
)


def params_for_mean(mean: float, region: RegionKind, tx_range: float = 250.0, k: int = 1):
    """Density such that the chosen region has the requested expected count."""
    full_mean = mean if region is RegionKind.FULL_CIRCLE else 4.0 * mean
    return FeasibilityParams(full_mean / (math.pi * tx_range**2), tx_range, k)


def pmf_reference(n: int, mean: float) -> float:
    """Arbitrary-precision Poisson pmf."""
    with mpmath.workdps(60):
        value = mpmath.power(mean, n) * mpmath.e ** (-mpmath.mpf(mean)) / mpmath.factorial(n)
        return float(value)


class TestMeanNodeCount:
    def test_full_circle_definition(self):
        params = params_for_mean(8.0, RegionKind.FULL_CIRCLE)
        assert mean_node_count(params, RegionKind.FULL_CIRCLE) == pytest.approx(8.0, rel=1e-12)

    def test_quarter_is_one_fourth(self):
        params = params_for_mean(8.0, RegionKind.FULL_CIRCLE)
        assert mean_node_count(params, RegionKind.QUARTER_CIRCLE) == pytest.approx(2.0, rel=1e-12)

    def test_hand_evaluated_default_densities(self):
        # 0.0002 * pi * 250^2 / 4 = 3.125 * pi
        params = FeasibilityParams(0.0002, 250.0)
        got = mean_node_count(params, RegionKind.QUARTER_CIRCLE)
        assert got == pytest.approx(3.125 * math.pi, rel=1e-12)
        assert got == pytest.approx(9.8175, abs=5e-4)

    def test_invalid_params(self):
        with pytest.raises(ValueError):
            FeasibilityParams(0.0, 250.0)
        with pytest.raises(ValueError):
            FeasibilityParams(0.1, -3.0)
        with pytest.raises(ValueError):
            FeasibilityParams(0.1, 250.0, k=-1)


class TestPoissonPmf:
    def test_zero_count_unit_mean(self):
        assert poisson_pmf(0, 1.0) == pytest.approx(math.exp(-1.0), rel=1e-15)

    def test_empty_region_is_certain(self):
        assert poisson_pmf(0, 0.0) == 1.0
        assert poisson_pmf(3, 0.0) == 0.0

    def test_against_arbitrary_precision(self):
        for n, mean in [(5, 9.8175), (0, 9.8175), (17, 9.8175), (3, 0.25), (40, 12.0)]:
            assert poisson_pmf(n, mean) == pytest.approx(pmf_reference(n, mean), rel=1e-12)

    def test_large_n_does_not_overflow(self):
        value = poisson_pmf(500, 450.0)
        assert 0.0 < value < 1.0
        assert value == pytest.approx(pmf_reference(500, 450.0), rel=1e-10)

    @pytest.mark.parametrize("mean", [0.1, 1.0, 10.0, 100.0])
    def test_normalizes(self, mean):
        n_star = int(mean + 20.0 * math.sqrt(mean) + 50.0)
        total = math.fsum(poisson_pmf(n, mean) for n in range(n_star + 1))
        assert total == pytest.approx(1.0, abs=1e-9)

    def test_invalid_arguments(self):
        with pytest.raises(ValueError):
            poisson_pmf(-1, 1.0)
        with pytest.raises(ValueError):
            poisson_pmf(1, -0.5)


class TestProbAtLeastK:
    def test_k_zero_is_certain(self):
        for mean in (0.0, 0.5, 40.0):
            assert prob_at_least_k(0, mean) == 1.0

    def test_empty_region_has_no_nodes(self):
        assert prob_at_least_k(1, 0.0) == 0.0

    @pytest.mark.parametrize("mean", [0.5, 2.0, 10.0])
    def test_closed_form_k_one(self, mean):
        assert prob_at_least_k(1, mean) == pytest.approx(1.0 - math.exp(-mean), rel=1e-12)

    def test_complements_the_head_sum(self):
        for mean in (0.3, 2.0, 9.8175, 35.0):
            for k in (1, 3, 8, 20):
                head = math.fsum(poisson_pmf(n, mean) for n in range(k))
                assert prob_at_least_k(k, mean) + head == pytest.approx(1.0, abs=1e-12)

    def test_monotone_in_k_and_mean(self):
        means = [0.2, 0.9, 2.5, 7.0, 9.8175, 25.0]
        for mean in means:
            probs = [prob_at_least_k(k, mean) for k in range(0, 25)]
            assert all(a >= b for a, b in zip(probs, probs[1:]))
        for k in (1, 3, 10):
            by_mean = [prob_at_least_k(k, mean) for mean in means]
            assert all(a <= b for a, b in zip(by_mean, by_mean[1:]))

    def test_quarter_region_never_beats_full_circle(self):
        # Eq-level region ordering: the quarter region has a quarter of the
        # mean, and the tail probability is monotone in the mean.
        for density in (0.0001, 0.0002, 0.0004):
            params = FeasibilityParams(density, 250.0)
            full = mean_node_count(params, RegionKind.FULL_CIRCLE)
            quarter = mean_node_count(params, RegionKind.QUARTER_CIRCLE)
            for k in range(1, 12):
                assert prob_at_least_k(k, quarter) <= prob_at_least_k(k, full)


class TestMonteCarlo:
    def test_k_zero_is_exactly_one(self):
        for seed in (0, 1, 99):
            params = params_for_mean(2.0, RegionKind.FULL_CIRCLE, k=0)
            est = monte_carlo_at_least_k(params, RegionKind.FULL_CIRCLE, 2000, seed)
            assert est.estimate == 1.0
            assert est.stderr == 0.0

    def test_matches_closed_form_k_one(self):
        params = params_for_mean(2.0, RegionKind.FULL_CIRCLE, k=1)
        est = monte_carlo_at_least_k(params, RegionKind.FULL_CIRCLE, 100_000, seed=42)
        expected = 1.0 - math.exp(-2.0)
        assert abs(est.estimate - expected) <= 3.0 * max(est.stderr, 1e-6)

    def test_quarter_estimate_below_full_estimate(self):
        params = params_for_mean(8.0, RegionKind.FULL_CIRCLE, k=3)
        full = monte_carlo_at_least_k(params, RegionKind.FULL_CIRCLE, 50_000, seed=7)
        quarter = monte_carlo_at_least_k(params, RegionKind.QUARTER_CIRCLE, 50_000, seed=8)
        slack = 3.0 * math.hypot(full.stderr, quarter.stderr)
        assert quarter.estimate <= full.estimate + slack

    def test_deterministic_per_seed(self):
        params = params_for_mean(5.0, RegionKind.QUARTER_CIRCLE, k=2)
        a = monte_carlo_at_least_k(params, RegionKind.QUARTER_CIRCLE, 10_000, seed=5)
        b = monte_carlo_at_least_k(params, RegionKind.QUARTER_CIRCLE, 10_000, seed=5)
        assert a == b

    def test_rejects_bad_trials(self):
        with pytest.raises(ValueError):
            monte_carlo_at_least_k(FeasibilityParams(0.1, 10.0), RegionKind.FULL_CIRCLE, 0, 1)


class TestFeasibilityTable:
    def test_row_ordering_and_k_column(self):
        rows = feasibility_table([0.0004, 0.0002], 250.0, 5, RegionKind.QUARTER_CIRCLE)
        assert [r[0] for r in rows] == [0.0002] * 5 + [0.0004] * 5
        assert [r[1] for r in rows] == [1, 2, 3, 4, 5] * 2

    def test_probability_non_increasing_in_k(self):
        rows = feasibility_table([0.0002, 0.0004], 250.0, 10, RegionKind.QUARTER_CIRCLE)
        for density in (0.0002, 0.0004):
            probs = [p for d, _, p in rows if d == density]
            assert all(a >= b for a, b in zip(probs, probs[1:]))

    def test_k_max_validated(self):
        with pytest.raises(ValueError):
            feasibility_table([0.0002], 250.0, 0, RegionKind.FULL_CIRCLE)


class TestAnalyzeCsv:
    def test_default_grid_shape(self):
        lines = analyze_csv(AnalyzeConfig()).splitlines()
        assert lines[0] == "density,k,region,probability"
        assert len(lines) == 1 + 2 * 2 * 10

    def test_probabilities_printed_at_ten_significant_digits(self):
        lines = analyze_csv(AnalyzeConfig(densities=(0.0002,), k_max=3)).splitlines()
        quarter = [l for l in lines if ",quarter_circle," in l]
        mean = 0.0002 * math.pi * 250.0**2 / 4.0
        assert quarter[0].split(",")[3] == f"{prob_at_least_k(1, mean):.10g}"

    def test_monte_carlo_columns(self):
        csv_text = analyze_csv(AnalyzeConfig(densities=(0.0002,), k_max=2, mc_trials=2000))
        lines = csv_text.splitlines()
        assert lines[0] == "density,k,region,probability,mc_estimate,mc_stderr"
        assert all(len(line.split(",")) == 6 for line in lines[1:])

    def test_deterministic(self):
        config = AnalyzeConfig(densities=(0.0002, 0.0004), k_max=4, mc_trials=500, seed=9)
        assert analyze_csv(config) == analyze_csv(config)
