import math

import numpy as np
import pytest
import scipy.stats

from liftdesign import (
    InvalidParameterError,
    LiftParams,
    SimulationConfig,
    ks_p_value,
    ks_statistic,
    run_campaign,
    simulate_lift,
    timing_comparison,
)
from liftdesign.derived import lift_cmf_values

FIG_PARAMS = LiftParams(1000.0, 1000.0, 1.0, 0.9)


class TestKsStatistic:
    def test_matches_scipy_exactly(self):
        samples = simulate_lift(FIG_PARAMS, SimulationConfig(1_000, seed=5))
        mine = ks_statistic(samples, FIG_PARAMS)
        ref = scipy.stats.kstest(
            samples.values, lambda x: lift_cmf_values(np.atleast_1d(x), FIG_PARAMS)
        )
        assert mine == pytest.approx(ref.statistic, abs=1e-12)

    def test_reordering_samples_changes_nothing(self):
        cfg = SimulationConfig(1_000, seed=5)
        samples = simulate_lift(FIG_PARAMS, cfg)
        stat = ks_statistic(samples, FIG_PARAMS)
        shuffled = np.random.default_rng(0).permutation(samples.values)
        reordered = type(samples)(values=shuffled, config=cfg, params=FIG_PARAMS, num_discarded=0)
        assert ks_statistic(reordered, FIG_PARAMS) == stat

    def test_simulated_samples_usually_clear_the_critical_value(self):
        # deterministic seeds; the asymptotic 5% critical value at n=1000
        crit = 1.358 / math.sqrt(1000)
        below = sum(
            ks_statistic(simulate_lift(FIG_PARAMS, SimulationConfig(1_000, seed=seed)), FIG_PARAMS) < crit
            for seed in range(10)
        )
        assert below >= 9

    def test_rejects_mismatched_params(self):
        samples = simulate_lift(FIG_PARAMS, SimulationConfig(1_000, seed=5))
        with pytest.raises(InvalidParameterError):
            ks_statistic(samples, LiftParams(900.0, 1000.0, 1.0, 0.9))

    def test_samples_placed_at_derived_quantiles_score_near_zero(self):
        # a "sample" that is the distribution's own quantile grid should be
        # near-perfect: statistic bounded by grid spacing plus atom mass
        from liftdesign import lift_quantile

        n = 200
        grid = np.array([lift_quantile((i + 0.5) / n, FIG_PARAMS) for i in range(n)])
        synthetic = type(simulate_lift(FIG_PARAMS, SimulationConfig(1_000, seed=0)))(
            values=grid, config=SimulationConfig(1_000, seed=0),
            params=FIG_PARAMS, num_discarded=0,
        )
        assert ks_statistic(synthetic, FIG_PARAMS) < 0.01


class TestKsPValue:
    def test_zero_statistic_gives_one(self):
        assert ks_p_value(0.0, 1000) == 1.0
        assert ks_p_value(-0.5, 1000) == 1.0

    def test_five_percent_table_point(self):
        assert ks_p_value(1.358 / math.sqrt(1000), 1000) == pytest.approx(0.05, abs=0.002)

    def test_one_percent_table_point(self):
        assert ks_p_value(1.628 / math.sqrt(1000), 1000) == pytest.approx(0.01, abs=0.002)

    def test_strictly_decreasing_in_statistic(self):
        stats = np.linspace(0.01, 0.1, 12)
        ps = [ks_p_value(float(d), 1000) for d in stats]
        assert all(b < a for a, b in zip(ps, ps[1:]))

    def test_small_n_rejected(self):
        with pytest.raises(InvalidParameterError):
            ks_p_value(0.1, 20)


class TestCampaign:
    def test_smoke_campaign_rejection_count(self):
        report = run_campaign(num_runs=20, samples_per_run=1_000, seed=14)
        assert report.num_rejections <= 4
        assert report.expected_rejections == pytest.approx(1.0)
        assert len(report.runs) == 20
        assert all(r.num_samples == 1_000 for r in report.runs)

    def test_fixed_seed_reproduces_report(self):
        a = run_campaign(num_runs=20, samples_per_run=1_000, seed=3)
        b = run_campaign(num_runs=20, samples_per_run=1_000, seed=3)
        assert a == b

    def test_too_few_runs_rejected(self):
        with pytest.raises(InvalidParameterError):
            run_campaign(num_runs=5)


class TestTimingComparison:
    def test_quantile_routes_agree(self):
        t = timing_comparison(LiftParams(1000.0, 1000.0, 1.0, 1.0), num_samples=1_000_000, p=0.95)
        assert abs(t.derived_quantile - t.simulated_quantile) <= 1e-3
        assert t.derived_seconds > 0 and t.simulated_seconds > 0
        assert t.speedup > 0
