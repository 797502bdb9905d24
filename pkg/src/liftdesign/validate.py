"""Agreement checks between the derived distribution and simulation.

The core check is a Kolmogorov-Smirnov campaign: draw random parameter
sets, simulate lift samples under each, and test them against the derived
CMF. If both routes implement the same distribution, about 5% of runs
reject at the 5% level. A timing comparison of the two quantile routes is
also provided; its result is hardware-dependent and reported, never
asserted.
"""

from dataclasses import dataclass
import math
import time

import numpy as np

from .derived import DEFAULT_POLICY, TruncationPolicy, lift_cmf_values, lift_quantile
from .errors import CampaignError, ConsistencyError, InvalidParameterError
from .model import LiftParams
from .simulate import SampleSet, SimulationConfig, derive_seed, empirical_quantile, simulate_lift

REJECTION_ALPHA = 0.05


@dataclass(frozen=True)
class ParamRanges:
    """Uniform sampling ranges for campaign parameters."""

    test_rate: tuple[float, float] = (300.0, 8000.0)
    control_rate: tuple[float, float] = (300.0, 8000.0)
    reach: tuple[float, float] = (0.3, 6.0)
    scale: tuple[float, float] = (0.3, 1.2)


@dataclass(frozen=True)
class ValidationRun:
    """One campaign run: a parameter draw and its K-S outcome."""

    params: LiftParams
    ks_statistic: float
    p_value: float
    rejected: bool
    num_samples: int


@dataclass(frozen=True)
class TimingComparison:
    """Wall-clock comparison of the two quantile routes."""

    derived_seconds: float
    simulated_seconds: float
    speedup: float
    derived_quantile: float
    simulated_quantile: float


@dataclass(frozen=True)
class CampaignReport:
    """Aggregate of a K-S campaign."""

    runs: tuple[ValidationRun, ...]
    num_rejections: int
    expected_rejections: float
    timing: TimingComparison | None = None


def ks_statistic(samples: SampleSet, params: LiftParams, policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """Supremum distance between the empirical CMF of the samples and the
    derived CMF, evaluated from both sides of each sample point."""
    if isinstance(samples.params, tuple):
        raise InvalidParameterError("K-S validation applies to lift samples, not difference samples")
    if samples.params != params:
        raise InvalidParameterError(
            f"samples were generated under {samples.params}, not {params}"
        )
    ordered = np.sort(samples.values)
    n = ordered.size
    cmf = lift_cmf_values(ordered, params, policy)
    steps = np.arange(1, n + 1) / n
    d_plus = float(np.max(steps - cmf))
    d_minus = float(np.max(cmf - (steps - 1.0 / n)))
    return max(d_plus, d_minus, 0.0)


def ks_p_value(statistic: float, n: int) -> float:
    """Asymptotic Kolmogorov tail probability of the statistic at sample
    size ``n``: ``2 * sum_i (-1)^(i-1) exp(-2 i^2 n d^2)``, truncated when
    terms drop below 1e-10. Non-positive statistics return 1."""
    if n < 35:
        raise InvalidParameterError(f"asymptotic p-value needs n >= 35, got {n}")
    if statistic <= 0:
        return 1.0
    t = math.sqrt(n) * statistic
    total = 0.0
    sign = 1.0
    for i in range(1, 1000):
        term = math.exp(-2.0 * (i * t) ** 2)
        total += sign * term
        if term < 1e-10:
            break
        sign = -sign
    return min(max(2.0 * total, 0.0), 1.0)


def _draw_params(rng: np.random.Generator, ranges: ParamRanges) -> LiftParams:
    return LiftParams(
        test_rate=float(rng.uniform(*ranges.test_rate)),
        control_rate=float(rng.uniform(*ranges.control_rate)),
        reach=float(rng.uniform(*ranges.reach)),
        scale=float(rng.uniform(*ranges.scale)),
    )


def run_campaign(
    num_runs: int = 500,
    samples_per_run: int = 1_000,
    param_ranges: ParamRanges = ParamRanges(),
    seed: int = 0,
    policy: TruncationPolicy = DEFAULT_POLICY,
) -> CampaignReport:
    """Randomized K-S campaign: per run, draw parameters, simulate, test
    against the derived CMF at the 5% level. Per-run streams derive from
    (seed, run index), so a fixed seed reproduces the report exactly."""
    if num_runs < 20:
        raise InvalidParameterError(f"campaigns need at least 20 runs, got {num_runs}")
    runs = []
    for i in range(num_runs):
        try:
            param_rng = np.random.default_rng(np.random.SeedSequence(entropy=(seed, i, 0)))
            params = _draw_params(param_rng, param_ranges)
            config = SimulationConfig(num_samples=samples_per_run, seed=derive_seed(seed, i, 1))
            samples = simulate_lift(params, config)
            stat = ks_statistic(samples, params, policy)
            p = ks_p_value(stat, samples_per_run)
        except Exception as exc:
            raise CampaignError(f"campaign run {i} failed: {exc}") from exc
        runs.append(ValidationRun(params, stat, p, p < REJECTION_ALPHA, samples_per_run))
    rejections = sum(r.rejected for r in runs)
    return CampaignReport(
        runs=tuple(runs),
        num_rejections=rejections,
        expected_rejections=REJECTION_ALPHA * num_runs,
    )


def timing_comparison(
    params: LiftParams,
    num_samples: int = 10_000_000,
    p: float = 0.95,
    seed: int = 0,
    policy: TruncationPolicy = DEFAULT_POLICY,
) -> TimingComparison:
    """Time the derived quantile (root finding on the CMF) against the
    simulated one (generate samples, take the empirical percentile) and
    check the two values agree within 0.001. Speedup above 1 means the
    simulated route was faster; it is reported, never asserted."""
    start = time.perf_counter()
    derived_q = lift_quantile(p, params, policy)
    derived_seconds = time.perf_counter() - start

    start = time.perf_counter()
    samples = simulate_lift(params, SimulationConfig(num_samples=num_samples, seed=seed))
    simulated_q = empirical_quantile(samples, p)
    simulated_seconds = time.perf_counter() - start

    if abs(derived_q - simulated_q) > 1e-3:
        raise ConsistencyError(
            f"quantile routes disagree: derived {derived_q} vs simulated {simulated_q}"
        )
    return TimingComparison(
        derived_seconds=derived_seconds,
        simulated_seconds=simulated_seconds,
        speedup=derived_seconds / simulated_seconds,
        derived_quantile=derived_q,
        simulated_quantile=simulated_q,
    )
