"""Power and minimum-sample-size calculations for lift studies.

Single-cell studies can use either the derived distribution (exact, via
the truncated series) or seeded simulation; the two-cell difference
statistic has no tractable closed form, so multi-cell calculations are
simulation only.
"""

from dataclasses import dataclass, replace

import numpy as np

from .derived import DEFAULT_POLICY, TruncationPolicy, lift_cmf, lift_quantile
from .errors import BracketingError, InvalidParameterError
from .model import (
    MIN_CONTROL_CONVERSIONS,
    MultiCellDesign,
    LiftParams,
    SplitSpec,
    StudyDesign,
    audience_size,
    params_for_lift,
)
from .simulate import SampleSet, SimulationConfig, derive_seed, empirical_quantile, simulate_diff, simulate_lift

METHODS = ("derived", "simulated")


@dataclass(frozen=True)
class PowerReport:
    """Outcome of a power calculation, including the critical value used."""

    power: float
    critical_value: float
    method: str
    null_params: LiftParams | tuple[LiftParams, LiftParams]
    alt_params: LiftParams | tuple[LiftParams, LiftParams]
    config: SimulationConfig | None = None


@dataclass(frozen=True)
class SampleSizeReport:
    """Outcome of a minimum-sample-size search."""

    min_control_conversions: float
    achieved_power: float
    target_power: float
    iterations: int
    bracket: tuple[float, float]
    audience: float | None = None


def _check_method(method: str):
    if method not in METHODS:
        raise InvalidParameterError(f"method must be one of {METHODS}, got {method!r}")


def _alt_config(config: SimulationConfig) -> SimulationConfig:
    # alternative-hypothesis samples come from an independent stream so the
    # power estimate is not coupled to the critical-value estimate
    return replace(config, seed=derive_seed(config.seed, 1))


def _exceedance(samples: SampleSet, c: float) -> float:
    # strictly above: mass sitting exactly on the critical value counts as
    # acceptance, keeping realized type-I error at most alpha for a
    # discrete statistic
    return float(np.mean(samples.values > c))


def critical_value(
    design: StudyDesign,
    method: str = "derived",
    config: SimulationConfig | None = None,
    policy: TruncationPolicy = DEFAULT_POLICY,
) -> float:
    """(1 - alpha) quantile of the lift under the null hypothesis of zero
    expected lift."""
    _check_method(method)
    null_params = params_for_lift(design.control_conversions, design.split, 0.0)
    if method == "derived":
        return lift_quantile(1.0 - design.alpha, null_params, policy)
    cfg = config or SimulationConfig()
    return empirical_quantile(simulate_lift(null_params, cfg), 1.0 - design.alpha)


def power_single_cell(
    design: StudyDesign,
    method: str = "derived",
    config: SimulationConfig | None = None,
    policy: TruncationPolicy = DEFAULT_POLICY,
) -> PowerReport:
    """Probability of detecting the design's expected lift at its
    significance level."""
    _check_method(method)
    if not design.expected_lift > 0:
        raise InvalidParameterError("power requires a positive expected_lift")
    null_params = params_for_lift(design.control_conversions, design.split, 0.0)
    alt_params = params_for_lift(design.control_conversions, design.split, design.expected_lift)
    cfg = config or SimulationConfig()
    c = critical_value(design, method, cfg, policy)
    if method == "derived":
        power = 1.0 - lift_cmf(c, alt_params, policy).value
        return PowerReport(power, c, method, null_params, alt_params, None)
    alt_samples = simulate_lift(alt_params, _alt_config(cfg))
    return PowerReport(_exceedance(alt_samples, c), c, method, null_params, alt_params, cfg)


def _multi_cell_params(design: MultiCellDesign):
    cell_a = params_for_lift(design.control_conversions_a, design.split, design.lift_a)
    cell_b_null = params_for_lift(design.control_conversions_b, design.split, design.lift_a)
    cell_b_alt = params_for_lift(
        design.control_conversions_b, design.split, design.lift_a + design.min_detectable_difference
    )
    return cell_a, cell_b_null, cell_b_alt


def power_multi_cell(design: MultiCellDesign, config: SimulationConfig | None = None) -> PowerReport:
    """Probability of detecting the minimum difference in lift between two
    cells. Null: both cells at the cell-A lift; alternative: cell B shifted
    up by the minimum detectable difference. Simulation only."""
    cell_a, cell_b_null, cell_b_alt = _multi_cell_params(design)
    cfg = config or SimulationConfig()
    null_samples = simulate_diff(cell_a, cell_b_null, cfg)
    c = empirical_quantile(null_samples, 1.0 - design.alpha)
    alt_samples = simulate_diff(cell_a, cell_b_alt, _alt_config(cfg))
    return PowerReport(
        _exceedance(alt_samples, c), c, "simulated",
        (cell_a, cell_b_null), (cell_a, cell_b_alt), cfg,
    )


def _bisect_sample_size(power_at, target_power: float, alpha: float):
    """Bisect expected control conversions until power crosses the target;
    the objective must be deterministic (fixed probe seed)."""
    if not alpha < target_power < 1.0:
        raise InvalidParameterError(
            f"target_power must be in (alpha, 1) = ({alpha}, 1), got {target_power}"
        )
    lo = MIN_CONTROL_CONVERSIONS
    p_lo = power_at(lo)
    if p_lo >= target_power:
        return lo, p_lo, 0, (lo, lo)
    hi, p_hi = lo, p_lo
    for _ in range(60):
        lo, p_lo = hi, p_hi
        hi *= 2.0
        p_hi = power_at(hi)
        if p_hi >= target_power:
            break
    else:
        raise BracketingError(
            f"target power {target_power} not attainable within 60 bracket doublings"
        )
    iterations = 0
    while hi - lo > max(1.0, 1e-3 * hi):
        mid = 0.5 * (lo + hi)
        iterations += 1
        p_mid = power_at(mid)
        if p_mid >= target_power:
            hi, p_hi = mid, p_mid
        else:
            lo = mid
    return hi, p_hi, iterations, (lo, hi)


def min_sample_size_single(
    expected_lift: float,
    target_power: float = 0.8,
    split: SplitSpec = SplitSpec(),
    alpha: float = 0.05,
    method: str = "simulated",
    config: SimulationConfig | None = None,
    conversion_rate: float | None = None,
    num_groups: int = 2,
) -> SampleSizeReport:
    """Minimum expected control conversions for a single-cell study to reach
    the target power. Supplying ``conversion_rate`` adds the implied total
    audience across ``num_groups`` groups."""
    _check_method(method)
    cfg = config or SimulationConfig()

    def power_at(cc: float) -> float:
        d = StudyDesign(cc, expected_lift, split, alpha)
        return power_single_cell(d, method, cfg).power

    found, achieved, iterations, bracket = _bisect_sample_size(power_at, target_power, alpha)
    audience = audience_size(found, conversion_rate, num_groups) if conversion_rate is not None else None
    return SampleSizeReport(found, achieved, target_power, iterations, bracket, audience)


def min_sample_size_multi(
    lift_a: float,
    min_detectable_difference: float,
    target_power: float = 0.8,
    split: SplitSpec = SplitSpec(),
    alpha: float = 0.05,
    config: SimulationConfig | None = None,
    conversion_rate: float | None = None,
    num_groups: int = 4,
) -> SampleSizeReport:
    """Minimum expected cell-A control conversions for a two-cell study
    (cell B tied equal) to reach the target power."""
    cfg = config or SimulationConfig()

    def power_at(cc: float) -> float:
        d = MultiCellDesign(cc, lift_a, min_detectable_difference, split=split, alpha=alpha)
        return power_multi_cell(d, cfg).power

    found, achieved, iterations, bracket = _bisect_sample_size(power_at, target_power, alpha)
    audience = audience_size(found, conversion_rate, num_groups) if conversion_rate is not None else None
    return SampleSizeReport(found, achieved, target_power, iterations, bracket, audience)


SWEEPS = ("control_conversions", "reach", "control_fraction")


def power_curve(
    sweep: str,
    design: StudyDesign | MultiCellDesign,
    grid,
    method: str = "derived",
    config: SimulationConfig | None = None,
) -> list[tuple[float, float]]:
    """Power along a one-dimensional sweep, in grid order.

    ``control_conversions`` varies the expected control conversions.
    ``reach`` varies reach at fixed audience (control conversions are
    unaffected by reach). ``control_fraction`` varies the control share f
    of a fixed audience: the design's control conversions are taken at a
    50:50 split, so they scale by f/0.5 while the size ratio becomes
    (1-f)/f. The latter two sweeps apply to single-cell designs only;
    multi-cell designs support the conversions sweep (simulation only).
    """
    grid = [float(x) for x in grid]
    if not grid:
        raise InvalidParameterError("grid must be non-empty")
    diffs = np.diff(grid)
    if not (np.all(diffs > 0) or np.all(diffs < 0)):
        raise InvalidParameterError("grid must be strictly monotone")

    multi = isinstance(design, MultiCellDesign)
    if sweep not in SWEEPS:
        raise InvalidParameterError(f"sweep must be one of {SWEEPS}, got {sweep!r}")
    if multi and sweep != "control_conversions":
        raise InvalidParameterError(f"sweep {sweep!r} applies to single-cell designs only")

    def power_at(point_design) -> float:
        if multi:
            return power_multi_cell(point_design, config).power
        return power_single_cell(point_design, method, config).power

    rows = []
    for x in grid:
        if sweep == "control_conversions":
            d = replace(design, control_conversions_a=x, control_conversions_b=x) if multi \
                else replace(design, control_conversions=x)
        elif sweep == "reach":
            d = replace(design, split=SplitSpec(design.split.scale, x))
        else:
            if not 0.0 < x < 1.0:
                raise InvalidParameterError(f"control fraction must be in (0, 1), got {x}")
            scaled_cc = design.control_conversions * (x / 0.5)
            d = replace(
                design,
                control_conversions=scaled_cc,
                split=SplitSpec((1.0 - x) / x, design.split.reach),
            )
        rows.append((x, power_at(d)))
    return rows
