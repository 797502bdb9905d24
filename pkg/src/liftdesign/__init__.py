"""Design and validate ad lift (incrementality) studies.

Covers the full workflow: the study algebra relating conversions, reach,
and scaling; the exact derived distribution of the lift statistic; seeded
Monte Carlo simulation of lift and two-cell lift differences; power and
minimum-sample-size searches; and a Kolmogorov-Smirnov campaign checking
the derived and simulated routes against each other.
"""

from ._kernels import backend_name
from .derived import (
    CmfEvaluation,
    TruncationPolicy,
    lift_cmf,
    lift_cmf_values,
    lift_quantile,
    poisson_cmf,
    poisson_log_pmf,
    scaled_support_pmf,
)
from .design import (
    PowerReport,
    SampleSizeReport,
    critical_value,
    min_sample_size_multi,
    min_sample_size_single,
    power_curve,
    power_multi_cell,
    power_single_cell,
)
from .errors import (
    BracketingError,
    CampaignError,
    ConsistencyError,
    DegenerateRateError,
    InvalidParameterError,
    LiftDesignError,
    TruncationCapError,
    UndefinedLiftError,
)
from .model import (
    GroupCounts,
    LiftParams,
    MultiCellDesign,
    SplitSpec,
    StudyDesign,
    audience_size,
    incrementality_from_counts,
    lift_from_counts,
    params_for_lift,
    implied_test_rate,
)
from .simulate import (
    SampleSet,
    SimulationConfig,
    derive_seed,
    empirical_quantile,
    simulate_diff,
    simulate_lift,
    write_samples_csv,
)
from .validate import (
    CampaignReport,
    ParamRanges,
    TimingComparison,
    ValidationRun,
    ks_p_value,
    ks_statistic,
    run_campaign,
    timing_comparison,
)

__version__ = "0.1.0"

__all__ = [
    "BracketingError",
    "CampaignError",
    "CampaignReport",
    "CmfEvaluation",
    "ConsistencyError",
    "DegenerateRateError",
    "GroupCounts",
    "InvalidParameterError",
    "LiftDesignError",
    "LiftParams",
    "MultiCellDesign",
    "ParamRanges",
    "PowerReport",
    "SampleSet",
    "SampleSizeReport",
    "SimulationConfig",
    "SplitSpec",
    "StudyDesign",
    "TimingComparison",
    "TruncationCapError",
    "TruncationPolicy",
    "UndefinedLiftError",
    "ValidationRun",
    "audience_size",
    "backend_name",
    "critical_value",
    "derive_seed",
    "empirical_quantile",
    "incrementality_from_counts",
    "ks_p_value",
    "ks_statistic",
    "lift_cmf",
    "lift_cmf_values",
    "lift_from_counts",
    "lift_quantile",
    "min_sample_size_multi",
    "min_sample_size_single",
    "params_for_lift",
    "poisson_cmf",
    "poisson_log_pmf",
    "power_curve",
    "power_multi_cell",
    "power_single_cell",
    "run_campaign",
    "scaled_support_pmf",
    "simulate_diff",
    "simulate_lift",
    "implied_test_rate",
    "timing_comparison",
    "write_samples_csv",
]
