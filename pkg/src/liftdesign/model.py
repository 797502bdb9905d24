"""Study algebra for lift experiments.

A lift study splits an audience into a test group (shown adverts) and a
control group (not shown adverts). The control side is scaled by
``scale = N_test / N_control`` so the groups are comparable, and only a
fraction ``reach`` of the test group actually sees an advert. The
functions here encode the deterministic relationships between the
reported conversion counts: incrementality, lift, and the Poisson-rate
parameterization used by the distribution and simulation layers.
"""

from dataclasses import dataclass

from .errors import InvalidParameterError, UndefinedLiftError

# Below ~30 expected control conversions the chance of zero reached
# control conversions (an undefined lift) stops being negligible.
MIN_CONTROL_CONVERSIONS = 30.0


@dataclass(frozen=True)
class GroupCounts:
    """Conversion counts reported for one cell of a lift study."""

    test_conversions: int
    control_conversions: int
    reached_test_conversions: int

    def __post_init__(self):
        for name in ("test_conversions", "control_conversions", "reached_test_conversions"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 0:
                raise InvalidParameterError(f"{name} must be a non-negative integer, got {value!r}")
        if self.reached_test_conversions > self.test_conversions:
            raise InvalidParameterError(
                "reached_test_conversions cannot exceed test_conversions "
                f"({self.reached_test_conversions} > {self.test_conversions})"
            )


@dataclass(frozen=True)
class SplitSpec:
    """Audience geometry of a study: test/control size ratio and reach.

    ``scale`` is the test-to-control group size ratio. ``reach`` is the
    fraction of the test group shown an advert; at the design layer it is
    a true fraction in (0, 1], while the distribution layer
    (:class:`LiftParams`) accepts any positive reach so parameter sweeps
    stay unconstrained.
    """

    scale: float = 1.0
    reach: float = 1.0

    def __post_init__(self):
        if not self.scale > 0:
            raise InvalidParameterError(f"scale must be positive, got {self.scale}")
        if not 0 < self.reach <= 1:
            raise InvalidParameterError(f"reach must be in (0, 1], got {self.reach}")


@dataclass(frozen=True)
class StudyDesign:
    """Practitioner inputs for a single-cell study.

    ``control_conversions`` is the expected conversion count in the
    (unscaled) control group; ``expected_lift`` is the minimum lift the
    study should detect; ``alpha`` is the one-tailed significance level.
    """

    control_conversions: float
    expected_lift: float
    split: SplitSpec = SplitSpec()
    alpha: float = 0.05

    def __post_init__(self):
        if not self.control_conversions >= MIN_CONTROL_CONVERSIONS:
            raise InvalidParameterError(
                f"control_conversions must be at least {MIN_CONTROL_CONVERSIONS:.0f} "
                f"(undefined-lift mass is not negligible below that), got {self.control_conversions}"
            )
        if not self.expected_lift >= 0:
            raise InvalidParameterError(f"expected_lift must be >= 0, got {self.expected_lift}")
        if not 0 < self.alpha < 0.5:
            raise InvalidParameterError(f"alpha must be in (0, 0.5), got {self.alpha}")


@dataclass(frozen=True)
class MultiCellDesign:
    """Inputs for a two-cell study comparing lifts between cells A and B.

    The test statistic is the difference in lifts (cell B minus cell A).
    Reach and scale are shared across cells, and the expected control
    conversions in cell B default to the cell-A value when not given.
    """

    control_conversions_a: float
    lift_a: float
    min_detectable_difference: float
    control_conversions_b: float | None = None
    split: SplitSpec = SplitSpec()
    alpha: float = 0.05

    def __post_init__(self):
        if self.control_conversions_b is None:
            object.__setattr__(self, "control_conversions_b", self.control_conversions_a)
        for name in ("control_conversions_a", "control_conversions_b"):
            value = getattr(self, name)
            if not value >= MIN_CONTROL_CONVERSIONS:
                raise InvalidParameterError(
                    f"{name} must be at least {MIN_CONTROL_CONVERSIONS:.0f}, got {value}"
                )
        if not self.lift_a >= 0:
            raise InvalidParameterError(f"lift_a must be >= 0, got {self.lift_a}")
        if not self.min_detectable_difference > 0:
            raise InvalidParameterError(
                f"min_detectable_difference must be positive, got {self.min_detectable_difference}"
            )
        if not 0 < self.alpha < 0.5:
            raise InvalidParameterError(f"alpha must be in (0, 0.5), got {self.alpha}")


@dataclass(frozen=True)
class LiftParams:
    """Distribution-level parameterization of the lift statistic.

    ``test_rate`` and ``control_rate`` are the Poisson rates of the test
    and control conversion counts. Unlike :class:`SplitSpec`, reach is
    only required to be positive here: the distribution is well defined
    for reach above 1 and validation sweeps use such values.
    """

    test_rate: float
    control_rate: float
    reach: float
    scale: float

    def __post_init__(self):
        for name in ("test_rate", "control_rate", "reach", "scale"):
            value = getattr(self, name)
            if not value > 0:
                raise InvalidParameterError(f"{name} must be positive, got {value}")


def lift_from_counts(counts: GroupCounts, scale: float) -> float:
    """Lift from the three reported counts: incrementality relative to the
    reached part of the scaled control group.

    Raises :class:`UndefinedLiftError` when the denominator (the reached
    scaled-control conversions) is zero.
    """
    scaled_control = scale * counts.control_conversions
    denominator = scaled_control - counts.test_conversions + counts.reached_test_conversions
    if denominator == 0:
        raise UndefinedLiftError(
            "lift is undefined: reached scaled-control conversions are zero"
        )
    return (counts.test_conversions - scaled_control) / denominator


def incrementality_from_counts(counts: GroupCounts, scale: float) -> float:
    """Extra conversions attributable to the campaign: test minus scaled control."""
    return counts.test_conversions - scale * counts.control_conversions


def implied_test_rate(control_rate: float, split: SplitSpec, expected_lift: float) -> float:
    """Poisson rate of the test-group count implied by a control rate,
    a split, and an expected lift: ``scale * control_rate * (1 + reach * lift)``.
    """
    if not control_rate > 0:
        raise InvalidParameterError(f"control_rate must be positive, got {control_rate}")
    factor = 1.0 + split.reach * expected_lift
    if not factor > 0:
        raise InvalidParameterError(
            f"1 + reach*expected_lift must be positive, got {factor} "
            f"(reach={split.reach}, expected_lift={expected_lift})"
        )
    rate = split.scale * control_rate * factor
    if not rate > 0:
        raise InvalidParameterError(f"implied test rate is non-positive: {rate}")
    return rate


def params_for_lift(control_conversions: float, split: SplitSpec, expected_lift: float) -> LiftParams:
    """Distribution parameters for a design point; ``expected_lift=0`` gives
    the null-hypothesis parameterization."""
    return LiftParams(
        test_rate=implied_test_rate(control_conversions, split, expected_lift),
        control_rate=float(control_conversions),
        reach=split.reach,
        scale=split.scale,
    )


def audience_size(control_conversions: float, conversion_rate: float, num_groups: int) -> float:
    """Total audience needed for ``num_groups`` equally sized groups, given a
    conversion rate (conversions divided by audience size)."""
    if not 0 < conversion_rate < 1:
        raise InvalidParameterError(f"conversion_rate must be in (0, 1), got {conversion_rate}")
    if not num_groups >= 1:
        raise InvalidParameterError(f"num_groups must be at least 1, got {num_groups}")
    return (control_conversions / conversion_rate) * num_groups
