import pytest

from liftdesign import (
    GroupCounts,
    InvalidParameterError,
    LiftParams,
    MultiCellDesign,
    SplitSpec,
    StudyDesign,
    UndefinedLiftError,
    audience_size,
    incrementality_from_counts,
    lift_from_counts,
    params_for_lift,
    implied_test_rate,
)


class TestLiftFromCounts:
    def test_identical_groups_give_zero_lift(self):
        assert lift_from_counts(GroupCounts(100, 100, 100), 1.0) == 0.0

    def test_ten_percent_lift(self):
        assert lift_from_counts(GroupCounts(110, 100, 110), 1.0) == pytest.approx(0.10)

    def test_scaled_study(self):
        # frozen from direct arithmetic: (4644 - 0.5916*7189) / (0.5916*7189)
        got = lift_from_counts(GroupCounts(4644, 7189, 4644), 0.5916)
        assert got == pytest.approx(0.09193192100733104, rel=1e-12)

    def test_zero_denominator_raises(self):
        with pytest.raises(UndefinedLiftError):
            lift_from_counts(GroupCounts(100, 100, 0), 1.0)

    def test_full_reach_equal_split_reduces_to_relative_difference(self):
        for c_t in (50, 100, 173):
            for c_c in (40, 100, 260):
                counts = GroupCounts(c_t, c_c, c_t)
                assert lift_from_counts(counts, 1.0) == (c_t - c_c) / c_c


class TestIncrementality:
    def test_no_effect(self):
        assert incrementality_from_counts(GroupCounts(100, 100, 100), 1.0) == 0

    def test_twenty_extra(self):
        assert incrementality_from_counts(GroupCounts(120, 100, 120), 1.0) == 20

    def test_scaled(self):
        assert incrementality_from_counts(GroupCounts(120, 200, 120), 0.5) == pytest.approx(20)

    def test_equals_lift_times_denominator(self):
        for scale in (0.5, 1.0, 1.3):
            for counts in (GroupCounts(120, 100, 110), GroupCounts(80, 100, 70), GroupCounts(57, 31, 41)):
                denom = scale * counts.control_conversions - counts.test_conversions + counts.reached_test_conversions
                if denom == 0:
                    continue
                assert incrementality_from_counts(counts, scale) == pytest.approx(
                    lift_from_counts(counts, scale) * denom
                )


class TestImpliedTestRate:
    def test_zero_lift_collapses_to_scaled_control(self):
        assert implied_test_rate(100.0, SplitSpec(scale=1.0, reach=0.5), 0.0) == pytest.approx(100.0)

    def test_half_split_ten_percent(self):
        assert implied_test_rate(100.0, SplitSpec(scale=0.5, reach=1.0), 0.10) == pytest.approx(55.0)

    def test_large_study(self):
        assert implied_test_rate(20000.0, SplitSpec(), 0.05) == pytest.approx(21000.0)

    def test_strictly_increasing_in_each_argument(self):
        base = implied_test_rate(1000.0, SplitSpec(scale=0.8, reach=0.9), 0.05)
        lifts = [implied_test_rate(1000.0, SplitSpec(scale=0.8, reach=0.9), e) for e in (0.06, 0.1, 0.5)]
        scales = [implied_test_rate(1000.0, SplitSpec(scale=w, reach=0.9), 0.05) for w in (0.9, 1.0, 1.5)]
        rates = [implied_test_rate(c, SplitSpec(scale=0.8, reach=0.9), 0.05) for c in (1100.0, 2000.0)]
        for seq in (lifts, scales, rates):
            assert all(b > a for a, b in zip([base] + seq, seq))

    def test_invalid_inputs(self):
        with pytest.raises(InvalidParameterError):
            implied_test_rate(0.0, SplitSpec(), 0.05)
        with pytest.raises(InvalidParameterError):
            implied_test_rate(100.0, SplitSpec(reach=1.0), -1.5)


class TestAudienceSize:
    def test_simple(self):
        assert audience_size(1000.0, 0.05, 2) == pytest.approx(40_000.0)

    def test_single_cell_five_percent_row(self):
        # 5107 conversions at a 5% conversion rate, two groups
        got = audience_size(5107.0, 0.05, 2)
        assert got == pytest.approx(204_280.0)
        assert got == pytest.approx(204_271.0, rel=1e-3)

    def test_multi_cell_ten_percent_row(self):
        got = audience_size(2745.0, 0.05, 4)
        assert got == pytest.approx(219_600.0)
        assert got == pytest.approx(219_596.0, rel=1e-3)

    def test_linear_in_conversions_and_groups(self):
        base = audience_size(500.0, 0.02, 1)
        assert audience_size(1500.0, 0.02, 1) == pytest.approx(3 * base)
        assert audience_size(500.0, 0.02, 4) == pytest.approx(4 * base)

    def test_invalid_rate(self):
        with pytest.raises(InvalidParameterError):
            audience_size(100.0, 0.0, 2)
        with pytest.raises(InvalidParameterError):
            audience_size(100.0, -0.1, 2)


class TestTypeInvariants:
    def test_group_counts_validation(self):
        with pytest.raises(InvalidParameterError):
            GroupCounts(-1, 0, 0)
        with pytest.raises(InvalidParameterError):
            GroupCounts(10, 5, 11)  # reached exceeds test conversions

    def test_split_spec_validation(self):
        with pytest.raises(InvalidParameterError):
            SplitSpec(scale=0.0)
        with pytest.raises(InvalidParameterError):
            SplitSpec(reach=0.0)
        with pytest.raises(InvalidParameterError):
            SplitSpec(reach=1.2)

    def test_study_design_validation(self):
        with pytest.raises(InvalidParameterError):
            StudyDesign(20.0, 0.05)  # below the 30-conversion floor
        with pytest.raises(InvalidParameterError):
            StudyDesign(1000.0, -0.1)
        with pytest.raises(InvalidParameterError):
            StudyDesign(1000.0, 0.05, alpha=0.5)

    def test_multi_cell_defaults_cell_b_to_cell_a(self):
        d = MultiCellDesign(5000.0, 0.05, 0.02)
        assert d.control_conversions_b == 5000.0
        with pytest.raises(InvalidParameterError):
            MultiCellDesign(5000.0, 0.05, 0.0)

    def test_lift_params_requires_positive_fields(self):
        with pytest.raises(InvalidParameterError):
            LiftParams(0.0, 10.0, 1.0, 1.0)
        # reach above 1 is allowed at the distribution layer
        LiftParams(100.0, 100.0, 5.7654, 0.6361)

    def test_params_for_lift_builds_null_and_alternative(self):
        null = params_for_lift(20000.0, SplitSpec(), 0.0)
        alt = params_for_lift(20000.0, SplitSpec(), 0.05)
        assert null.test_rate == pytest.approx(20000.0)
        assert alt.test_rate == pytest.approx(21000.0)
        assert alt.control_rate == null.control_rate == 20000.0
