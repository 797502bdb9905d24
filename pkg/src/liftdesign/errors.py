"""Exception hierarchy shared across the package."""


class LiftDesignError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameterError(LiftDesignError, ValueError):
    """A parameter violates its documented domain."""


class UndefinedLiftError(LiftDesignError, ZeroDivisionError):
    """Lift is undefined because the reached scaled-control conversions are zero."""


class DegenerateRateError(InvalidParameterError):
    """Control rate is so small that zero-count resampling would dominate."""


class TruncationCapError(LiftDesignError):
    """The outer series needed more terms than the policy allows."""


class BracketingError(LiftDesignError):
    """A root/quantile bracket could not be established in the search range."""


class ConsistencyError(LiftDesignError):
    """Two methods that must agree (derived vs. simulated) disagreed."""


class CampaignError(LiftDesignError):
    """A validation-campaign run failed; carries the run index as context."""
