"""Exact evaluation of the lift statistic's distribution.

With test conversions ``C_T ~ Poisson(test_rate)`` and control conversions
``C_C ~ Poisson(control_rate)`` independent, the lift statistic is

    L = C_T / (reach * scale * C_C) - 1 / reach

so its CMF is a double sum over the joint Poisson support:

    F(l) = sum_k  P(C_C = k) * P(C_T <= floor((l + 1/reach) * reach * scale * k))

The outer sum runs over all naturals; it is truncated to a window around
``control_rate`` whose discarded tail mass is certified below a policy
bound. The inner Poisson CMF is evaluated through the regularized upper
incomplete gamma function rather than term by term, which keeps quantile
inversion tractable at rates of 10^5 and beyond.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy.special import gammainc, gammaincc, gammaln

from .errors import BracketingError, InvalidParameterError, LiftDesignError, TruncationCapError
from .model import MIN_CONTROL_CONVERSIONS, LiftParams

QUANTILE_XTOL = 1e-6
# Relative nudge applied before flooring the inner-sum bound: the lift has
# atoms exactly where (l + 1/reach)*reach*scale*k is an integer, and float
# rounding must not push an atom's own CMF evaluation below it.
_FLOOR_NUDGE = 1e-9


@dataclass(frozen=True)
class TruncationPolicy:
    """Stopping rule for the outer summation over the control count."""

    tail_mass_bound: float = 1e-12
    max_outer_terms: int = 10_000_000

    def __post_init__(self):
        if not 0 < self.tail_mass_bound < 1e-6:
            raise InvalidParameterError(
                f"tail_mass_bound must be in (0, 1e-6), got {self.tail_mass_bound}"
            )
        if not self.max_outer_terms >= 1:
            raise InvalidParameterError(
                f"max_outer_terms must be positive, got {self.max_outer_terms}"
            )


DEFAULT_POLICY = TruncationPolicy()


@dataclass(frozen=True)
class CmfEvaluation:
    """A CMF value plus the certificate of what truncation discarded.

    ``undefined_mass`` surfaces the probability of a zero control count
    (where the lift quotient is undefined) whenever the control rate is
    small enough for it to matter; it is informational, not an error.
    """

    value: float
    truncation_error_bound: float
    outer_terms_used: int
    undefined_mass: float | None = None

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0 + 1e-9:
            raise LiftDesignError(f"CMF value out of range: {self.value}")
        if self.value + self.truncation_error_bound > 1.0 + 1e-9:
            raise LiftDesignError(
                "CMF value plus truncation bound exceeds 1: "
                f"{self.value} + {self.truncation_error_bound}"
            )


def poisson_log_pmf(k, rate: float):
    """Log of the Poisson pmf, ``k*ln(rate) - rate - ln(k!)``, via log-gamma.

    Accepts a scalar or array of non-negative integers.
    """
    if not rate > 0:
        raise InvalidParameterError(f"rate must be positive, got {rate}")
    karr = np.asarray(k)
    if np.any(karr < 0):
        raise InvalidParameterError("k must be non-negative")
    out = karr * math.log(rate) - rate - gammaln(karr + 1.0)
    return float(out) if np.ndim(k) == 0 else out


def poisson_cmf(k, rate: float):
    """Poisson CMF ``P(X <= k)`` via the regularized upper incomplete gamma
    function; zero for ``k < 0``. Accepts a scalar or array."""
    if not rate > 0:
        raise InvalidParameterError(f"rate must be positive, got {rate}")
    karr = np.asarray(k, dtype=np.float64)
    out = np.where(karr < 0, 0.0, gammaincc(np.maximum(karr, 0.0) + 1.0, rate))
    return float(out) if np.ndim(k) == 0 else out


def scaled_support_pmf(x: float, params: LiftParams) -> float:
    """Pmf of the reached scaled-control count, supported on multiples of
    ``reach * scale``: the control pmf carried onto that grid, zero elsewhere.

    Grid membership is decided within an absolute tolerance of 1e-9.
    """
    if x < 0:
        return 0.0
    q = x / (params.reach * params.scale)
    k = round(q)
    if k < 0 or abs(q - k) > 1e-9:
        return 0.0
    return math.exp(poisson_log_pmf(int(k), params.control_rate))


def _outer_window(control_rate: float, policy: TruncationPolicy) -> tuple[int, int, float]:
    """Window [k_lo, k_hi] of the outer sum whose discarded Poisson tail
    mass is certified below the policy bound. Returns the exact mass."""
    width = 8.0 * math.sqrt(control_rate) + 16.0
    for _ in range(64):
        k_lo = max(0, int(math.floor(control_rate - width)))
        k_hi = int(math.ceil(control_rate + width))
        lower = float(gammaincc(k_lo, control_rate)) if k_lo > 0 else 0.0
        upper = float(gammainc(k_hi + 1.0, control_rate))
        tail = lower + upper
        if tail <= policy.tail_mass_bound:
            if k_hi - k_lo + 1 > policy.max_outer_terms:
                raise TruncationCapError(
                    f"outer sum needs {k_hi - k_lo + 1} terms, cap is {policy.max_outer_terms}"
                )
            return k_lo, k_hi, tail
        width *= 2.0
    raise TruncationCapError("could not certify the outer tail bound")


def _cmf_values(ls: np.ndarray, params: LiftParams, policy: TruncationPolicy):
    """CMF of the lift at each value in ``ls``; shared core for scalar and
    batch callers. Returns (values, tail_mass, outer_terms)."""
    k_lo, k_hi, tail = _outer_window(params.control_rate, policy)
    ks = np.arange(k_lo, k_hi + 1, dtype=np.float64)
    control_pmf = np.exp(poisson_log_pmf(ks, params.control_rate))

    reach_scale = params.reach * params.scale
    slopes = (np.asarray(ls, dtype=np.float64) + 1.0 / params.reach) * reach_scale
    values = np.empty(slopes.size, dtype=np.float64)
    # block the (l, k) grid so batch evaluation stays within ~32 MB of temporaries
    block = max(1, 4_194_304 // ks.size)
    for start in range(0, slopes.size, block):
        x = slopes[start:start + block, None] * ks[None, :]
        bounds = np.floor(x + _FLOOR_NUDGE * np.abs(x))
        if bounds.size > 65536:
            # dedup: the same inner bound recurs across the grid, and the
            # incomplete-gamma evaluation dominates the cost
            unique, inverse = np.unique(bounds, return_inverse=True)
            inner_unique = np.where(
                unique < 0, 0.0, gammaincc(np.maximum(unique, 0.0) + 1.0, params.test_rate)
            )
            inner = inner_unique[inverse].reshape(bounds.shape)
        else:
            inner = np.where(
                bounds < 0, 0.0, gammaincc(np.maximum(bounds, 0.0) + 1.0, params.test_rate)
            )
        values[start:start + block] = (control_pmf[None, :] * inner).sum(axis=1)
    return values, tail, int(ks.size)


def lift_cmf(l: float, params: LiftParams, policy: TruncationPolicy = DEFAULT_POLICY) -> CmfEvaluation:
    """CMF of the lift statistic at ``l`` with a certified truncation bound."""
    values, tail, terms = _cmf_values(np.array([l]), params, policy)
    undefined = math.exp(-params.control_rate) if params.control_rate < MIN_CONTROL_CONVERSIONS else None
    return CmfEvaluation(
        value=float(values[0]),
        truncation_error_bound=tail,
        outer_terms_used=terms,
        undefined_mass=undefined,
    )


def lift_cmf_values(ls, params: LiftParams, policy: TruncationPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Vectorized CMF over an array of lift values (no per-point certificates;
    the shared truncation bound is policy-certified as in :func:`lift_cmf`)."""
    values, _, _ = _cmf_values(np.asarray(ls, dtype=np.float64), params, policy)
    return values


def lift_quantile(
    p: float,
    params: LiftParams,
    policy: TruncationPolicy = DEFAULT_POLICY,
    xtol: float = QUANTILE_XTOL,
) -> float:
    """Smallest lift value whose CMF reaches ``p``.

    Brackets the jump of ``F - p`` and refines with secant steps
    safeguarded by bisection (Brent-style bracketing), returning the upper
    bracket end once the bracket is narrower than ``xtol``. The search
    range is [-1/reach, 10/reach]; the statistic has no support below the
    lower end, and a quantile beyond the upper end raises
    :class:`BracketingError`.
    """
    if not 0.0 < p < 1.0:
        raise InvalidParameterError(f"p must be in (0, 1), got {p}")

    def cmf(l: float) -> float:
        return lift_cmf(l, params, policy).value

    lo = -1.0 / params.reach
    f_lo = cmf(lo) - p
    if f_lo >= 0.0:
        # all mass at or below the statistic's essential minimum
        return lo

    cap = 10.0 / params.reach
    hi = 0.125 / params.reach
    f_hi = cmf(hi) - p
    while f_hi < 0.0:
        if hi >= cap:
            raise BracketingError(
                f"no quantile bracket for p={p} in [{lo}, {cap}] "
                f"(params={params}); the distribution lies beyond the search range"
            )
        lo, f_lo = hi, f_hi
        hi = min(hi * 2.0, cap)
        f_hi = cmf(hi) - p

    for iteration in range(200):
        if hi - lo <= xtol:
            return float(hi)
        width = hi - lo
        if iteration % 2 == 0 and f_hi != f_lo:
            t = hi - f_hi * width / (f_hi - f_lo)
            t = min(max(t, lo + 1e-3 * width), hi - 1e-3 * width)
        else:
            t = lo + 0.5 * width
        f_t = cmf(t) - p
        if f_t >= 0.0:
            hi, f_hi = t, f_t
        else:
            lo, f_lo = t, f_t
    raise LiftDesignError("quantile refinement did not converge in 200 iterations")
