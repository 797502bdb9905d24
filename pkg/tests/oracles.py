"""Independent oracles used to pin expected values.

These deliberately avoid the library's own code paths: the CMF oracle is
an exhaustive double summation in exact rational arithmetic, and the
critical-value oracle is the large-rate normal approximation.
"""

from fractions import Fraction
from math import exp, factorial, floor, sqrt

Z_95 = 1.6448536269514722


def brute_force_lift_cmf(test_rate, control_rate, reach, scale, l, k_max=200, j_max=600):
    """Exhaustive double sum over the joint Poisson support with exact
    rational arithmetic; only the final exp factor is floating point.

    All parameters must be exactly representable as Fractions (ints or
    dyadic rationals), so inner-bound floors are exact.
    """
    lam_t = Fraction(test_rate)
    lam_c = Fraction(control_rate)
    slope = (Fraction(l) + 1 / Fraction(reach)) * Fraction(reach) * Fraction(scale)

    # running inner sums T[m] = sum_{j<=m} lam_t^j / j!
    inner = [Fraction(1)]
    for j in range(1, j_max + 1):
        inner.append(inner[-1] + lam_t**j / factorial(j))

    total = Fraction(0)
    for k in range(k_max + 1):
        bound = floor(slope * k)
        if bound < 0:
            continue
        total += (lam_c**k / factorial(k)) * inner[min(bound, j_max)]
    return float(total) * exp(-float(lam_t + lam_c))


def normal_null_critical_value(control_conversions, alpha_z=Z_95):
    """Normal approximation to the null critical value at reach 1 and a
    50:50 split: z * sqrt(2 / expected control conversions)."""
    return alpha_z * sqrt(2.0 / control_conversions)


SMALL_GRID = [
    (lt, lc, r, s, l)
    for lt in (1, 2, 5)
    for lc in (1, 2, 5)
    for r in (Fraction(1, 2), Fraction(1))
    for s in (Fraction(1, 2), Fraction(1))
    for l in (Fraction(-1, 2), Fraction(0), Fraction(1, 2), Fraction(1))
]
