"""Pure numpy sampling kernel.

The compiled kernel must reproduce this one bit-for-bit, so the stream
consumption order here is a contract: all control counts are drawn first,
zero control counts are redrawn in ascending index order one pass at a
time, and the test counts are drawn last.
"""

import numpy as np


def lift_chunk(bit_generator, n, test_rate, control_rate, scale, reach_scale, resample_on_zero):
    """Generate ``n`` lift samples from one seeded bit generator.

    Returns ``(values, zero_draws)`` where ``zero_draws`` counts the zero
    control draws encountered (each one redrawn when ``resample_on_zero``).
    """
    gen = np.random.Generator(bit_generator)
    control = gen.poisson(control_rate, n)
    zero_draws = 0
    if resample_on_zero:
        idx = np.flatnonzero(control == 0)
        while idx.size:
            zero_draws += int(idx.size)
            control[idx] = gen.poisson(control_rate, idx.size)
            idx = idx[control[idx] == 0]
    else:
        zero_draws = int(np.count_nonzero(control == 0))
    test = gen.poisson(test_rate, n)
    control_f = control.astype(np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        values = (test - scale * control_f) / (reach_scale * control_f)
    return values, zero_draws
