# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sampling kernel.

Draws Poisson variates through numpy's C distribution functions on the
caller's bit generator, so the stream is the one `Generator.poisson`
would consume and the output is bit-for-bit identical to the pure numpy
kernel. Draw order is the contract described in `_pure.py`: control
counts first, zero redraws in ascending index order pass by pass, test
counts last. Compiled with FP contraction off for the same reason.

The loops run without the GIL, so chunks can generate in parallel
threads.
"""

import numpy as np

cimport numpy as cnp
from cpython.pycapsule cimport PyCapsule_GetPointer, PyCapsule_IsValid
from numpy.random cimport bitgen_t
from numpy.random.c_distributions cimport random_poisson

cnp.import_array()


def lift_chunk(bit_generator, Py_ssize_t n, double test_rate, double control_rate,
               double scale, double reach_scale, bint resample_on_zero):
    """Generate ``n`` lift samples from one seeded bit generator.

    Mirrors `_pure.lift_chunk`; returns ``(values, zero_draws)``.
    """
    cdef const char *capsule_name = "BitGenerator"
    capsule = bit_generator.capsule
    if not PyCapsule_IsValid(capsule, capsule_name):
        raise ValueError("bit_generator does not expose a BitGenerator capsule")
    cdef bitgen_t *rng = <bitgen_t *> PyCapsule_GetPointer(capsule, capsule_name)

    control_arr = np.empty(n, dtype=np.int64)
    values_arr = np.empty(n, dtype=np.float64)
    cdef cnp.int64_t[::1] control = control_arr
    cdef double[::1] values = values_arr
    cdef Py_ssize_t i, redrawn
    cdef Py_ssize_t zero_draws = 0
    cdef double control_f

    with bit_generator.lock, nogil:
        for i in range(n):
            control[i] = random_poisson(rng, control_rate)
        if resample_on_zero:
            # full sweeps visit exactly the still-zero positions in ascending
            # order, consuming the stream like the pure kernel's index passes
            while True:
                redrawn = 0
                for i in range(n):
                    if control[i] == 0:
                        redrawn += 1
                        control[i] = random_poisson(rng, control_rate)
                zero_draws += redrawn
                if redrawn == 0:
                    break
        else:
            for i in range(n):
                if control[i] == 0:
                    zero_draws += 1
        for i in range(n):
            control_f = <double> control[i]
            values[i] = ((<double> random_poisson(rng, test_rate)) - scale * control_f) \
                / (reach_scale * control_f)

    return values_arr, int(zero_draws)
