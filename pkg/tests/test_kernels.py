"""Backend equivalence: the compiled kernel must be bit-for-bit identical
to the pure numpy fallback, and generation must not depend on threading."""

import numpy as np
import pytest

from liftdesign import LiftParams, SimulationConfig, simulate_diff, simulate_lift
from liftdesign import _kernels
from liftdesign import bench

needs_compiled = pytest.mark.skipif(
    _kernels.compiled is None, reason="compiled kernel not built"
)


def test_backend_name_reports_selection():
    assert _kernels.backend_name() in ("pure", "compiled")


@needs_compiled
@pytest.mark.parametrize("test_rate,control_rate", [
    (0.8, 1.0),        # inversion sampling regime, heavy zero resampling
    (7.5, 9.0),        # below the algorithm switch at rate 10
    (30.0, 30.0),
    (21000.0, 20000.0),
])
def test_chunk_kernels_bitwise_identical(test_rate, control_rate):
    n = 50_000
    args = (n, test_rate, control_rate, 0.9, 0.72, True)
    pure_vals, pure_zeros = _kernels.pure.lift_chunk(
        np.random.PCG64(np.random.SeedSequence(17)), *args)
    comp_vals, comp_zeros = _kernels.compiled.lift_chunk(
        np.random.PCG64(np.random.SeedSequence(17)), *args)
    assert pure_zeros == comp_zeros
    assert np.array_equal(pure_vals, comp_vals)


@needs_compiled
def test_chunk_kernels_identical_without_resampling():
    # zero denominators stay in as inf/nan and must land identically
    args = (20_000, 2.0, 1.5, 1.0, 1.0, False)
    pure_vals, pure_zeros = _kernels.pure.lift_chunk(
        np.random.PCG64(np.random.SeedSequence(23)), *args)
    comp_vals, comp_zeros = _kernels.compiled.lift_chunk(
        np.random.PCG64(np.random.SeedSequence(23)), *args)
    assert pure_zeros == comp_zeros > 0
    assert np.array_equal(pure_vals, comp_vals, equal_nan=True)


@needs_compiled
def test_full_simulation_identical_across_backends(monkeypatch):
    params = LiftParams(1050.0, 1000.0, 0.8, 1.1)
    cfg = SimulationConfig(300_000, seed=2)
    compiled_run = simulate_lift(params, cfg)
    monkeypatch.setattr(_kernels, "active", _kernels.pure)
    pure_run = simulate_lift(params, cfg)
    assert np.array_equal(compiled_run.values, pure_run.values)
    assert compiled_run.num_discarded == pure_run.num_discarded


def test_thread_count_does_not_change_output():
    params = LiftParams(500.0, 500.0, 1.0, 1.0)
    cfg = SimulationConfig(600_000, seed=8)  # spans multiple chunks
    single = simulate_lift(params, cfg, threads=1)
    threaded = simulate_lift(params, cfg, threads=4)
    assert np.array_equal(single.values, threaded.values)

    a = LiftParams(500.0, 500.0, 1.0, 1.0)
    b = LiftParams(550.0, 500.0, 1.0, 1.0)
    d_single = simulate_diff(a, b, cfg, threads=1)
    d_threaded = simulate_diff(a, b, cfg, threads=3)
    assert np.array_equal(d_single.values, d_threaded.values)


def test_bench_smoke(capsys):
    rc = bench.main(["--samples", "100000", "--repeat", "1"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "backend" in out
