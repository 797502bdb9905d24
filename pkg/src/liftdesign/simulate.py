"""Seeded Monte Carlo generation of lift and lift-difference samples.

Samples are generated in fixed-size chunks, each from its own child of
the config seed, so a sample set is a pure function of (params, config):
the same inputs give bitwise-identical output regardless of thread count
or kernel backend.
"""

from dataclasses import dataclass
from concurrent.futures import ThreadPoolExecutor
import math

import numpy as np

from . import _kernels
from .errors import DegenerateRateError, InvalidParameterError
from .model import MIN_CONTROL_CONVERSIONS, LiftParams

# Chunk size is part of the determinism contract: changing it reshuffles
# the per-chunk seed streams.
CHUNK_SIZE = 262_144


@dataclass(frozen=True)
class SimulationConfig:
    """Sample count, seed, and zero-denominator handling for one run."""

    num_samples: int = 1_000_000
    seed: int = 0
    resample_on_zero: bool = True

    def __post_init__(self):
        if not self.num_samples >= 1_000:
            raise InvalidParameterError(
                f"num_samples must be at least 1000, got {self.num_samples}"
            )
        if not 0 <= self.seed < 2**64:
            raise InvalidParameterError(f"seed must be an unsigned 64-bit integer, got {self.seed}")


@dataclass(frozen=True, eq=False)
class SampleSet:
    """Samples of the lift (or lift-difference) statistic with provenance."""

    values: np.ndarray
    config: SimulationConfig
    params: LiftParams | tuple[LiftParams, LiftParams]
    num_discarded: int

    @property
    def statistic(self) -> str:
        return "diff" if isinstance(self.params, tuple) else "lift"

    @property
    def discard_rate(self) -> float:
        return self.num_discarded / self.config.num_samples

    def warnings(self) -> list[str]:
        """Flags for runs outside the regime where the lift is well behaved."""
        out = []
        rates = [p.control_rate for p in (self.params if isinstance(self.params, tuple) else (self.params,))]
        if min(rates) >= MIN_CONTROL_CONVERSIONS:
            if self.discard_rate >= 1e-6:
                out.append(
                    f"discard rate {self.discard_rate:.2e} despite control rate >= "
                    f"{MIN_CONTROL_CONVERSIONS:.0f}"
                )
        elif self.num_discarded > 0:
            out.append(
                f"{self.num_discarded} zero-denominator draws resampled "
                f"(control rate below {MIN_CONTROL_CONVERSIONS:.0f})"
            )
        if not np.isfinite(self.values).all():
            out.append("sample set contains non-finite values (zero denominators kept)")
        return out


def derive_seed(seed: int, *tags: int) -> int:
    """Deterministic child seed for an internal role, e.g. the alternative-
    hypothesis stream of a power calculation."""
    ss = np.random.SeedSequence(entropy=(int(seed), *(int(t) for t in tags)))
    return int(ss.generate_state(1, np.uint64)[0])


def _chunk_layout(n: int) -> list[tuple[int, int]]:
    edges = list(range(0, n, CHUNK_SIZE)) + [n]
    return [(edges[i], edges[i + 1]) for i in range(len(edges) - 1)]


def _check_rates(*params: LiftParams):
    for p in params:
        if p.control_rate < 1.0:
            raise DegenerateRateError(
                f"control_rate {p.control_rate} < 1: zero-count resampling would dominate"
            )


def _generate(cell_params: tuple[LiftParams, ...], config: SimulationConfig, threads: int) -> tuple[np.ndarray, int]:
    """Run the chunk kernel for one or two cells; two cells are combined as
    cell B minus cell A. Returns (values, discarded draws)."""
    n = config.num_samples
    layout = _chunk_layout(n)
    root = np.random.SeedSequence(config.seed)
    children = root.spawn(len(layout))
    out = np.empty(n, dtype=np.float64)
    kernel = _kernels.active.lift_chunk

    def run_chunk(i: int) -> int:
        lo, hi = layout[i]
        m = hi - lo
        seqs = children[i].spawn(len(cell_params)) if len(cell_params) > 1 else [children[i]]
        discarded = 0
        cells = []
        for p, seq in zip(cell_params, seqs):
            vals, zeros = kernel(
                np.random.PCG64(seq), m, p.test_rate, p.control_rate,
                p.scale, p.reach * p.scale, config.resample_on_zero,
            )
            cells.append(vals)
            if config.resample_on_zero:
                discarded += zeros
        out[lo:hi] = cells[0] if len(cells) == 1 else cells[1] - cells[0]
        return discarded

    if threads <= 1 or len(layout) == 1:
        counts = [run_chunk(i) for i in range(len(layout))]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            counts = list(pool.map(run_chunk, range(len(layout))))
    return out, int(sum(counts))


def simulate_lift(params: LiftParams, config: SimulationConfig, threads: int = 1) -> SampleSet:
    """Draw lift samples from the generative process: independent Poisson
    test/control counts, control scaled to the test audience, lift taken
    relative to its reached part. Zero control draws are resampled (and
    counted) by default."""
    _check_rates(params)
    values, discarded = _generate((params,), config, threads)
    return SampleSet(values=values, config=config, params=params, num_discarded=discarded)


def simulate_diff(
    params_a: LiftParams, params_b: LiftParams, config: SimulationConfig, threads: int = 1
) -> SampleSet:
    """Draw samples of the two-cell difference statistic (cell B lift minus
    cell A lift), the cells consuming independent seed-derived streams."""
    _check_rates(params_a, params_b)
    values, discarded = _generate((params_a, params_b), config, threads)
    return SampleSet(values=values, config=config, params=(params_a, params_b), num_discarded=discarded)


def empirical_quantile(samples, p: float) -> float:
    """Nearest-rank quantile: the smallest sample value with at least a
    fraction ``p`` of samples at or below it."""
    if not 0.0 < p < 1.0:
        raise InvalidParameterError(f"p must be in (0, 1), got {p}")
    values = samples.values if isinstance(samples, SampleSet) else np.asarray(samples, dtype=np.float64)
    n = values.size
    if n == 0:
        raise InvalidParameterError("cannot take a quantile of an empty sample set")
    # the fuzz absorbs float rounding of p*n at exact-rank boundaries and
    # must stay above half an ulp of the product for any realistic n
    target = p * n
    rank = math.ceil(target - max(1e-9, 1e-12 * target))
    idx = min(max(rank, 1), n) - 1
    return float(np.partition(values, idx)[idx])


def write_samples_csv(samples: SampleSet, path_or_file) -> None:
    """Write a sample set as a single-column CSV headed ``lift`` or ``diff``."""
    own = isinstance(path_or_file, (str, bytes))
    fh = open(path_or_file, "w", newline="") if own else path_or_file
    try:
        fh.write(samples.statistic + "\n")
        np.savetxt(fh, samples.values, fmt="%.17g", newline="\n")
    finally:
        if own:
            fh.close()
