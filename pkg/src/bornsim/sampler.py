"""Uniform sampling of final labels over the union of outcome disks.

The generator must never consult outcome probabilities, otherwise the
empirical check of the squared-modulus rule would be circular. Each proposal
therefore draws an outcome index n uniformly from {0..N-1} and a point
uniformly on the full disk of radius R (r = R*sqrt(u), phi = 2*pi*v), and
accepts iff the point lands inside outcome n's own disk. The only model
inputs read here are the disk bounds and R; for a normalized state the
per-proposal acceptance probability is exactly 1/N.

Reproducibility: a batch is cut into LANES interleaved lanes. Lane L owns
global indices congruent to L mod LANES and consumes its own counter-based
Philox stream keyed by (seed, L), one row of three uniforms per proposal
(outcome pick, disk radius, disk angle). A batch is therefore a pure
function of (seed, count): worker threads only split the lanes between
them, so any worker count yields byte-identical label sequences.

Outcomes whose amplitude is zero are never emitted: their disk is the single
point at the origin, which carries no probability, and proposals naming them
are rejected outright.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DegenerateOutcomeError, SamplerStallError, ZeroStateError
from .model import FinalLabel, InitialLabel, ModelConfig

__all__ = [
    "LANES",
    "RNG_ALGORITHM",
    "SamplerConfig",
    "SampleBatch",
    "InitialBatch",
    "lane_generator",
    "sample_final",
    "sample_batch",
    "recover_initials",
]

# Number of interleaved label lanes; fixed so batches do not depend on the
# worker count. 64 keeps per-lane vector blocks large at desk-scale counts.
LANES = 64

# Consecutive-rejection budget per lane is _STALL_FACTOR * N. At acceptance
# rate 1/N a spurious trip has probability below (1 - 1/N)^(1e6 * N), which
# is negligible for any normalized state.
_STALL_FACTOR = 1_000_000

# Cap on proposals generated per vector block (rows of three uniforms).
_BLOCK_CAP = 1 << 19

RNG_ALGORITHM = "philox4x64-10"
RNG_PROVIDER = "numpy.random.Philox"

_TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class SamplerConfig:
    """Model plus the 64-bit seed and the worker (thread) count."""

    model: ModelConfig
    seed: int
    workers: int = 1

    def __post_init__(self) -> None:
        if not isinstance(self.seed, int) or isinstance(self.seed, bool):
            raise ConfigError(f"seed must be an integer, got {self.seed!r}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must fit in 64 unsigned bits, got {self.seed!r}")
        if not isinstance(self.workers, int) or isinstance(self.workers, bool) or self.workers < 1:
            raise ConfigError(f"workers must be a positive integer, got {self.workers!r}")


@dataclass(frozen=True)
class SampleBatch:
    """Accepted labels in global index order, stored as parallel arrays.

    Behaves as a sequence of FinalLabel. proposals_used counts every
    rejection-loop iteration up to and including the last acceptance.
    """

    x: np.ndarray
    y: np.ndarray
    n: np.ndarray
    proposals_used: int

    def __len__(self) -> int:
        return self.n.size

    def __getitem__(self, i: int) -> FinalLabel:
        return FinalLabel(x=float(self.x[i]), y=float(self.y[i]), n=int(self.n[i]))


@dataclass(frozen=True)
class InitialBatch:
    """Recovered initial labels, index-aligned with the batch they came from."""

    x0: np.ndarray
    y0: np.ndarray

    def __len__(self) -> int:
        return self.x0.size

    def __getitem__(self, i: int) -> InitialLabel:
        return InitialLabel(x0=float(self.x0[i]), y0=float(self.y0[i]))


def lane_generator(seed: int, lane: int) -> np.random.Generator:
    """Counter-based stream for one lane, keyed by (seed, lane)."""
    key = np.array([seed, lane], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def sample_final(cfg: SamplerConfig, rng: np.random.Generator) -> FinalLabel:
    """Draw one label by rejection from the given stream.

    Consumes one row of three uniforms per proposal, in the same layout the
    batch path uses, so repeated calls on a lane generator reproduce that
    lane's slice of a batch exactly.
    """
    model = cfg.model
    bounds = model.disk_bound_sq
    dim = model.state.dim
    if not bounds.any():
        raise ZeroStateError("state has no nonzero amplitude; nothing to sample")
    limit = _STALL_FACTOR * dim
    rejections = 0
    while True:
        w0, u, v = rng.random(3)
        n = int(w0 * dim)
        r = model.R * np.sqrt(u)
        phi = _TWO_PI * v
        x = r * np.cos(phi)
        y = r * np.sin(phi)
        # Accept on the emitted cartesian values so every label satisfies
        # the region test exactly; zero-amplitude outcomes are never emitted.
        if bounds[n] > 0.0 and x * x + y * y <= bounds[n]:
            return FinalLabel(x=float(x), y=float(y), n=n)
        rejections += 1
        if rejections >= limit:
            raise SamplerStallError(
                f"rejection loop made {rejections} consecutive rejections"
            )


def sample_batch(cfg: SamplerConfig, count: int) -> SampleBatch:
    """Draw `count` i.i.d. labels, a pure function of (seed, count).

    Lane L fills global indices L, L+LANES, L+2*LANES, ... from its own
    stream; workers only distribute lanes across threads.
    """
    if not isinstance(count, int) or isinstance(count, bool) or count < 1:
        raise ConfigError(f"sample count must be a positive integer, got {count!r}")
    model = cfg.model
    if not model.disk_bound_sq.any():
        raise ZeroStateError("state has no nonzero amplitude; nothing to sample")

    lanes = [(lane, count // LANES + (1 if lane < count % LANES else 0)) for lane in range(LANES)]
    lanes = [(lane, m) for lane, m in lanes if m > 0]

    if cfg.workers == 1 or len(lanes) == 1:
        results = [_fill_lane(model, cfg.seed, lane, m) for lane, m in lanes]
    else:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            futures = [pool.submit(_fill_lane, model, cfg.seed, lane, m) for lane, m in lanes]
            results = [f.result() for f in futures]

    x = np.empty(count)
    y = np.empty(count)
    n = np.empty(count, dtype=np.int64)
    proposals = 0
    for (lane, _), (lx, ly, ln, lp) in zip(lanes, results):
        x[lane::LANES] = lx
        y[lane::LANES] = ly
        n[lane::LANES] = ln
        proposals += lp
    for arr in (x, y, n):
        arr.flags.writeable = False
    return SampleBatch(x=x, y=y, n=n, proposals_used=proposals)


def _fill_lane(model: ModelConfig, seed: int, lane: int, m: int):
    """Run lane `lane`'s rejection stream until m labels are accepted.

    Proposals are generated in blocks but consumed strictly in stream order,
    so the result equals m repeated single draws from the same generator.
    """
    rng = lane_generator(seed, lane)
    bounds = model.disk_bound_sq
    dim = model.state.dim
    R = model.R
    limit = _STALL_FACTOR * dim

    xs = np.empty(m)
    ys = np.empty(m)
    ns = np.empty(m, dtype=np.int64)
    filled = 0
    proposals = 0
    dry = 0  # trailing run of consecutive rejections, carried across blocks
    while filled < m:
        k = min(_BLOCK_CAP, (m - filled) * dim + dim + 64)
        w = rng.random((k, 3))
        n = (w[:, 0] * dim).astype(np.int64)
        r = R * np.sqrt(w[:, 1])
        phi = _TWO_PI * w[:, 2]
        x = r * np.cos(phi)
        y = r * np.sin(phi)
        ok = (x * x + y * y <= bounds[n]) & (bounds[n] > 0.0)
        hits = np.flatnonzero(ok)
        take = min(m - filled, hits.size)
        if take:
            sel = hits[:take]
            # Rejection runs within the consumed prefix, including the run
            # carried over from earlier blocks.
            run = dry + int(sel[0])
            if take > 1:
                run = max(run, int(np.max(np.diff(sel))) - 1)
            if run >= limit:
                raise SamplerStallError(f"lane {lane} made {run} consecutive rejections")
            xs[filled : filled + take] = x[sel]
            ys[filled : filled + take] = y[sel]
            ns[filled : filled + take] = n[sel]
            filled += take
            if filled == m:
                proposals += int(sel[-1]) + 1
                break
            proposals += k
            dry = k - int(sel[-1]) - 1
        else:
            proposals += k
            dry += k
        if dry >= limit:
            raise SamplerStallError(f"lane {lane} made {dry} consecutive rejections")
    return xs, ys, ns, proposals


def recover_initials(cfg: SamplerConfig, batch: SampleBatch) -> InitialBatch:
    """Map each accepted label back through the inverse label map.

    Uses the same division formula as initial_from_final, applied
    elementwise; the output is uniform on the disk of radius R.
    """
    amps = cfg.model.state.amps
    a = amps.real[batch.n]
    b = amps.imag[batch.n]
    den = a * a + b * b
    if np.any(den == 0.0):
        raise DegenerateOutcomeError("batch contains an outcome with zero amplitude")
    x0 = (batch.x * a + batch.y * b) / den
    y0 = (batch.y * a - batch.x * b) / den
    for arr in (x0, y0):
        arr.flags.writeable = False
    return InitialBatch(x0=x0, y0=y0)
