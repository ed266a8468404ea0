"""Samplers over the bounded-angle pattern space.

Three sources, one container:

* `uniform_*` — i.i.d. angles, no admissibility constraint (baseline).
* `marginal_*` — i.i.d. angles from a fitted per-orientation histogram
  (baseline that matches single-site statistics but ignores correlations).
* `generate_dataset` — admissible patterns from independent replacement
  chains: each chain starts at the rest pattern (all beta = 0), then runs
  raster-order sweeps where every cell angle is redrawn uniformly from the
  set of values admissible against its 8 current neighbors.

All sampled angles are float32-exact so datasets round-trip bit-for-bit
through the f32 file format. Everything is deterministic in (seed, shape,
parameters); chains use independent child seeds, so worker count does not
affect results.
"""

from __future__ import annotations

import os
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _chains
from .lattice import EPS, CutGrid, LatticeSpec, base_angle_grid

__all__ = [
    "SampleSet",
    "AngleMarginal",
    "uniform_grid",
    "uniform_set",
    "marginal_grid",
    "marginal_set",
    "fit_marginal",
    "admissible_beta_set",
    "sweep_replace",
    "generate_dataset",
    "DEFAULT_SWEEPS",
]

DEFAULT_SWEEPS = 200

_SOURCES = ("sweep", "uniform", "marginal")  # tags this module emits
_SOURCE_RE = re.compile(r"[a-z][a-z0-9_-]{0,31}\Z")


class SampleSet:
    """A batch of patterns drawn by one sampler run.

    Attributes:
        betas: (count, rows, cols) float64 array of perturbation angles,
            read-only, every value exactly representable as float32.
        beta_max: angle bound the set was drawn under.
        source: lowercase tag naming the generator. This module emits
            "sweep", "uniform" and "marginal"; files produced by other
            tools use their own tags (e.g. "external").
        seed: RNG seed the set was drawn with.
        sweeps: replacement sweeps per chain (0 for i.i.d. sources).
    """

    __slots__ = ("betas", "beta_max", "source", "seed", "sweeps")

    def __init__(self, betas, beta_max, source, seed, sweeps=0):
        betas = np.ascontiguousarray(betas, dtype=np.float64)
        if betas.ndim != 3:
            raise ValueError(f"betas must be (count, rows, cols), got {betas.shape}")
        if not isinstance(source, str) or not _SOURCE_RE.match(source):
            raise ValueError(
                "source must be a lowercase tag ([a-z][a-z0-9_-]*, at most 32 "
                f"chars), got {source!r}"
            )
        if not (0 < beta_max <= 90):
            raise ValueError(f"beta_max must lie in (0, 90], got {beta_max}")
        if np.any(np.abs(betas) > beta_max + 1e-4):
            raise ValueError("|beta| exceeds beta_max")
        if sweeps < 0:
            raise ValueError("sweeps must be >= 0")
        betas = betas.copy()
        betas.setflags(write=False)
        self.betas = betas
        self.beta_max = float(beta_max)
        self.source = source
        self.seed = int(seed)
        self.sweeps = int(sweeps)

    @property
    def count(self) -> int:
        return self.betas.shape[0]

    @property
    def rows(self) -> int:
        return self.betas.shape[1]

    @property
    def cols(self) -> int:
        return self.betas.shape[2]

    def __len__(self) -> int:
        return self.count

    def __getitem__(self, k: int) -> CutGrid:
        return CutGrid(self.betas[k], self.beta_max)

    def __iter__(self):
        for k in range(self.count):
            yield self[k]

    def __eq__(self, other):
        if not isinstance(other, SampleSet):
            return NotImplemented
        return (
            self.beta_max == other.beta_max
            and self.source == other.source
            and self.seed == other.seed
            and self.sweeps == other.sweeps
            and self.betas.shape == other.betas.shape
            and np.array_equal(self.betas, other.betas)
        )

    def __repr__(self):
        return (
            f"SampleSet(count={self.count}, shape=({self.rows}, {self.cols}), "
            f"beta_max={self.beta_max}, source={self.source!r}, seed={self.seed})"
        )


def _chain_rng(seed: int, chain: int) -> np.random.Generator:
    # child streams are independent regardless of worker scheduling
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(chain,))
    return np.random.Generator(np.random.Philox(ss))


def _f32_uniform(rng, beta_max, size) -> np.ndarray:
    """Uniform angles in [-beta_max, beta_max], rounded onto the f32 grid."""
    out = rng.uniform(-beta_max, beta_max, size=size)
    out = out.astype(np.float32).astype(np.float64)
    # f32 rounding can nudge a draw past the bound when beta_max is not
    # itself representable; redraw those rather than clipping
    bad = np.abs(out) > beta_max
    while np.any(bad):
        redo = rng.uniform(-beta_max, beta_max, size=int(bad.sum()))
        out[bad] = redo.astype(np.float32).astype(np.float64)
        bad = np.abs(out) > beta_max
    return out


def uniform_grid(
    beta_max: float, rng: np.random.Generator, spec: LatticeSpec | None = None
) -> CutGrid:
    """One pattern with i.i.d. uniform angles (admissibility not enforced)."""
    spec = spec or LatticeSpec()
    betas = _f32_uniform(rng, beta_max, (spec.rows, spec.cols))
    return CutGrid(betas, beta_max)


def uniform_set(
    beta_max: float, count: int, seed: int, spec: LatticeSpec | None = None
) -> SampleSet:
    """`count` i.i.d.-uniform patterns from a single seeded stream."""
    spec = spec or LatticeSpec()
    if count <= 0:
        raise ValueError("count must be positive")
    rng = _chain_rng(seed, 0)
    betas = _f32_uniform(rng, beta_max, (count, spec.rows, spec.cols))
    return SampleSet(betas, beta_max, "uniform", seed)


@dataclass(frozen=True)
class AngleMarginal:
    """Per-orientation histogram of perturbation angles.

    weights[0] is the vertical-rest row, weights[1] the horizontal-rest row;
    each row sums to 1 over `bin_edges` spanning [-beta_max, beta_max].
    """

    bin_edges: np.ndarray
    weights: np.ndarray
    beta_max: float

    def __post_init__(self):
        edges = np.ascontiguousarray(self.bin_edges, dtype=np.float64)
        w = np.ascontiguousarray(self.weights, dtype=np.float64)
        if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0):
            raise ValueError("bin_edges must be strictly increasing, length >= 2")
        if w.shape != (2, edges.size - 1):
            raise ValueError(
                f"weights must have shape (2, {edges.size - 1}), got {w.shape}"
            )
        if np.any(w < 0) or np.any(~np.isfinite(w)):
            raise ValueError("weights must be finite and non-negative")
        sums = w.sum(axis=1)
        if np.any(sums <= 0):
            raise ValueError("each orientation needs positive total weight")
        w = w / sums[:, None]
        edges.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "bin_edges", edges)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "beta_max", float(self.beta_max))

    @property
    def bins(self) -> int:
        return self.bin_edges.size - 1


def fit_marginal(
    sample_set: SampleSet, bins: int = 180, spec: LatticeSpec | None = None
) -> AngleMarginal:
    """Histogram the angles of a sample set, split by cell rest orientation."""
    if bins < 1:
        raise ValueError("bins must be >= 1")
    rows, cols = sample_set.rows, sample_set.cols
    spec = spec or LatticeSpec(rows=rows, cols=cols)
    if (spec.rows, spec.cols) != (rows, cols):
        raise ValueError("spec shape does not match sample set")
    b = sample_set.beta_max
    edges = np.linspace(-b, b, bins + 1)
    vmask = base_angle_grid(spec) == 0.0
    w = np.empty((2, bins))
    w[0] = np.histogram(sample_set.betas[:, vmask], bins=edges)[0]
    w[1] = np.histogram(sample_set.betas[:, ~vmask], bins=edges)[0]
    return AngleMarginal(edges, w, b)


def _marginal_draw(marginal: AngleMarginal, rng, orient, size) -> np.ndarray:
    """Inverse-CDF draw with uniform jitter inside the chosen bin."""
    edges = marginal.bin_edges
    w = marginal.weights[orient]
    cdf = np.cumsum(w)
    cdf[-1] = 1.0
    u = rng.uniform(0.0, 1.0, size=size)
    k = np.searchsorted(cdf, u, side="left")
    lo = edges[k]
    hi = edges[k + 1]
    v = lo + rng.uniform(0.0, 1.0, size=size) * (hi - lo)
    v = v.astype(np.float32).astype(np.float64)
    np.clip(v, -marginal.beta_max, marginal.beta_max, out=v)
    bad = np.abs(v) > marginal.beta_max
    if np.any(bad):  # only if beta_max itself is not f32-representable
        v[bad] = 0.0
    return v


def marginal_grid(
    marginal: AngleMarginal,
    rng: np.random.Generator,
    spec: LatticeSpec | None = None,
) -> CutGrid:
    """One pattern with independent per-cell draws from a fitted marginal."""
    spec = spec or LatticeSpec()
    vmask = base_angle_grid(spec) == 0.0
    betas = np.empty((spec.rows, spec.cols))
    betas[vmask] = _marginal_draw(marginal, rng, 0, int(vmask.sum()))
    betas[~vmask] = _marginal_draw(marginal, rng, 1, int((~vmask).sum()))
    return CutGrid(betas, marginal.beta_max)


def marginal_set(
    marginal: AngleMarginal,
    count: int,
    seed: int,
    spec: LatticeSpec | None = None,
) -> SampleSet:
    """`count` patterns of independent per-cell draws from a fitted marginal."""
    spec = spec or LatticeSpec()
    if count <= 0:
        raise ValueError("count must be positive")
    rng = _chain_rng(seed, 0)
    vmask = base_angle_grid(spec) == 0.0
    nv = int(vmask.sum())
    nh = spec.n_cells - nv
    betas = np.empty((count, spec.rows, spec.cols))
    betas[:, vmask] = _marginal_draw(marginal, rng, 0, (count, nv))
    betas[:, ~vmask] = _marginal_draw(marginal, rng, 1, (count, nh))
    return SampleSet(betas, marginal.beta_max, "marginal", seed)


def admissible_beta_set(
    spec: LatticeSpec,
    grid: CutGrid,
    i: int,
    j: int,
    resolution: float = _chains.SCAN_STEP,
) -> list[tuple[float, float]]:
    """Admissible angle intervals for cell (i, j) with all neighbors fixed.

    Scans [-beta_max, beta_max] at `resolution` degrees and refines interval
    boundaries by bisection to resolution/100, so features narrower than the
    scan step can be missed. Intervals are disjoint and ascending.
    """
    if not (0 <= i < spec.rows and 0 <= j < spec.cols):
        raise IndexError(f"cell ({i}, {j}) outside lattice")
    if resolution <= 0:
        raise ValueError("resolution must be positive")
    base = base_angle_grid(spec)
    half = spec.cut_length / 2.0
    nx0 = np.empty(8)
    ny0 = np.empty(8)
    nx1 = np.empty(8)
    ny1 = np.empty(8)
    _chains._gather_neighbors(
        grid.beta, base, i, j, half, spec.spacing, nx0, ny0, nx1, ny1
    )
    lo = np.empty(64)
    hi = np.empty(64)
    m = _chains._scan_intervals(
        grid.beta_max, base[i, j], half, nx0, ny0, nx1, ny1,
        EPS, resolution, resolution / _chains.REFINE_DIV, lo, hi,
    )
    return [(float(lo[t]), float(hi[t])) for t in range(m)]


def sweep_replace(
    spec: LatticeSpec,
    grid: CutGrid,
    i: int,
    j: int,
    rng: np.random.Generator,
    max_draws: int = _chains.MAX_DRAWS,
    resolution: float = _chains.SCAN_STEP,
) -> float:
    """Redraw one cell's angle uniformly over its admissible set.

    The grid itself is immutable; the redrawn (float32-exact) value is
    returned, and substituting it keeps the pattern admissible. Falls back
    from rejection sampling to a measure-weighted interval draw after
    `max_draws` misses; if even that fails, returns the current angle.
    """
    if not (0 <= i < spec.rows and 0 <= j < spec.cols):
        raise IndexError(f"cell ({i}, {j}) outside lattice")
    if grid.rows != spec.rows or grid.cols != spec.cols:
        raise ValueError("grid shape does not match spec")
    base = base_angle_grid(spec)
    return float(
        _chains._replace_cell(
            rng, grid.beta, base, i, j, grid.beta_max,
            spec.cut_length / 2.0, spec.spacing, EPS,
            max_draws, resolution, resolution / _chains.REFINE_DIV,
        )
    )


def _worker_count(workers) -> int:
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get("KGS_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def generate_dataset(
    spec: LatticeSpec,
    beta_max: float,
    count: int,
    sweeps: int = DEFAULT_SWEEPS,
    seed: int = 0,
    workers: int | None = None,
) -> SampleSet:
    """Draw `count` admissible patterns from independent replacement chains.

    Each pattern is the end state of its own chain: start at the rest
    pattern, run `sweeps` raster-order sweeps, redraw every cell from its
    conditional admissible set. Chain k uses the child stream (seed, k), so
    the result is identical for any worker count (KGS_THREADS or `workers`
    only bound parallelism).
    """
    if count <= 0:
        raise ValueError("count must be positive")
    if sweeps < 1:
        raise ValueError("sweeps must be >= 1")
    if not (0 < beta_max <= 90):
        raise ValueError(f"beta_max must lie in (0, 90], got {beta_max}")
    base = base_angle_grid(spec)
    half = spec.cut_length / 2.0
    tol = _chains.SCAN_STEP / _chains.REFINE_DIV

    def one_chain(k: int) -> np.ndarray:
        beta = np.zeros((spec.rows, spec.cols))
        _chains.run_chain(
            _chain_rng(seed, k), beta, base, float(beta_max), half,
            spec.spacing, EPS, sweeps, _chains.MAX_DRAWS, _chains.SCAN_STEP, tol,
        )
        return beta

    nworkers = _worker_count(workers)
    betas = np.empty((count, spec.rows, spec.cols))
    if nworkers > 1 and count > 1:
        with ThreadPoolExecutor(max_workers=nworkers) as pool:
            for k, out in enumerate(pool.map(one_chain, range(count))):
                betas[k] = out
    else:
        for k in range(count):
            betas[k] = one_chain(k)
    return SampleSet(betas, beta_max, "sweep", seed, sweeps=sweeps)
