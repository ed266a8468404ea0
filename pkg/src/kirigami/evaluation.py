"""Statistics for comparing pattern sets.

The quantities mirror how generated patterns are judged: how often
neighboring cuts intersect, what the single-cell angle distribution looks
like, and whether the joint distribution of adjacent-cell angle pairs
matches a reference set. Baselines from unconstrained uniform draws and
from an independent per-cell marginal fit give the two natural goalposts:
a useful generator should sit between "matches single-cell statistics"
and "matches joint statistics".
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _chains
from .lattice import EPS, LatticeSpec, base_angle_grid
from .sampling import SampleSet, fit_marginal, marginal_set, uniform_set

__all__ = [
    "Histogram1D",
    "PairHistogram",
    "EvalReport",
    "intersection_counts",
    "marginal_histogram",
    "neighbor_pair_histogram",
    "tv_distance",
    "zone_violation_rate",
    "evaluate",
]


@dataclass(frozen=True)
class Histogram1D:
    """Counts over consecutive bins; edges has one more entry than counts."""

    bin_edges: np.ndarray
    counts: np.ndarray

    def __post_init__(self):
        edges = np.ascontiguousarray(self.bin_edges, dtype=np.float64)
        counts = np.ascontiguousarray(self.counts, dtype=np.int64)
        if edges.ndim != 1 or counts.ndim != 1 or edges.size != counts.size + 1:
            raise ValueError("need 1-D counts and edges with len(edges) == len(counts)+1")
        if np.any(np.diff(edges) <= 0):
            raise ValueError("bin_edges must be strictly increasing")
        if np.any(counts < 0):
            raise ValueError("counts must be non-negative")
        edges.setflags(write=False)
        counts.setflags(write=False)
        object.__setattr__(self, "bin_edges", edges)
        object.__setattr__(self, "counts", counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())


@dataclass(frozen=True)
class PairHistogram:
    """2-D counts of (vertical-rest cell angle, neighbor-below angle)."""

    bin_edges: np.ndarray
    counts: np.ndarray

    def __post_init__(self):
        edges = np.ascontiguousarray(self.bin_edges, dtype=np.float64)
        counts = np.ascontiguousarray(self.counts, dtype=np.int64)
        b = edges.size - 1
        if edges.ndim != 1 or counts.shape != (b, b):
            raise ValueError("counts must be square with matching bin_edges")
        if np.any(np.diff(edges) <= 0):
            raise ValueError("bin_edges must be strictly increasing")
        if np.any(counts < 0):
            raise ValueError("counts must be non-negative")
        edges.setflags(write=False)
        counts.setflags(write=False)
        object.__setattr__(self, "bin_edges", edges)
        object.__setattr__(self, "counts", counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def intersection_counts(spec: LatticeSpec, sample_set: SampleSet) -> np.ndarray:
    """Per-pattern intersecting-neighbor-pair counts as an int64 array."""
    _check_shape(spec, sample_set)
    out = np.empty(sample_set.count, dtype=np.int64)
    _chains.count_many(
        sample_set.betas, base_angle_grid(spec), spec.cut_length / 2.0,
        spec.spacing, EPS, out,
    )
    return out


def _check_shape(spec, sample_set):
    if (spec.rows, spec.cols) != (sample_set.rows, sample_set.cols):
        raise ValueError(
            f"sample set shape {(sample_set.rows, sample_set.cols)} does not "
            f"match lattice {(spec.rows, spec.cols)}"
        )


def marginal_histogram(sample_set: SampleSet, bins: int = 180) -> Histogram1D:
    """Histogram of all cell angles pooled, over [-beta_max, beta_max]."""
    if bins < 1:
        raise ValueError("bins must be >= 1")
    b = sample_set.beta_max
    edges = np.linspace(-b, b, bins + 1)
    counts, _ = np.histogram(sample_set.betas, bins=edges)
    return Histogram1D(edges, counts)


def neighbor_pair_histogram(
    spec: LatticeSpec, sample_set: SampleSet, bins: int = 60
) -> PairHistogram:
    """Joint histogram of (angle of a vertical-rest cell, angle of the cell
    below it), one pair per vertical-rest cell per pattern.

    The cell below a vertical-rest cell rests horizontal, so this captures
    the correlation the admissibility constraint induces between
    perpendicular neighbors.
    """
    if bins < 1:
        raise ValueError("bins must be >= 1")
    _check_shape(spec, sample_set)
    vmask = base_angle_grid(spec) == 0.0
    below = np.roll(sample_set.betas, shift=-1, axis=1)
    x = sample_set.betas[:, vmask].ravel()
    y = below[:, vmask].ravel()
    b = sample_set.beta_max
    edges = np.linspace(-b, b, bins + 1)
    counts, _, _ = np.histogram2d(x, y, bins=(edges, edges))
    return PairHistogram(edges, counts.astype(np.int64))


def tv_distance(h1, h2) -> float:
    """Total variation distance between two histograms' distributions.

    Both histograms must share bin edges (and dimensionality); counts are
    normalized before comparing, so totals may differ.
    """
    if type(h1) is not type(h2):
        raise ValueError("histogram types differ")
    if h1.bin_edges.shape != h2.bin_edges.shape or not np.allclose(
        h1.bin_edges, h2.bin_edges
    ):
        raise ValueError("bin edges differ")
    if h1.total == 0 or h2.total == 0:
        raise ValueError("empty histogram")
    p = h1.counts / h1.total
    q = h2.counts / h2.total
    return float(0.5 * np.abs(p - q).sum())


def zone_violation_rate(spec: LatticeSpec, sample_set: SampleSet) -> float:
    """Mean fraction of neighbor pairs that intersect, in [0, 1]."""
    counts = intersection_counts(spec, sample_set)
    return float(counts.sum() / (counts.size * spec.n_neighbor_pairs))


@dataclass(frozen=True)
class EvalReport:
    """Summary statistics of one sample set, optionally against a reference."""

    count: int
    beta_max: float
    source: str
    mean_intersections: float
    admissible_fraction: float
    violation_rate: float
    marginal: Histogram1D = field(repr=False)
    pairs: PairHistogram = field(repr=False)
    tv_marginal: float | None = None
    tv_pairs: float | None = None
    uniform_tv_pairs: float | None = None
    marginal_fit_tv_pairs: float | None = None

    def to_dict(self) -> dict:
        """JSON-ready dict; histogram payloads as nested lists."""
        return {
            "count": self.count,
            "beta_max": self.beta_max,
            "source": self.source,
            "mean_intersections": self.mean_intersections,
            "admissible_fraction": self.admissible_fraction,
            "violation_rate": self.violation_rate,
            "tv_marginal": self.tv_marginal,
            "tv_pairs": self.tv_pairs,
            "uniform_tv_pairs": self.uniform_tv_pairs,
            "marginal_fit_tv_pairs": self.marginal_fit_tv_pairs,
            "marginal_hist": {
                "bin_edges": self.marginal.bin_edges.tolist(),
                "counts": self.marginal.counts.tolist(),
            },
            "pair_hist": {
                "bin_edges": self.pairs.bin_edges.tolist(),
                "counts": self.pairs.counts.tolist(),
            },
        }


def evaluate(
    spec: LatticeSpec,
    sample_set: SampleSet,
    reference: SampleSet | None = None,
    marginal_bins: int = 180,
    pair_bins: int = 60,
    baseline_seed: int | None = None,
) -> EvalReport:
    """Score a sample set; with a reference, also score distribution match.

    Against a reference (same shape and beta_max), reports TV distances of
    the pooled-angle and neighbor-pair histograms. With `baseline_seed`,
    additionally reports the pair-histogram TV that unconstrained uniform
    draws and an independent marginal fit achieve against the same
    reference, sized like `sample_set` — the brackets any generator should
    beat. The mean intersection count is an exact integer ratio, so it does
    not depend on how the set was batched.
    """
    _check_shape(spec, sample_set)
    counts = intersection_counts(spec, sample_set)
    n_pairs = spec.n_neighbor_pairs
    report = {
        "count": sample_set.count,
        "beta_max": sample_set.beta_max,
        "source": sample_set.source,
        "mean_intersections": float(counts.sum() / counts.size),
        "admissible_fraction": float((counts == 0).sum() / counts.size),
        "violation_rate": float(counts.sum() / (counts.size * n_pairs)),
        "marginal": marginal_histogram(sample_set, marginal_bins),
        "pairs": neighbor_pair_histogram(spec, sample_set, pair_bins),
    }
    if reference is not None:
        _check_shape(spec, reference)
        if reference.beta_max != sample_set.beta_max:
            raise ValueError(
                f"beta_max mismatch: {sample_set.beta_max} vs reference "
                f"{reference.beta_max}"
            )
        ref_marginal = marginal_histogram(reference, marginal_bins)
        ref_pairs = neighbor_pair_histogram(spec, reference, pair_bins)
        report["tv_marginal"] = tv_distance(report["marginal"], ref_marginal)
        report["tv_pairs"] = tv_distance(report["pairs"], ref_pairs)
        if baseline_seed is not None:
            uni = uniform_set(
                reference.beta_max, sample_set.count, baseline_seed, spec
            )
            fit = fit_marginal(reference, marginal_bins, spec)
            mar = marginal_set(fit, sample_set.count, baseline_seed, spec)
            report["uniform_tv_pairs"] = tv_distance(
                neighbor_pair_histogram(spec, uni, pair_bins), ref_pairs
            )
            report["marginal_fit_tv_pairs"] = tv_distance(
                neighbor_pair_histogram(spec, mar, pair_bins), ref_pairs
            )
    return EvalReport(**report)
