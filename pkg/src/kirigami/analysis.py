"""Two-cut design-space analysis.

The reduced system: two cuts with fixed centres separated by one lattice
spacing, free absolute angles (a1, a2). Sweeping both angles over a bounded
square yields an occupancy map of the intersecting ("non-admissible")
region; chords and detour paths through that square quantify how connected
the admissible region is.

Angles here are absolute (degrees from vertical). A bounded design square
is described by per-cut rest angles plus a symmetric bound: axis k spans
[base_k - beta_max, base_k + beta_max].
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from . import _chains
from .batches import angles_intersect
from .lattice import DEFAULT_CUT_LENGTH, EPS, LatticeSpec, base_angle_grid
from .sampling import _chain_rng, _f32_uniform

__all__ = [
    "SEP_VERTICAL",
    "SEP_HORIZONTAL",
    "TwoCutMap",
    "PathResult",
    "ChordStats",
    "SweepPoint",
    "euclidean_distance",
    "pair_intersects",
    "build_two_cut_map",
    "nonadmissible_fraction",
    "straight_path_crosses",
    "path_crossing_probability",
    "admissible_path",
    "sweep_curves",
]

# Unit separation vectors between the two cut centres, in (x, y).
SEP_VERTICAL = (0.0, 1.0)
SEP_HORIZONTAL = (1.0, 0.0)

# Rest angles of a physically adjacent cut pair: one vertical, one horizontal.
BASES_ADJACENT = (0.0, 90.0)
# Both axes measured from vertical; used when the square should be read as
# raw absolute angles.
BASES_ABSOLUTE = (0.0, 0.0)


def euclidean_distance(x, y) -> float:
    """Euclidean distance between two equal-length angle vectors (degrees)."""
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if x.shape != y.shape:
        raise ValueError(f"length mismatch: {x.shape} vs {y.shape}")
    return float(np.sqrt(np.sum((x - y) ** 2)))


def pair_intersects(
    a1,
    a2,
    separation=SEP_VERTICAL,
    spacing: float = 1.0,
    cut_length: float = DEFAULT_CUT_LENGTH,
    eps: float = EPS,
):
    """Whether two cuts at absolute angles a1, a2 intersect.

    Cut 1 sits at the origin, cut 2 at separation*spacing. Scalar in, bool
    out; array in, boolean array out (broadcasting).
    """
    scalar = np.isscalar(a1) and np.isscalar(a2)
    out = angles_intersect(
        a1, a2, offset=separation, spacing=spacing, cut_length=cut_length, eps=eps
    )
    return bool(out) if scalar else out


@dataclass(frozen=True)
class TwoCutMap:
    """Occupancy bitmap of the two-cut design square.

    occupancy[i, j] is True where cuts at angles (axis1[i], axis2[j])
    intersect; axis arrays hold the cell-centre angles. axis 1 varies along
    rows, axis 2 along columns.
    """

    beta_max: float
    resolution: int
    base_angles: tuple
    separation: tuple
    axis1: np.ndarray = field(repr=False)
    axis2: np.ndarray = field(repr=False)
    occupancy: np.ndarray = field(repr=False)

    @property
    def cell_width(self) -> float:
        return 2.0 * self.beta_max / self.resolution

    def cell_of(self, a: tuple) -> tuple:
        """Map an angle pair to its (i, j) cell; raises outside the square."""
        i = self._axis_index(a[0], self.base_angles[0])
        j = self._axis_index(a[1], self.base_angles[1])
        return i, j

    def _axis_index(self, angle: float, base: float) -> int:
        lo = base - self.beta_max
        t = (angle - lo) / self.cell_width
        k = int(t)
        if t < 0 or angle > base + self.beta_max:
            raise ValueError(
                f"angle {angle} outside square [{lo}, {base + self.beta_max}]"
            )
        return min(k, self.resolution - 1)


def build_two_cut_map(
    beta_max: float,
    resolution: int = 2048,
    base_angles=BASES_ADJACENT,
    separation=SEP_VERTICAL,
    spacing: float = 1.0,
    cut_length: float = DEFAULT_CUT_LENGTH,
    eps: float = EPS,
) -> TwoCutMap:
    """Rasterize the intersecting region of the two-cut square.

    Each cell is tested at its centre, so the boundary is resolved to one
    cell width (2*beta_max/resolution degrees).
    """
    if not (0 < beta_max <= 90):
        raise ValueError(f"beta_max must lie in (0, 90], got {beta_max}")
    if resolution < 16:
        raise ValueError("resolution must be at least 16")
    w = 2.0 * beta_max / resolution
    c1 = base_angles[0] - beta_max + w * (np.arange(resolution) + 0.5)
    c2 = base_angles[1] - beta_max + w * (np.arange(resolution) + 0.5)
    occ = np.empty((resolution, resolution), dtype=np.bool_)
    _chains.fill_pair_map(
        c1, c2,
        separation[0] * spacing, separation[1] * spacing,
        cut_length / 2.0, eps, occ,
    )
    occ.setflags(write=False)
    c1.setflags(write=False)
    c2.setflags(write=False)
    return TwoCutMap(
        beta_max=float(beta_max),
        resolution=int(resolution),
        base_angles=(float(base_angles[0]), float(base_angles[1])),
        separation=(float(separation[0]), float(separation[1])),
        axis1=c1,
        axis2=c2,
        occupancy=occ,
    )


def nonadmissible_fraction(tcmap: TwoCutMap) -> float:
    """Area fraction of the design square where the two cuts intersect."""
    return float(tcmap.occupancy.mean())


def straight_path_crosses(
    a,
    b,
    separation=SEP_VERTICAL,
    step: float = 0.02,
    spacing: float = 1.0,
    cut_length: float = DEFAULT_CUT_LENGTH,
    eps: float = EPS,
) -> bool:
    """Whether the straight chord a -> b in angle space hits the
    intersecting region.

    Both endpoints must be admissible (checked exactly); the chord is
    sampled every <= `step` degrees, endpoints included, so excursions
    narrower than `step` can in principle be missed.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    a1, a2 = float(a[0]), float(a[1])
    b1, b2 = float(b[0]), float(b[1])
    ox, oy = separation[0] * spacing, separation[1] * spacing
    half = cut_length / 2.0
    if _chains._angles_hit(a1, a2, ox, oy, half, eps):
        raise ValueError(f"start point {a} is not admissible")
    if _chains._angles_hit(b1, b2, ox, oy, half, eps):
        raise ValueError(f"end point {b} is not admissible")
    return bool(_chains.chord_hits(a1, a2, b1, b2, ox, oy, half, eps, step))


def _wilson(k: int, n: int, z: float = 1.959963984540054):
    """Wilson score interval for a binomial proportion."""
    if n <= 0:
        raise ValueError("n must be positive")
    p = k / n
    denom = 1.0 + z * z / n
    centre = (p + z * z / (2 * n)) / denom
    half = (z / denom) * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n))
    lo = 0.0 if k == 0 else max(0.0, centre - half)
    hi = 1.0 if k == n else min(1.0, centre + half)
    return lo, hi


@dataclass(frozen=True)
class ChordStats:
    """Monte Carlo estimate of the chord-blocking probability."""

    beta_max: float
    n_pairs: int
    n_crossing: int
    probability: float
    ci_low: float
    ci_high: float
    step: float


def path_crossing_probability(
    beta_max: float,
    n_pairs: int,
    seed: int,
    base_angles=BASES_ADJACENT,
    separation=SEP_VERTICAL,
    step: float = 0.02,
    spacing: float = 1.0,
    cut_length: float = DEFAULT_CUT_LENGTH,
    eps: float = EPS,
) -> ChordStats:
    """Probability that the straight chord between two random admissible
    configurations passes through the intersecting region.

    Endpoints are drawn uniformly on the admissible part of the design
    square (rejection sampling with the exact pair test); the 95% interval
    is a Wilson score interval.
    """
    if n_pairs <= 0:
        raise ValueError("n_pairs must be positive")
    if not (0 < beta_max <= 90):
        raise ValueError(f"beta_max must lie in (0, 90], got {beta_max}")
    rng = _chain_rng(seed, 0)
    ox, oy = separation[0] * spacing, separation[1] * spacing
    half = cut_length / 2.0

    def draw_admissible(n):
        out1 = np.empty(n)
        out2 = np.empty(n)
        got = 0
        while got < n:
            m = max(64, int((n - got) * 1.6))
            u1 = rng.uniform(base_angles[0] - beta_max, base_angles[0] + beta_max, m)
            u2 = rng.uniform(base_angles[1] - beta_max, base_angles[1] + beta_max, m)
            ok = ~angles_intersect(
                u1, u2, offset=(ox, oy), spacing=1.0,
                cut_length=cut_length, eps=eps,
            )
            take = min(int(ok.sum()), n - got)
            out1[got:got + take] = u1[ok][:take]
            out2[got:got + take] = u2[ok][:take]
            got += take
        return out1, out2

    s1, s2 = draw_admissible(n_pairs)
    e1, e2 = draw_admissible(n_pairs)
    hits = int(_chains.count_chord_hits(s1, s2, e1, e2, ox, oy, half, eps, step))
    lo, hi = _wilson(hits, n_pairs)
    return ChordStats(
        beta_max=float(beta_max),
        n_pairs=int(n_pairs),
        n_crossing=hits,
        probability=hits / n_pairs,
        ci_low=lo,
        ci_high=hi,
        step=float(step),
    )


@dataclass(frozen=True)
class PathResult:
    """A polyline through the admissible part of the design square."""

    found: bool
    vertices: tuple
    length: float


_SQRT2 = math.sqrt(2.0)


def _octile(di: int, dj: int) -> float:
    lo, hi = (di, dj) if di < dj else (dj, di)
    return hi - lo + _SQRT2 * lo


def admissible_path(tcmap: TwoCutMap, a, b) -> PathResult:
    """Shortest admissible lattice path between two angle pairs.

    Runs A* on the free cells of the occupancy map (8-connected, diagonal
    steps cost sqrt(2) cells and may not cut corners past an occupied
    cell), then collapses collinear runs. Vertices are cell centres, which
    the map guarantees admissible; endpoints are re-checked with the exact
    pair test. Raises ValueError when an endpoint is non-admissible or its
    cell is occupied.
    """
    a = (float(a[0]), float(a[1]))
    b = (float(b[0]), float(b[1]))
    half = DEFAULT_CUT_LENGTH / 2.0
    ox, oy = tcmap.separation
    for name, p in (("start", a), ("end", b)):
        if _chains._angles_hit(p[0], p[1], ox, oy, half, EPS):
            raise ValueError(f"{name} point {p} is not admissible")
    occ = tcmap.occupancy
    start = tcmap.cell_of(a)
    goal = tcmap.cell_of(b)
    for name, cell in (("start", start), ("end", goal)):
        if occ[cell]:
            raise ValueError(
                f"{name} cell {cell} is occupied at resolution {tcmap.resolution}"
            )

    n = tcmap.resolution
    w = tcmap.cell_width
    if start == goal:
        verts = (a, b) if a != b else (a,)
        return PathResult(True, verts, euclidean_distance(a, b))

    # A*: g-scores in cell units, octile heuristic
    g = np.full((n, n), np.inf)
    came = np.full((n, n, 2), -1, dtype=np.int32)
    g[start] = 0.0
    pq = [(_octile(abs(start[0] - goal[0]), abs(start[1] - goal[1])), start)]
    closed = np.zeros((n, n), dtype=np.bool_)
    found = False
    while pq:
        f, (ci, cj) = heapq.heappop(pq)
        if closed[ci, cj]:
            continue
        closed[ci, cj] = True
        if (ci, cj) == goal:
            found = True
            break
        for di in (-1, 0, 1):
            for dj in (-1, 0, 1):
                if di == 0 and dj == 0:
                    continue
                ni, nj = ci + di, cj + dj
                if not (0 <= ni < n and 0 <= nj < n):
                    continue
                if occ[ni, nj] or closed[ni, nj]:
                    continue
                if di != 0 and dj != 0:
                    # diagonal moves may not squeeze between occupied cells
                    if occ[ci + di, cj] or occ[ci, cj + dj]:
                        continue
                step = _SQRT2 if (di != 0 and dj != 0) else 1.0
                ng = g[ci, cj] + step
                if ng < g[ni, nj]:
                    g[ni, nj] = ng
                    came[ni, nj] = (ci, cj)
                    h = _octile(abs(ni - goal[0]), abs(nj - goal[1]))
                    heapq.heappush(pq, (ng + h, (ni, nj)))

    if not found:
        return PathResult(False, (), math.inf)

    cells = [goal]
    while cells[-1] != start:
        prev = came[cells[-1]]
        cells.append((int(prev[0]), int(prev[1])))
    cells.reverse()

    # keep only direction changes
    keep = [cells[0]]
    for k in range(1, len(cells) - 1):
        d0 = (cells[k][0] - keep[-1][0], cells[k][1] - keep[-1][1])
        d1 = (cells[k + 1][0] - cells[k][0], cells[k + 1][1] - cells[k][1])
        cross = d0[0] * d1[1] - d0[1] * d1[0]
        if cross != 0 or (d0[0] * d1[0] + d0[1] * d1[1]) < 0:
            keep.append(cells[k])
    keep.append(cells[-1])

    def centre(cell):
        return (float(tcmap.axis1[cell[0]]), float(tcmap.axis2[cell[1]]))

    verts = [a] + [centre(c) for c in keep] + [b]
    dedup = [verts[0]]
    for v in verts[1:]:
        if v != dedup[-1]:
            dedup.append(v)
    length = sum(
        euclidean_distance(dedup[k], dedup[k + 1]) for k in range(len(dedup) - 1)
    )
    return PathResult(True, tuple(dedup), float(length))


@dataclass(frozen=True)
class SweepPoint:
    """Uniform-draw statistics of the full lattice at one angle bound."""

    beta_max: float
    n: int
    mean_intersections: float
    mean_se: float
    admissible_count: int
    admissible_rate: float
    rate_low: float
    rate_high: float


def sweep_curves(
    beta_max_values,
    n_samples: int,
    seed: int,
    spec: LatticeSpec | None = None,
    block: int = 100_000,
) -> list[SweepPoint]:
    """How intersection statistics grow with the angle bound.

    For each bound, draws `n_samples` unconstrained uniform patterns and
    reports the mean intersecting-pair count (with standard error) and the
    fraction of fully admissible patterns (with 95% Wilson interval). Each
    bound uses its own child stream of `seed`, so results do not depend on
    the order or subset of bounds requested.
    """
    spec = spec or LatticeSpec()
    if n_samples <= 0:
        raise ValueError("n_samples must be positive")
    base = base_angle_grid(spec)
    half = spec.cut_length / 2.0
    points = []
    for bmax in beta_max_values:
        if not (0 < bmax <= 90):
            raise ValueError(f"beta_max must lie in (0, 90], got {bmax}")
        # child stream keyed by the bound itself (milli-degrees), so the
        # numbers for one bound do not depend on which others were requested
        rng = _chain_rng(seed, int(round(bmax * 1000)))
        total = 0
        total_sq = 0
        n_adm = 0
        done = 0
        while done < n_samples:
            m = min(block, n_samples - done)
            u = _f32_uniform(rng, bmax, (m, spec.rows, spec.cols))
            counts = np.empty(m, dtype=np.int64)
            _chains.count_many(u, base, half, spec.spacing, EPS, counts)
            total += int(counts.sum())
            total_sq += int((counts * counts).sum())
            n_adm += int((counts == 0).sum())
            done += m
        mean = total / n_samples
        var = max(0.0, total_sq / n_samples - mean * mean)
        se = math.sqrt(var / n_samples)
        lo, hi = _wilson(n_adm, n_samples)
        points.append(
            SweepPoint(
                beta_max=float(bmax),
                n=int(n_samples),
                mean_intersections=mean,
                mean_se=se,
                admissible_count=n_adm,
                admissible_rate=n_adm / n_samples,
                rate_low=lo,
                rate_high=hi,
            )
        )
    return points
