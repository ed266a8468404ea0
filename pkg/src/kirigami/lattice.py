"""Periodic checkerboard lattice of straight cuts.

A pattern is a rows x cols grid of unit cells on a torus. Each cell carries
one straight cut of fixed length centred on the cell; the rest angle
alternates between vertical and horizontal in a checkerboard, and a bounded
perturbation angle beta tilts the cut away from its rest orientation.

Angles are in degrees, measured from the vertical (+y) axis, increasing
toward +x. Geometry routines assume coordinates of order one (unit cell
spacing), which is what makes the absolute tolerance `eps` meaningful.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DEFAULT_CUT_LENGTH",
    "EPS",
    "LatticeSpec",
    "CutGrid",
    "Segment",
    "base_angle",
    "base_angle_grid",
    "wrap_angle",
    "cut_segment",
    "segments_intersect",
    "neighbor_offsets",
    "count_intersections",
    "is_admissible",
]

# Cut length sqrt(3) on a unit-spacing grid: long enough that neighboring
# cuts can collide, short enough that they need not.
DEFAULT_CUT_LENGTH = math.sqrt(3.0)

# Absolute tolerance for orientation tests (unit-scale coordinates).
EPS = 1e-9

# The 8 torus neighbors of a cell, as (di, dj) index offsets.
_NEIGHBOR_OFFSETS = (
    (-1, -1), (-1, 0), (-1, 1),
    (0, -1), (0, 1),
    (1, -1), (1, 0), (1, 1),
)

# Counting each unordered neighbor pair once only needs half the offsets.
UNIQUE_PAIR_OFFSETS = ((0, 1), (1, 0), (1, 1), (1, -1))


@dataclass(frozen=True)
class LatticeSpec:
    """Shape and metric of the periodic cut lattice.

    Attributes:
        rows: number of cell rows (even, >= 2) so the checkerboard tiles
            the torus without a seam.
        cols: number of cell columns (even, >= 2).
        spacing: centre-to-centre distance between adjacent cells.
        cut_length: length of every cut.
        vertical_parity: cells with (i + j) % 2 == vertical_parity rest
            vertical; the others rest horizontal.
    """

    rows: int = 6
    cols: int = 6
    spacing: float = 1.0
    cut_length: float = DEFAULT_CUT_LENGTH
    vertical_parity: int = 0

    def __post_init__(self):
        if self.rows < 2 or self.cols < 2:
            raise ValueError("lattice needs at least 2x2 cells")
        if self.rows % 2 or self.cols % 2:
            raise ValueError("rows and cols must be even for a seamless checkerboard")
        if not (self.spacing > 0 and math.isfinite(self.spacing)):
            raise ValueError(f"spacing must be positive, got {self.spacing}")
        if not (0 < self.cut_length < 2 * self.spacing):
            raise ValueError(
                f"cut_length must lie in (0, 2*spacing), got {self.cut_length}"
            )
        if self.vertical_parity not in (0, 1):
            raise ValueError("vertical_parity must be 0 or 1")

    @property
    def n_cells(self) -> int:
        return self.rows * self.cols

    @property
    def n_neighbor_pairs(self) -> int:
        """Number of unordered neighbor pairs on the torus (4 per cell)."""
        return self.n_cells * len(UNIQUE_PAIR_OFFSETS)


@dataclass(frozen=True)
class Segment:
    """Closed line segment between two distinct endpoints."""

    x0: float
    y0: float
    x1: float
    y1: float

    def __post_init__(self):
        if self.x0 == self.x1 and self.y0 == self.y1:
            raise ValueError("segment endpoints coincide")

    @property
    def p0(self) -> tuple[float, float]:
        return (self.x0, self.y0)

    @property
    def p1(self) -> tuple[float, float]:
        return (self.x1, self.y1)


class CutGrid:
    """One pattern: a (rows, cols) array of perturbation angles.

    Immutable; `beta` is a read-only float64 array with |beta| <= beta_max.
    """

    __slots__ = ("beta", "beta_max")

    def __init__(self, beta: np.ndarray, beta_max: float):
        beta = np.ascontiguousarray(beta, dtype=np.float64)
        if beta.ndim != 2:
            raise ValueError(f"beta must be 2-D, got shape {beta.shape}")
        if not (0 < beta_max <= 90):
            raise ValueError(f"beta_max must lie in (0, 90], got {beta_max}")
        if not np.all(np.isfinite(beta)):
            raise ValueError("beta contains non-finite values")
        # 1e-4 deg slack: float32 round-off from serialized angles must not
        # flip validity, and it is far below any geometric significance
        if np.any(np.abs(beta) > beta_max + 1e-4):
            raise ValueError("|beta| exceeds beta_max")
        beta = beta.copy()
        beta.setflags(write=False)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "beta_max", float(beta_max))

    def __setattr__(self, name, value):
        raise AttributeError("CutGrid is immutable")

    @property
    def rows(self) -> int:
        return self.beta.shape[0]

    @property
    def cols(self) -> int:
        return self.beta.shape[1]

    def replace_beta(self, i: int, j: int, value: float) -> "CutGrid":
        """Return a copy of this grid with one cell's angle replaced."""
        out = self.beta.copy()
        out[i, j] = value
        return CutGrid(out, self.beta_max)

    def __eq__(self, other):
        if not isinstance(other, CutGrid):
            return NotImplemented
        return self.beta_max == other.beta_max and np.array_equal(self.beta, other.beta)

    def __hash__(self):
        return hash((self.beta_max, self.beta.tobytes()))

    def __repr__(self):
        return f"CutGrid(shape={self.beta.shape}, beta_max={self.beta_max})"


def base_angle(spec: LatticeSpec, i: int, j: int) -> float:
    """Rest angle of cell (i, j): 0 (vertical) or 90 (horizontal) degrees."""
    if not (0 <= i < spec.rows and 0 <= j < spec.cols):
        raise IndexError(f"cell ({i}, {j}) outside {spec.rows}x{spec.cols} lattice")
    return 0.0 if (i + j) % 2 == spec.vertical_parity else 90.0


def base_angle_grid(spec: LatticeSpec) -> np.ndarray:
    """Rest angles for every cell as a (rows, cols) float64 array."""
    ii, jj = np.meshgrid(np.arange(spec.rows), np.arange(spec.cols), indexing="ij")
    return np.where((ii + jj) % 2 == spec.vertical_parity, 0.0, 90.0)


def wrap_angle(angle_deg: float) -> float:
    """Reduce an angle to the canonical orientation range (-90, 90].

    A straight cut is invariant under 180-degree rotation, so orientations
    live on a half-circle. 90 maps to 90, 94 to -86, -135 to 45.
    """
    if not math.isfinite(angle_deg):
        raise ValueError(f"angle must be finite, got {angle_deg}")
    r = math.remainder(angle_deg, 180.0)
    if r <= -90.0:
        r += 180.0
    return r


def _endpoints(cx: float, cy: float, angle_deg: float, half: float):
    a = math.radians(angle_deg)
    dx = half * math.sin(a)
    dy = half * math.cos(a)
    return cx - dx, cy - dy, cx + dx, cy + dy


def cut_segment(spec: LatticeSpec, grid: CutGrid, i: int, j: int) -> Segment:
    """Endpoints of the cut in cell (i, j).

    The cut is centred on the cell centre (j*spacing, i*spacing) at absolute
    angle base + beta from vertical.
    """
    if grid.rows != spec.rows or grid.cols != spec.cols:
        raise ValueError(
            f"grid shape {grid.beta.shape} does not match spec "
            f"{(spec.rows, spec.cols)}"
        )
    alpha = base_angle(spec, i, j) + grid.beta[i, j]
    cx = j * spec.spacing
    cy = i * spec.spacing
    x0, y0, x1, y1 = _endpoints(cx, cy, alpha, spec.cut_length / 2.0)
    return Segment(x0, y0, x1, y1)


def _on_segment(ax, ay, bx, by, px, py, eps):
    # (p assumed collinear with a-b) inside the bounding box, eps-inflated
    return (
        min(ax, bx) - eps <= px <= max(ax, bx) + eps
        and min(ay, by) - eps <= py <= max(ay, by) + eps
    )


def segments_intersect(s1: Segment, s2: Segment, eps: float = EPS) -> bool:
    """Whether two closed segments share at least one point.

    Endpoint touching and collinear overlap both count. Orientation signs
    with |cross product| < eps are treated as zero, so the answer is stable
    for nearly-degenerate input at unit scale.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    p0x, p0y = s1.x0, s1.y0
    p1x, p1y = s1.x1, s1.y1
    q0x, q0y = s2.x0, s2.y0
    q1x, q1y = s2.x1, s2.y1

    rx, ry = p1x - p0x, p1y - p0y
    sx, sy = q1x - q0x, q1y - q0y

    d1 = sx * (p0y - q0y) - sy * (p0x - q0x)
    d2 = sx * (p1y - q0y) - sy * (p1x - q0x)
    d3 = rx * (q0y - p0y) - ry * (q0x - p0x)
    d4 = rx * (q1y - p0y) - ry * (q1x - p0x)

    z1 = 0 if abs(d1) < eps else (1 if d1 > 0 else -1)
    z2 = 0 if abs(d2) < eps else (1 if d2 > 0 else -1)
    z3 = 0 if abs(d3) < eps else (1 if d3 > 0 else -1)
    z4 = 0 if abs(d4) < eps else (1 if d4 > 0 else -1)

    if z1 * z2 < 0 and z3 * z4 < 0:
        return True
    # boundary cases: an endpoint lies on the other segment's line
    if z1 == 0 and _on_segment(q0x, q0y, q1x, q1y, p0x, p0y, eps):
        return True
    if z2 == 0 and _on_segment(q0x, q0y, q1x, q1y, p1x, p1y, eps):
        return True
    if z3 == 0 and _on_segment(p0x, p0y, p1x, p1y, q0x, q0y, eps):
        return True
    if z4 == 0 and _on_segment(p0x, p0y, p1x, p1y, q1x, q1y, eps):
        return True
    return False


def neighbor_offsets() -> tuple[tuple[int, int], ...]:
    """Index offsets of the 8 surrounding cells on the torus."""
    return _NEIGHBOR_OFFSETS


def count_intersections(spec: LatticeSpec, grid: CutGrid, eps: float = EPS) -> int:
    """Number of intersecting neighbor cut pairs, each unordered pair once.

    Every cell is paired with its 8 torus neighbors; a pair is counted when
    the two cuts share at least one point. Neighboring cells across the
    periodic boundary are unwrapped into the same chart before testing, so
    the torus metric is respected. Returns a value in [0, 4*rows*cols].
    """
    if grid.rows != spec.rows or grid.cols != spec.cols:
        raise ValueError("grid shape does not match spec")
    half = spec.cut_length / 2.0
    s = spec.spacing
    total = 0
    for i in range(spec.rows):
        for j in range(spec.cols):
            a1 = base_angle(spec, i, j) + grid.beta[i, j]
            x0, y0, x1, y1 = _endpoints(0.0, 0.0, a1, half)
            seg1 = Segment(x0, y0, x1, y1)
            for di, dj in UNIQUE_PAIR_OFFSETS:
                ni = (i + di) % spec.rows
                nj = (j + dj) % spec.cols
                a2 = base_angle(spec, ni, nj) + grid.beta[ni, nj]
                # neighbor placed at its unwrapped offset from cell (i, j)
                x0, y0, x1, y1 = _endpoints(dj * s, di * s, a2, half)
                seg2 = Segment(x0, y0, x1, y1)
                if segments_intersect(seg1, seg2, eps):
                    total += 1
    return total


def is_admissible(spec: LatticeSpec, grid: CutGrid, eps: float = EPS) -> bool:
    """True when no two neighboring cuts intersect."""
    return count_intersections(spec, grid, eps) == 0
