"""Vectorized geometry over batches of patterns.

Same predicate semantics as `lattice.segments_intersect`, applied to numpy
arrays of many segments at once. The scalar routines in `lattice` are the
reference; these exist so Monte Carlo work over 1e6+ patterns stays cheap.
"""

from __future__ import annotations

import numpy as np

from .lattice import EPS, UNIQUE_PAIR_OFFSETS, LatticeSpec, base_angle_grid

__all__ = [
    "segments_intersect_arrays",
    "angles_intersect",
    "count_intersections_many",
]


def segments_intersect_arrays(p0, p1, q0, q1, eps: float = EPS) -> np.ndarray:
    """Elementwise closed-segment intersection test.

    Args:
        p0, p1, q0, q1: (..., 2) endpoint arrays; the two segments of each
            element are p0-p1 and q0-q1.
        eps: absolute tolerance; |cross| < eps counts as collinear.

    Returns:
        Boolean array of shape (...,); True where the segments share a point
        (proper crossings, endpoint touching and collinear overlap alike).
    """
    p0 = np.asarray(p0, dtype=np.float64)
    p1 = np.asarray(p1, dtype=np.float64)
    q0 = np.asarray(q0, dtype=np.float64)
    q1 = np.asarray(q1, dtype=np.float64)

    r = p1 - p0
    s = q1 - q0

    def cross(a, b):
        return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]

    d1 = cross(s, p0 - q0)
    d2 = cross(s, p1 - q0)
    d3 = cross(r, q0 - p0)
    d4 = cross(r, q1 - p0)

    def signz(d):
        return np.where(np.abs(d) < eps, 0.0, np.sign(d))

    z1, z2, z3, z4 = signz(d1), signz(d2), signz(d3), signz(d4)
    proper = (z1 * z2 < 0) & (z3 * z4 < 0)

    def on_seg(a, b, p):
        lo = np.minimum(a, b) - eps
        hi = np.maximum(a, b) + eps
        return np.all((p >= lo) & (p <= hi), axis=-1)

    touch = (
        ((z1 == 0) & on_seg(q0, q1, p0))
        | ((z2 == 0) & on_seg(q0, q1, p1))
        | ((z3 == 0) & on_seg(p0, p1, q0))
        | ((z4 == 0) & on_seg(p0, p1, q1))
    )
    return proper | touch


def _endpoint_arrays(alpha_deg, cx, cy, half):
    a = np.radians(alpha_deg)
    dx = half * np.sin(a)
    dy = half * np.cos(a)
    p0 = np.stack([cx - dx, cy - dy], axis=-1)
    p1 = np.stack([cx + dx, cy + dy], axis=-1)
    return p0, p1


def angles_intersect(
    a1_deg,
    a2_deg,
    offset=(0.0, 1.0),
    spacing: float = 1.0,
    cut_length: float = np.sqrt(3.0),
    eps: float = EPS,
) -> np.ndarray:
    """Intersection test for two cuts given by absolute angles.

    Cut 1 is centred at the origin, cut 2 at `offset` (in units of spacing).
    Broadcasts over angle arrays.
    """
    a1_deg = np.asarray(a1_deg, dtype=np.float64)
    a2_deg = np.asarray(a2_deg, dtype=np.float64)
    a1_deg, a2_deg = np.broadcast_arrays(a1_deg, a2_deg)
    half = cut_length / 2.0
    zeros = np.zeros_like(a1_deg)
    p0, p1 = _endpoint_arrays(a1_deg, zeros, zeros, half)
    q0, q1 = _endpoint_arrays(
        a2_deg,
        zeros + offset[0] * spacing,
        zeros + offset[1] * spacing,
        half,
    )
    return segments_intersect_arrays(p0, p1, q0, q1, eps)


def count_intersections_many(
    spec: LatticeSpec, betas: np.ndarray, eps: float = EPS
) -> np.ndarray:
    """Intersecting-neighbor-pair counts for a batch of patterns.

    Args:
        betas: (n, rows, cols) perturbation angles in degrees.

    Returns:
        (n,) int64 array; entry k is `count_intersections` of pattern k.
    """
    betas = np.asarray(betas, dtype=np.float64)
    if betas.ndim == 2:
        betas = betas[None]
    if betas.shape[1] != spec.rows or betas.shape[2] != spec.cols:
        raise ValueError(
            f"betas shape {betas.shape[1:]} does not match lattice "
            f"{(spec.rows, spec.cols)}"
        )
    alpha = base_angle_grid(spec)[None] + betas
    half = spec.cut_length / 2.0
    s = spec.spacing

    rad = np.radians(alpha)
    dx = half * np.sin(rad)
    dy = half * np.cos(rad)

    n = betas.shape[0]
    counts = np.zeros(n, dtype=np.int64)
    for di, dj in UNIQUE_PAIR_OFFSETS:
        ndx = np.roll(dx, shift=(-di, -dj), axis=(1, 2))
        ndy = np.roll(dy, shift=(-di, -dj), axis=(1, 2))
        ox = dj * s
        oy = di * s
        p0 = np.stack([-dx, -dy], axis=-1)
        p1 = np.stack([dx, dy], axis=-1)
        q0 = np.stack([ox - ndx, oy - ndy], axis=-1)
        q1 = np.stack([ox + ndx, oy + ndy], axis=-1)
        hit = segments_intersect_arrays(p0, p1, q0, q1, eps)
        counts += hit.reshape(n, -1).sum(axis=1)
    return counts
