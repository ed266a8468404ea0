"""Compiled inner loops for the constrained replacement sampler.

Mirrors the scalar predicate in `lattice` exactly (same orientation-sign
logic, same eps semantics). Everything here works on raw float64 arrays so
numba can compile it; the public wrappers live in `sampling`.

Candidate angles are rounded to float32 before the admissibility test, so a
value that is accepted — and later serialized as float32 — is bit-for-bit
the value that was tested.
"""

from __future__ import annotations

import numba as nb
import numpy as np

_DEG = np.pi / 180.0

# cell visit draw budget before falling back to the interval scan
MAX_DRAWS = 200

# interval scan spacing (degrees) and boundary refinement factor
SCAN_STEP = 0.05
REFINE_DIV = 100.0


@nb.njit(cache=True, inline="always")
def _seg_intersect(ax0, ay0, ax1, ay1, bx0, by0, bx1, by1, eps):
    rx = ax1 - ax0
    ry = ay1 - ay0
    sx = bx1 - bx0
    sy = by1 - by0

    d1 = sx * (ay0 - by0) - sy * (ax0 - bx0)
    d2 = sx * (ay1 - by0) - sy * (ax1 - bx0)
    d3 = rx * (by0 - ay0) - ry * (bx0 - ax0)
    d4 = rx * (by1 - ay0) - ry * (bx1 - ax0)

    z1 = 0 if abs(d1) < eps else (1 if d1 > 0.0 else -1)
    z2 = 0 if abs(d2) < eps else (1 if d2 > 0.0 else -1)
    z3 = 0 if abs(d3) < eps else (1 if d3 > 0.0 else -1)
    z4 = 0 if abs(d4) < eps else (1 if d4 > 0.0 else -1)

    if z1 * z2 < 0 and z3 * z4 < 0:
        return True
    if z1 == 0:
        if (
            min(bx0, bx1) - eps <= ax0 <= max(bx0, bx1) + eps
            and min(by0, by1) - eps <= ay0 <= max(by0, by1) + eps
        ):
            return True
    if z2 == 0:
        if (
            min(bx0, bx1) - eps <= ax1 <= max(bx0, bx1) + eps
            and min(by0, by1) - eps <= ay1 <= max(by0, by1) + eps
        ):
            return True
    if z3 == 0:
        if (
            min(ax0, ax1) - eps <= bx0 <= max(ax0, ax1) + eps
            and min(ay0, ay1) - eps <= by0 <= max(ay0, ay1) + eps
        ):
            return True
    if z4 == 0:
        if (
            min(ax0, ax1) - eps <= bx1 <= max(ax0, ax1) + eps
            and min(ay0, ay1) - eps <= by1 <= max(ay0, ay1) + eps
        ):
            return True
    return False


@nb.njit(cache=True)
def _gather_neighbors(beta, base, i, j, half, spacing, nx0, ny0, nx1, ny1):
    """Endpoint coordinates of the 8 neighbor cuts, in the frame of cell (i, j)."""
    rows, cols = beta.shape
    k = 0
    for di in range(-1, 2):
        for dj in range(-1, 2):
            if di == 0 and dj == 0:
                continue
            ni = (i + di) % rows
            nj = (j + dj) % cols
            a = (base[ni, nj] + beta[ni, nj]) * _DEG
            ddx = half * np.sin(a)
            ddy = half * np.cos(a)
            cx = dj * spacing
            cy = di * spacing
            nx0[k] = cx - ddx
            ny0[k] = cy - ddy
            nx1[k] = cx + ddx
            ny1[k] = cy + ddy
            k += 1


@nb.njit(cache=True, inline="always")
def _beta_ok(cand, base_ij, half, nx0, ny0, nx1, ny1, eps):
    a = (base_ij + cand) * _DEG
    dx = half * np.sin(a)
    dy = half * np.cos(a)
    for k in range(8):
        if _seg_intersect(-dx, -dy, dx, dy, nx0[k], ny0[k], nx1[k], ny1[k], eps):
            return False
    return True


@nb.njit(cache=True)
def _refine_boundary(bad, good, base_ij, half, nx0, ny0, nx1, ny1, eps, tol):
    # bisect between an inadmissible and an admissible angle; returns the
    # admissible side of the bracket
    while abs(good - bad) > tol:
        mid = 0.5 * (good + bad)
        if _beta_ok(mid, base_ij, half, nx0, ny0, nx1, ny1, eps):
            good = mid
        else:
            bad = mid
    return good


@nb.njit(cache=True)
def _scan_intervals(
    beta_max, base_ij, half, nx0, ny0, nx1, ny1, eps, step, tol, lo_out, hi_out
):
    """Scan [-beta_max, beta_max] for admissible runs; refine run boundaries.

    Returns the number of intervals written to lo_out/hi_out.
    """
    npts = int(round(2.0 * beta_max / step)) + 1
    if npts < 2:
        npts = 2
    h = 2.0 * beta_max / (npts - 1)
    m = 0
    in_run = False
    run_lo = 0.0
    prev = -beta_max
    for k in range(npts):
        b = -beta_max + k * h
        ok = _beta_ok(b, base_ij, half, nx0, ny0, nx1, ny1, eps)
        if ok and not in_run:
            in_run = True
            if k == 0:
                run_lo = b
            else:
                run_lo = _refine_boundary(
                    prev, b, base_ij, half, nx0, ny0, nx1, ny1, eps, tol
                )
        elif not ok and in_run:
            in_run = False
            if m < lo_out.shape[0]:
                lo_out[m] = run_lo
                hi_out[m] = _refine_boundary(
                    b, prev, base_ij, half, nx0, ny0, nx1, ny1, eps, tol
                )
                m += 1
        prev = b
    if in_run and m < lo_out.shape[0]:
        lo_out[m] = run_lo
        hi_out[m] = beta_max
        m += 1
    return m


@nb.njit(cache=True)
def _replace_cell(
    rng, beta, base, i, j, beta_max, half, spacing, eps, max_draws, step, tol
):
    """Draw a replacement angle for one cell, uniform on its admissible set.

    Rejection sampling against the 8 fixed neighbors; after `max_draws`
    misses, falls back to a measure-weighted draw over scanned admissible
    intervals. Returns the new float32-exact angle, or the current angle if
    no admissible replacement was found.
    """
    nx0 = np.empty(8)
    ny0 = np.empty(8)
    nx1 = np.empty(8)
    ny1 = np.empty(8)
    _gather_neighbors(beta, base, i, j, half, spacing, nx0, ny0, nx1, ny1)
    base_ij = base[i, j]

    for _ in range(max_draws):
        u = rng.uniform(-beta_max, beta_max)
        v = np.float64(np.float32(u))
        if abs(v) > beta_max:
            continue
        if _beta_ok(v, base_ij, half, nx0, ny0, nx1, ny1, eps):
            return v

    lo = np.empty(64)
    hi = np.empty(64)
    m = _scan_intervals(
        beta_max, base_ij, half, nx0, ny0, nx1, ny1, eps, step, tol, lo, hi
    )
    if m == 0:
        return beta[i, j]
    total = 0.0
    for t in range(m):
        total += hi[t] - lo[t]
    if total <= 0.0:
        return beta[i, j]
    for _ in range(64):
        u = rng.uniform(0.0, total)
        acc = 0.0
        v = lo[0]
        for t in range(m):
            w = hi[t] - lo[t]
            if u <= acc + w or t == m - 1:
                v = lo[t] + (u - acc)
                if v < lo[t]:
                    v = lo[t]
                if v > hi[t]:
                    v = hi[t]
                break
            acc += w
        vf = np.float64(np.float32(v))
        if abs(vf) > beta_max:
            continue
        if _beta_ok(vf, base_ij, half, nx0, ny0, nx1, ny1, eps):
            return vf
    return beta[i, j]


@nb.njit(cache=True)
def run_chain(
    rng, beta, base, beta_max, half, spacing, eps, sweeps, max_draws, step, tol
):
    """Run raster-order replacement sweeps in place over `beta`."""
    rows, cols = beta.shape
    for _ in range(sweeps):
        for i in range(rows):
            for j in range(cols):
                beta[i, j] = _replace_cell(
                    rng, beta, base, i, j, beta_max, half, spacing, eps,
                    max_draws, step, tol,
                )
    return beta


@nb.njit(cache=True, inline="always")
def _angles_hit(a1, a2, ox, oy, half, eps):
    """Intersection test for cuts at absolute angles a1 (origin) and a2 (ox, oy)."""
    t1 = a1 * _DEG
    t2 = a2 * _DEG
    dx1 = half * np.sin(t1)
    dy1 = half * np.cos(t1)
    dx2 = half * np.sin(t2)
    dy2 = half * np.cos(t2)
    return _seg_intersect(
        -dx1, -dy1, dx1, dy1, ox - dx2, oy - dy2, ox + dx2, oy + dy2, eps
    )


@nb.njit(cache=True)
def fill_pair_map(c1, c2, ox, oy, half, eps, out):
    """Occupancy matrix: out[i, j] = cuts at angles (c1[i], c2[j]) intersect."""
    for i in range(c1.size):
        a1 = c1[i]
        for j in range(c2.size):
            out[i, j] = _angles_hit(a1, c2[j], ox, oy, half, eps)


@nb.njit(cache=True)
def chord_hits(a1, a2, b1, b2, ox, oy, half, eps, step):
    """Whether the straight chord from (a1, a2) to (b1, b2) in angle space
    passes through an intersecting configuration, sampled at <= step degrees."""
    length = np.hypot(b1 - a1, b2 - a2)
    n = int(np.ceil(length / step))
    if n < 1:
        n = 1
    for k in range(n + 1):
        t = k / n
        if _angles_hit(a1 + t * (b1 - a1), a2 + t * (b2 - a2), ox, oy, half, eps):
            return True
    return False


@nb.njit(cache=True)
def count_chord_hits(starts1, starts2, ends1, ends2, ox, oy, half, eps, step):
    hits = 0
    for k in range(starts1.size):
        if chord_hits(
            starts1[k], starts2[k], ends1[k], ends2[k], ox, oy, half, eps, step
        ):
            hits += 1
    return hits


@nb.njit(cache=True)
def count_many(betas, base, half, spacing, eps, out):
    """Per-pattern intersection counts for a (n, rows, cols) batch."""
    for k in range(betas.shape[0]):
        out[k] = count_grid_intersections(betas[k], base, half, spacing, eps)


@nb.njit(cache=True)
def count_grid_intersections(beta, base, half, spacing, eps):
    """Intersecting neighbor-pair count for one pattern (torus, pairs once)."""
    rows, cols = beta.shape
    total = 0
    for i in range(rows):
        for j in range(cols):
            a = (base[i, j] + beta[i, j]) * _DEG
            dx = half * np.sin(a)
            dy = half * np.cos(a)
            for t in range(4):
                if t == 0:
                    di, dj = 0, 1
                elif t == 1:
                    di, dj = 1, 0
                elif t == 2:
                    di, dj = 1, 1
                else:
                    di, dj = 1, -1
                ni = (i + di) % rows
                nj = (j + dj) % cols
                an = (base[ni, nj] + beta[ni, nj]) * _DEG
                ndx = half * np.sin(an)
                ndy = half * np.cos(an)
                cx = dj * spacing
                cy = di * spacing
                if _seg_intersect(
                    -dx, -dy, dx, dy,
                    cx - ndx, cy - ndy, cx + ndx, cy + ndy, eps,
                ):
                    total += 1
    return total
