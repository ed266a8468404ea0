"""Angle <-> network tensor encoding.

Networks see patterns as (1, rows, cols) float tensors with every cell in
[-1, 1]: the perturbation angle divided by 90. Decoding clamps back into
[-1, 1] (diffusion outputs can overshoot), scales to degrees, and wraps to
the canonical (-90, 90] range. Periodicity of the pattern itself is the
networks' business (wrap-around padding), not the encoding's.
"""

from __future__ import annotations

import math

import numpy as np

ANGLE_SCALE = 90.0


def encode_angles(betas: np.ndarray) -> np.ndarray:
    """Degrees (count, rows, cols) -> network space (count, 1, rows, cols)."""
    betas = np.asarray(betas, dtype=np.float32)
    if betas.ndim != 3:
        raise ValueError(f"expected (count, rows, cols), got {betas.shape}")
    return (betas / ANGLE_SCALE)[:, None, :, :]


def _wrap(a: np.ndarray) -> np.ndarray:
    # canonical half-open angle range (-90, 90]
    r = np.remainder(a, 2 * ANGLE_SCALE)
    r[r > ANGLE_SCALE] -= 2 * ANGLE_SCALE
    return r


def decode_angles(x: np.ndarray) -> np.ndarray:
    """Network space (count, 1, rows, cols) -> degrees (count, rows, cols)."""
    x = np.asarray(x, dtype=np.float32)
    if x.ndim != 4 or x.shape[1] != 1:
        raise ValueError(f"expected (count, 1, rows, cols), got {x.shape}")
    a = np.clip(x[:, 0], -1.0, 1.0) * ANGLE_SCALE
    return np.ascontiguousarray(_wrap(a.astype(np.float64)).astype(np.float32))


def wrap_degrees(a: float) -> float:
    """Scalar angle wrapped to (-90, 90]."""
    r = math.remainder(a, 2 * ANGLE_SCALE)
    if r <= -ANGLE_SCALE:
        r += 2 * ANGLE_SCALE
    return r
