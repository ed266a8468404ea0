"""Minimal reader/writer for the KGS1 dataset file format.

This package talks to the pattern library only through its external
interfaces, so it carries its own small codec for the shared format: one
ASCII header line of ``key=value`` fields, then a raw little-endian
float32 payload of perturbation angles in degrees, row-major, patterns
concatenated:

    KGS1 rows=6 cols=6 beta_max=90.0 count=1000 dtype=f32le source=external seed=7 sweeps=0\n
    <rows*cols*count float32>

Exported snapshots use ``source=external`` and declare the full angle
range, since a generative model may emit any angle the encoding allows.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

_KEYS = ("rows", "cols", "beta_max", "count", "dtype", "source", "seed", "sweeps")


@dataclass(frozen=True)
class Dataset:
    """Angles plus the header fields that describe them."""

    betas: np.ndarray  # (count, rows, cols) float32
    beta_max: float
    source: str
    seed: int
    sweeps: int = 0

    @property
    def count(self) -> int:
        return self.betas.shape[0]


def read_kgs(path) -> Dataset:
    with open(path, "rb") as fh:
        line = fh.readline(4096)
        if not line.endswith(b"\n"):
            raise ValueError("dataset header missing or unterminated")
        payload = fh.read()
    parts = line[:-1].decode("ascii").split(" ")
    if parts[0] != "KGS1":
        raise ValueError(f"bad magic {parts[0]!r}")
    fields = dict(tok.split("=", 1) for tok in parts[1:])
    missing = [k for k in _KEYS if k not in fields]
    if missing:
        raise ValueError(f"missing header fields: {missing}")
    if fields["dtype"] != "f32le":
        raise ValueError(f"unsupported dtype {fields['dtype']!r}")
    rows, cols = int(fields["rows"]), int(fields["cols"])
    count = int(fields["count"])
    if len(payload) != rows * cols * count * 4:
        raise ValueError("payload size does not match header")
    betas = np.frombuffer(payload, dtype="<f4").reshape(count, rows, cols)
    return Dataset(
        betas=betas,
        beta_max=float(fields["beta_max"]),
        source=fields["source"],
        seed=int(fields["seed"]),
        sweeps=int(fields["sweeps"]),
    )


def write_kgs(path, betas: np.ndarray, beta_max: float, source: str,
              seed: int, sweeps: int = 0) -> None:
    betas = np.asarray(betas, dtype="<f4")
    if betas.ndim != 3:
        raise ValueError(f"betas must be (count, rows, cols), got {betas.shape}")
    if not np.all(np.isfinite(betas)):
        raise ValueError("refusing to write non-finite angles")
    if float(np.abs(betas).max(initial=0.0)) > beta_max + 1e-4:
        raise ValueError("angle magnitude exceeds beta_max")
    count, rows, cols = betas.shape
    header = (
        f"KGS1 rows={rows} cols={cols} beta_max={beta_max!r} count={count} "
        f"dtype=f32le source={source} seed={seed} sweeps={sweeps}\n"
    )
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(betas.tobytes())
    os.replace(tmp, path)
