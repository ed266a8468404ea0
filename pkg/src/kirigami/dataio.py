"""Dataset files and text export.

The native dataset format (magic ``KGS1``) is one ASCII header line of
``key=value`` fields followed by a raw little-endian float32 payload, cell
angles in row-major order, patterns concatenated:

    KGS1 rows=6 cols=6 beta_max=20.0 count=3 dtype=f32le source=sweep seed=7 sweeps=200\\n
    <rows*cols*count little-endian float32>

Sampler output is float32-exact by construction, so write -> read -> write
reproduces the file byte for byte. `source` is an open lowercase tag naming
whatever produced the file: this library writes "sweep", "uniform" or
"marginal", and other tools use their own tags (generative-model exports
conventionally say "external"). The three failure modes a reader can hit
are distinct errors: `HeaderError` (bad magic or malformed header),
`PayloadError` (size mismatch), `ValueRangeError` (non-finite angles or
|angle| beyond the header bound + 1e-4 slack).
"""

from __future__ import annotations

import json
import os
import re

import numpy as np

from .analysis import SweepPoint, TwoCutMap, PathResult
from .evaluation import EvalReport, Histogram1D, PairHistogram
from .sampling import SampleSet

__all__ = [
    "MAGIC",
    "DatasetFormatError",
    "HeaderError",
    "PayloadError",
    "ValueRangeError",
    "write_dataset",
    "read_dataset",
    "write_pgm",
    "write_map_csv",
    "write_histogram_csv",
    "write_pair_histogram_csv",
    "write_curve_csv",
    "write_path_csv",
    "write_report_json",
]

MAGIC = "KGS1"

_HEADER_KEYS = ("rows", "cols", "beta_max", "count", "dtype", "source", "seed", "sweeps")
_SOURCE_RE = re.compile(r"[a-z][a-z0-9_-]{0,31}\Z")


class DatasetFormatError(ValueError):
    """Base class for dataset file format problems."""


class HeaderError(DatasetFormatError):
    """Missing magic, unknown fields, or a malformed header line."""


class PayloadError(DatasetFormatError):
    """Payload size does not match the header (truncated or trailing data)."""


class ValueRangeError(DatasetFormatError):
    """Angle values outside the declared bound, or non-finite."""


def write_dataset(sample_set: SampleSet, path) -> None:
    """Serialize a sample set; see the module docstring for the layout."""
    header = (
        f"{MAGIC} rows={sample_set.rows} cols={sample_set.cols} "
        f"beta_max={sample_set.beta_max!r} count={sample_set.count} "
        f"dtype=f32le source={sample_set.source} seed={sample_set.seed} "
        f"sweeps={sample_set.sweeps}\n"
    )
    payload = sample_set.betas.astype("<f4").tobytes()
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(payload)
    os.replace(tmp, path)


def read_dataset(path) -> SampleSet:
    """Parse a dataset file, validating header, size, and value range."""
    with open(path, "rb") as fh:
        raw = fh.readline(4096)
        if not raw.endswith(b"\n"):
            raise HeaderError("header line missing or unterminated")
        try:
            line = raw[:-1].decode("ascii")
        except UnicodeDecodeError as exc:
            raise HeaderError(f"header is not ASCII: {exc}") from None
        payload = fh.read()

    parts = line.split(" ")
    if parts[0] != MAGIC:
        raise HeaderError(f"bad magic {parts[0]!r}, expected {MAGIC!r}")
    fields = {}
    for tok in parts[1:]:
        key, sep, value = tok.partition("=")
        if not sep or not value:
            raise HeaderError(f"malformed header field {tok!r}")
        if key in fields:
            raise HeaderError(f"duplicate header field {key!r}")
        fields[key] = value
    missing = [k for k in _HEADER_KEYS if k not in fields]
    if missing:
        raise HeaderError(f"missing header fields: {missing}")
    unknown = [k for k in fields if k not in _HEADER_KEYS]
    if unknown:
        raise HeaderError(f"unknown header fields: {unknown}")

    try:
        rows = int(fields["rows"])
        cols = int(fields["cols"])
        count = int(fields["count"])
        seed = int(fields["seed"])
        sweeps = int(fields["sweeps"])
        beta_max = float(fields["beta_max"])
    except ValueError as exc:
        raise HeaderError(f"non-numeric header field: {exc}") from None
    if fields["dtype"] != "f32le":
        raise HeaderError(f"unsupported dtype {fields['dtype']!r}")
    if not _SOURCE_RE.match(fields["source"]):
        raise HeaderError(f"malformed source tag {fields['source']!r}")
    if rows < 1 or cols < 1 or count < 1:
        raise HeaderError("rows, cols and count must be positive")
    if not (0 < beta_max <= 90):
        raise HeaderError(f"beta_max out of range: {beta_max}")

    expected = rows * cols * count * 4
    if len(payload) != expected:
        kind = "truncated" if len(payload) < expected else "trailing data in"
        raise PayloadError(
            f"{kind} payload: expected {expected} bytes, found {len(payload)}"
        )
    betas = (
        np.frombuffer(payload, dtype="<f4")
        .astype(np.float64)
        .reshape(count, rows, cols)
    )
    if not np.all(np.isfinite(betas)):
        raise ValueRangeError("payload contains non-finite angles")
    worst = float(np.abs(betas).max())
    if worst > beta_max + 1e-4:
        raise ValueRangeError(
            f"angle magnitude {worst} exceeds declared bound {beta_max}"
        )
    return SampleSet(betas, beta_max, fields["source"], seed, sweeps=sweeps)


def write_pgm(tcmap: TwoCutMap, path) -> None:
    """Binary PGM of an occupancy map: intersecting cells black (0),
    admissible cells white (255). Row i is the first-angle axis."""
    occ = tcmap.occupancy
    img = np.where(occ, 0, 255).astype(np.uint8)
    with open(path, "wb") as fh:
        fh.write(f"P5\n{occ.shape[1]} {occ.shape[0]}\n255\n".encode("ascii"))
        fh.write(img.tobytes())


def write_map_csv(tcmap: TwoCutMap, path) -> None:
    """Occupancy map as CSV: header row of second-axis centres, then one
    row per first-axis centre with 0 (admissible) / 1 (intersecting)."""
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("angle1\\angle2," + ",".join(f"{c:.6f}" for c in tcmap.axis2) + "\n")
        for i, c1 in enumerate(tcmap.axis1):
            row = ",".join(str(int(v)) for v in tcmap.occupancy[i])
            fh.write(f"{c1:.6f},{row}\n")


def write_histogram_csv(hist: Histogram1D, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("bin_lo,bin_hi,count\n")
        for k in range(hist.counts.size):
            fh.write(
                f"{hist.bin_edges[k]:.6f},{hist.bin_edges[k + 1]:.6f},"
                f"{hist.counts[k]}\n"
            )


def write_pair_histogram_csv(hist: PairHistogram, path) -> None:
    """Pair histogram as CSV: header row of column-bin centres, then one
    row per row-bin with lo, hi and the counts."""
    centres = 0.5 * (hist.bin_edges[:-1] + hist.bin_edges[1:])
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("bin_lo,bin_hi," + ",".join(f"{c:.6f}" for c in centres) + "\n")
        for k in range(hist.counts.shape[0]):
            row = ",".join(str(int(v)) for v in hist.counts[k])
            fh.write(f"{hist.bin_edges[k]:.6f},{hist.bin_edges[k + 1]:.6f},{row}\n")


def write_curve_csv(points: list[SweepPoint], path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(
            "beta_max,n,mean_intersections,mean_se,"
            "admissible_count,admissible_rate,rate_low,rate_high\n"
        )
        for p in points:
            fh.write(
                f"{p.beta_max},{p.n},{p.mean_intersections},{p.mean_se},"
                f"{p.admissible_count},{p.admissible_rate},{p.rate_low},"
                f"{p.rate_high}\n"
            )


def write_path_csv(result: PathResult, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("angle1,angle2\n")
        for v in result.vertices:
            fh.write(f"{v[0]},{v[1]}\n")


def write_report_json(report: EvalReport, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
