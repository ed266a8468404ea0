"""Shared training scaffolding: seeding, batching, logging, snapshots."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass

import numpy as np
import torch

from .config import TrainerConfig
from .encoding import ANGLE_SCALE, decode_angles, encode_angles
from .kgs import read_kgs, write_kgs


@dataclass(frozen=True)
class EpochLog:
    """One epoch of training: loss terms plus the snapshot written at this
    epoch, if any."""

    epoch: int
    losses: dict
    snapshot: str | None = None


def make_generator(seed: int) -> torch.Generator:
    g = torch.Generator(device="cpu")
    g.manual_seed(seed)
    return g


def load_training_tensor(path) -> torch.Tensor:
    """Dataset file -> (count, 1, rows, cols) float tensor in [-1, 1]."""
    ds = read_kgs(path)
    return torch.from_numpy(encode_angles(ds.betas))


def iter_batches(data: torch.Tensor, batch_size: int, g: torch.Generator):
    """Shuffled minibatches; drops no samples."""
    order = torch.randperm(data.shape[0], generator=g)
    for k in range(0, data.shape[0], batch_size):
        yield data[order[k:k + batch_size]]


def export_snapshot(sample_fn, n: int, path, seed: int) -> None:
    """Draw n patterns from a trained sampler and write them as a dataset.

    `sample_fn(n, generator) -> (n, 1, rows, cols)` network-space tensor.
    Deterministic in (model state, seed). Decoded angles always lie in the
    full valid range, so the file declares beta_max = 90.
    """
    with torch.no_grad():
        x = sample_fn(n, make_generator(seed))
    angles = decode_angles(x.cpu().numpy())
    if not np.all(np.isfinite(angles)):
        raise ValueError("sampler produced non-finite angles")
    write_kgs(path, angles, beta_max=ANGLE_SCALE, source="external", seed=seed)


class RunWriter:
    """Owns one run directory: config.json, epochs.jsonl, snapshots/."""

    def __init__(self, config: TrainerConfig):
        self.config = config
        self.dir = config.out_dir
        os.makedirs(os.path.join(self.dir, "snapshots"), exist_ok=True)
        config.to_json(os.path.join(self.dir, "config.json"))
        self._log_path = os.path.join(self.dir, "epochs.jsonl")
        # truncate any previous run in the same directory
        open(self._log_path, "w").close()
        self.logs: list[EpochLog] = []

    def snapshot_path(self, epoch: int) -> str:
        return os.path.join(self.dir, "snapshots", f"epoch_{epoch:04d}.kgs")

    def wants_snapshot(self, epoch: int) -> bool:
        return epoch % self.config.snapshot_every == 0 or epoch == self.config.epochs

    def log(self, epoch: int, losses: dict, snapshot: str | None) -> EpochLog:
        entry = EpochLog(epoch=epoch, losses=losses, snapshot=snapshot)
        with open(self._log_path, "a", encoding="ascii") as fh:
            fh.write(json.dumps(asdict(entry), sort_keys=True) + "\n")
        self.logs.append(entry)
        return entry

    def finish(self, sample_fn, seed: int) -> str:
        """Write the end-of-training snapshot as final.kgs and return its path."""
        path = os.path.join(self.dir, "final.kgs")
        export_snapshot(sample_fn, self.config.snapshot_count, path, seed)
        return path


def validate_snapshot(path) -> None:
    """Re-read an exported snapshot and re-check the format invariants."""
    ds = read_kgs(path)
    if not np.all(np.isfinite(ds.betas)):
        raise ValueError(f"{path}: non-finite angles")
    if float(np.abs(ds.betas).max(initial=0.0)) > ds.beta_max + 1e-4:
        raise ValueError(f"{path}: angle out of declared range")
