"""Run configuration: one JSON file fully determines a training run."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

MODELS = ("vae", "gan", "wgan", "ddpm")

# resolved when a config leaves a field as None
_LR_GENERATOR = {"vae": 5e-4, "gan": 1e-5, "wgan": 1e-5, "ddpm": 5e-4}
_LR_DISCRIMINATOR = {"vae": 5e-4, "gan": 5e-4, "wgan": 5e-4, "ddpm": 5e-4}


@dataclass
class TrainerConfig:
    """Everything a training run needs. Unset learning rates resolve to
    per-model defaults; all other defaults are shared."""

    model: str
    dataset: str
    seed: int
    epochs: int = 300
    batch_size: int = 32
    latent_dim: int = 16
    lr_generator: float | None = None
    lr_discriminator: float | None = None
    kappa: float = 100.0          # vae reconstruction weight
    critic_steps: int = 5         # wgan critic updates per generator step
    clip: float = 0.01            # wgan weight clip
    T: int = 500                  # ddpm diffusion steps
    beta_start: float = 1e-4      # ddpm linear schedule endpoints
    beta_end: float = 0.02
    snapshot_every: int = 50      # epochs between exported snapshots
    snapshot_count: int = 1000    # patterns per snapshot
    out_dir: str = "runs/run"

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"model must be one of {MODELS}, got {self.model!r}")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.model == "ddpm" and self.T < 10:
            raise ValueError("ddpm needs T >= 10")
        if not (0 < self.beta_start <= self.beta_end < 1):
            raise ValueError("need 0 < beta_start <= beta_end < 1")
        if self.lr_generator is None:
            self.lr_generator = _LR_GENERATOR[self.model]
        if self.lr_discriminator is None:
            self.lr_discriminator = _LR_DISCRIMINATOR[self.model]
        if self.lr_generator <= 0 or self.lr_discriminator <= 0:
            raise ValueError("learning rates must be positive")
        if self.snapshot_every < 1:
            raise ValueError("snapshot_every must be >= 1")

    def to_json(self, path) -> None:
        with open(path, "w", encoding="ascii") as fh:
            json.dump(asdict(self), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def from_json(cls, path) -> "TrainerConfig":
        with open(path, encoding="ascii") as fh:
            raw = json.load(fh)
        unknown = set(raw) - {f for f in cls.__dataclass_fields__}
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        return cls(**raw)
