"""Generative-model trainers for bounded-angle cut-pattern datasets.

Four reference models (VAE, GAN, WGAN, DDPM) trained on KGS1 dataset
files. The only couplings to the pattern library are its external
interfaces: datasets are read and snapshots written in the shared file
format, and snapshot quality is scored by invoking the library's
command-line evaluator.
"""

from .common import EpochLog, export_snapshot, validate_snapshot
from .config import MODELS, TrainerConfig
from .ddpm import DiffusionSchedule, sample_ddpm, train_ddpm
from .encoding import ANGLE_SCALE, decode_angles, encode_angles, wrap_degrees
from .gan import train_gan
from .kgs import Dataset, read_kgs, write_kgs
from .nets import (
    ConvDiscriminator,
    ConvGenerator,
    NoiseUNet,
    VaeEncoder,
    parameter_count,
)
from .vae import gaussian_kl, train_vae
from .wgan import train_wgan

__version__ = "0.1.0"

TRAINERS = {
    "vae": train_vae,
    "gan": train_gan,
    "wgan": train_wgan,
    "ddpm": train_ddpm,
}

__all__ = [
    "ANGLE_SCALE",
    "ConvDiscriminator",
    "ConvGenerator",
    "Dataset",
    "DiffusionSchedule",
    "EpochLog",
    "MODELS",
    "NoiseUNet",
    "TRAINERS",
    "TrainerConfig",
    "VaeEncoder",
    "decode_angles",
    "encode_angles",
    "export_snapshot",
    "gaussian_kl",
    "parameter_count",
    "read_kgs",
    "sample_ddpm",
    "train_ddpm",
    "train_gan",
    "train_vae",
    "train_wgan",
    "validate_snapshot",
    "wrap_degrees",
    "write_kgs",
]
