"""Network architectures.

Patterns live on a torus, so every convolution uses wrap-around (circular)
padding with stride 1: a cyclic shift of the input cycles feature maps the
same way instead of hitting an artificial border. Heads that must produce
one number per sample use global average pooling, which makes them exactly
shift-invariant.

The VAE decoder and both adversarial generators are the same module, so
their capacity profiles match by construction.
"""

from __future__ import annotations

import math

import torch
from torch import nn

GRID = 6  # rows == cols for all current datasets


def _cconv(cin: int, cout: int) -> nn.Conv2d:
    return nn.Conv2d(cin, cout, kernel_size=3, padding=1, padding_mode="circular")


class ConvGenerator(nn.Module):
    """latent vector -> pattern in [-1, 1], shape (B, 1, GRID, GRID)."""

    def __init__(self, latent_dim: int = 16, width: int = 64):
        super().__init__()
        self.latent_dim = latent_dim
        self.proj = nn.Linear(latent_dim, width * GRID * GRID)
        self.body = nn.Sequential(
            nn.BatchNorm2d(width),
            nn.ReLU(),
            _cconv(width, width),
            nn.BatchNorm2d(width),
            nn.ReLU(),
            _cconv(width, width // 2),
            nn.BatchNorm2d(width // 2),
            nn.ReLU(),
            _cconv(width // 2, 1),
            nn.Tanh(),
        )
        self.width = width

    def forward(self, z: torch.Tensor) -> torch.Tensor:
        h = self.proj(z).view(-1, self.width, GRID, GRID)
        return self.body(h)


class ConvDiscriminator(nn.Module):
    """pattern -> one score per sample.

    With `sigmoid=True` the score is a probability (adversarial
    discriminator); with `sigmoid=False` it is an unbounded real
    (critic). The trunk is fully convolutional with a pooled head, so
    cyclically shifting the input does not change the score.
    """

    def __init__(self, width: int = 64, sigmoid: bool = True):
        super().__init__()
        self.trunk = nn.Sequential(
            _cconv(1, width // 2),
            nn.LeakyReLU(0.2),
            _cconv(width // 2, width),
            nn.BatchNorm2d(width),
            nn.LeakyReLU(0.2),
            _cconv(width, width),
            nn.BatchNorm2d(width),
            nn.LeakyReLU(0.2),
        )
        self.head = nn.Linear(width, 1)
        self.sigmoid = nn.Sigmoid() if sigmoid else None

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        h = self.trunk(x).mean(dim=(2, 3))  # global average pool
        s = self.head(h).squeeze(1)
        return self.sigmoid(s) if self.sigmoid is not None else s


class VaeEncoder(nn.Module):
    """pattern -> (mu, logvar) of the approximate posterior."""

    def __init__(self, latent_dim: int = 16, width: int = 64):
        super().__init__()
        self.trunk = nn.Sequential(
            _cconv(1, width // 2),
            nn.BatchNorm2d(width // 2),
            nn.ReLU(),
            _cconv(width // 2, width),
            nn.BatchNorm2d(width),
            nn.ReLU(),
            _cconv(width, width),
            nn.BatchNorm2d(width),
            nn.ReLU(),
        )
        flat = width * GRID * GRID
        self.fc_mu = nn.Linear(flat, latent_dim)
        self.fc_logvar = nn.Linear(flat, latent_dim)

    def forward(self, x: torch.Tensor):
        h = self.trunk(x).flatten(1)
        return self.fc_mu(h), self.fc_logvar(h)


def _time_embedding(t: torch.Tensor, dim: int) -> torch.Tensor:
    """Sinusoidal embedding of integer diffusion steps, shape (B, dim)."""
    half = dim // 2
    freqs = torch.exp(
        -math.log(10_000.0) * torch.arange(half, dtype=torch.float32, device=t.device)
        / half
    )
    args = t.float()[:, None] * freqs[None, :]
    return torch.cat([torch.sin(args), torch.cos(args)], dim=1)


class _TimedBlock(nn.Module):
    """Two circular convolutions with the step embedding injected between."""

    def __init__(self, cin: int, cout: int, temb_dim: int):
        super().__init__()
        self.conv1 = _cconv(cin, cout)
        self.norm1 = nn.GroupNorm(min(8, cout), cout)
        self.tproj = nn.Linear(temb_dim, cout)
        self.conv2 = _cconv(cout, cout)
        self.norm2 = nn.GroupNorm(min(8, cout), cout)
        self.act = nn.SiLU()

    def forward(self, x: torch.Tensor, temb: torch.Tensor) -> torch.Tensor:
        h = self.act(self.norm1(self.conv1(x)))
        h = h + self.tproj(temb)[:, :, None, None]
        return self.act(self.norm2(self.conv2(h)))


class NoiseUNet(nn.Module):
    """Noise predictor for the diffusion model: (x_t, t) -> estimated noise.

    U-shaped in channels with skip connections. The grid is only 6x6, so
    there is no spatial down/upsampling; this keeps every path exactly
    shift-equivariant under the circular padding.
    """

    def __init__(self, width: int = 48, temb_dim: int = 64):
        super().__init__()
        self.temb_dim = temb_dim
        self.temb = nn.Sequential(
            nn.Linear(temb_dim, temb_dim),
            nn.SiLU(),
            nn.Linear(temb_dim, temb_dim),
        )
        w = width
        self.enc1 = _TimedBlock(1, w // 2, temb_dim)
        self.enc2 = _TimedBlock(w // 2, w, temb_dim)
        self.mid = _TimedBlock(w, w, temb_dim)
        self.dec2 = _TimedBlock(w + w, w // 2, temb_dim)
        self.dec1 = _TimedBlock(w // 2 + w // 2, w // 2, temb_dim)
        self.out = _cconv(w // 2, 1)

    def forward(self, x: torch.Tensor, t: torch.Tensor) -> torch.Tensor:
        temb = self.temb(_time_embedding(t, self.temb_dim))
        h1 = self.enc1(x, temb)
        h2 = self.enc2(h1, temb)
        m = self.mid(h2, temb)
        d2 = self.dec2(torch.cat([m, h2], dim=1), temb)
        d1 = self.dec1(torch.cat([d2, h1], dim=1), temb)
        return self.out(d1)


def parameter_count(module: nn.Module) -> int:
    return sum(p.numel() for p in module.parameters())
