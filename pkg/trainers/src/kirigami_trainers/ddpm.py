"""Denoising diffusion trainer.

Forward process: x_t = sqrt(abar_t) x_0 + sqrt(1 - abar_t) eps with a
linear variance schedule beta_1..beta_T. The network learns to predict
the added noise from (x_t, t) under mean squared error. Sampling walks
the chain backwards from pure noise, using sigma_t^2 = beta_t for the
reverse-step variance.
"""

from __future__ import annotations

import torch

from .common import (
    EpochLog,
    RunWriter,
    export_snapshot,
    iter_batches,
    load_training_tensor,
    make_generator,
)
from .config import TrainerConfig
from .nets import NoiseUNet


class DiffusionSchedule:
    """Precomputed per-step constants for T diffusion steps."""

    def __init__(self, T: int, beta_start: float, beta_end: float):
        if T < 1:
            raise ValueError("T must be >= 1")
        self.T = T
        self.betas = torch.linspace(beta_start, beta_end, T)
        self.alphas = 1.0 - self.betas
        self.alpha_bars = torch.cumprod(self.alphas, dim=0)

    def add_noise(self, x0: torch.Tensor, t: torch.Tensor, eps: torch.Tensor):
        """Jump straight to step t of the forward process (0-based)."""
        ab = self.alpha_bars[t][:, None, None, None]
        return torch.sqrt(ab) * x0 + torch.sqrt(1.0 - ab) * eps


def sample_ddpm(net: NoiseUNet, schedule: DiffusionSchedule, n: int,
                shape: tuple, gen: torch.Generator) -> torch.Tensor:
    """Ancestral sampling from pure noise down to x_0."""
    x = torch.randn((n, *shape), generator=gen)
    for t in reversed(range(schedule.T)):
        tt = torch.full((n,), t, dtype=torch.long)
        eps_hat = net(x, tt)
        alpha = schedule.alphas[t]
        ab = schedule.alpha_bars[t]
        mean = (x - schedule.betas[t] / torch.sqrt(1.0 - ab) * eps_hat) \
            / torch.sqrt(alpha)
        if t > 0:
            noise = torch.randn(x.shape, generator=gen)
            x = mean + torch.sqrt(schedule.betas[t]) * noise
        else:
            x = mean
    return x


def train_ddpm(config: TrainerConfig) -> list[EpochLog]:
    if config.model != "ddpm":
        raise ValueError(f"config.model is {config.model!r}, expected 'ddpm'")
    torch.manual_seed(config.seed)
    g = make_generator(config.seed + 1)

    data = load_training_tensor(config.dataset)
    shape = tuple(data.shape[1:])
    net = NoiseUNet()
    schedule = DiffusionSchedule(config.T, config.beta_start, config.beta_end)
    opt = torch.optim.Adam(net.parameters(), lr=config.lr_generator)

    def sample_fn(n: int, gen: torch.Generator) -> torch.Tensor:
        net.eval()
        try:
            return sample_ddpm(net, schedule, n, shape, gen)
        finally:
            net.train()

    run = RunWriter(config)
    for epoch in range(1, config.epochs + 1):
        loss_sum = 0.0
        n_seen = 0
        for xb in iter_batches(data, config.batch_size, g):
            b = xb.shape[0]
            t = torch.randint(0, config.T, (b,), generator=g)
            eps = torch.randn(xb.shape, generator=g)
            x_t = schedule.add_noise(xb, t, eps)
            loss = torch.mean((net(x_t, t) - eps) ** 2)
            opt.zero_grad()
            loss.backward()
            opt.step()
            loss_sum += loss.detach().item() * b
            n_seen += b
        losses = {"noise_mse": loss_sum / n_seen}
        snap = None
        if run.wants_snapshot(epoch):
            snap = run.snapshot_path(epoch)
            export_snapshot(sample_fn, config.snapshot_count, snap,
                            seed=config.seed + epoch)
        run.log(epoch, losses, snap)
    run.finish(sample_fn, seed=config.seed)
    return run.logs
