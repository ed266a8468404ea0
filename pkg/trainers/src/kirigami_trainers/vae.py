"""Variational autoencoder trainer.

Convolutional encoder to a diagonal Gaussian posterior, shared-profile
convolutional decoder, loss = KL(q(z|x) || N(0,I)) + kappa * squared
reconstruction error (sums per sample, mean over the batch). Snapshots
decode latent draws from the prior.
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
from .nets import ConvGenerator, VaeEncoder


def gaussian_kl(mu: torch.Tensor, logvar: torch.Tensor) -> torch.Tensor:
    """KL(N(mu, exp(logvar)) || N(0, 1)) summed over latent dims, per sample."""
    return -0.5 * torch.sum(1.0 + logvar - mu.pow(2) - logvar.exp(), dim=1)


def train_vae(config: TrainerConfig) -> list[EpochLog]:
    if config.model != "vae":
        raise ValueError(f"config.model is {config.model!r}, expected 'vae'")
    torch.manual_seed(config.seed)  # deterministic layer init
    g = make_generator(config.seed + 1)

    data = load_training_tensor(config.dataset)
    encoder = VaeEncoder(latent_dim=config.latent_dim)
    decoder = ConvGenerator(latent_dim=config.latent_dim)
    opt = torch.optim.Adam(
        list(encoder.parameters()) + list(decoder.parameters()),
        lr=config.lr_generator,
    )

    def sample_fn(n: int, gen: torch.Generator) -> torch.Tensor:
        decoder.eval()
        try:
            z = torch.randn(n, config.latent_dim, generator=gen)
            return decoder(z)
        finally:
            decoder.train()

    run = RunWriter(config)
    for epoch in range(1, config.epochs + 1):
        kl_sum = rec_sum = loss_sum = 0.0
        n_seen = 0
        for xb in iter_batches(data, config.batch_size, g):
            mu, logvar = encoder(xb)
            std = torch.exp(0.5 * logvar)
            z = mu + std * torch.randn(mu.shape, generator=g)
            xh = decoder(z)
            kl = gaussian_kl(mu, logvar)
            rec = torch.sum((xh - xb) ** 2, dim=(1, 2, 3))
            loss = torch.mean(kl + config.kappa * rec)
            opt.zero_grad()
            loss.backward()
            opt.step()
            b = xb.shape[0]
            n_seen += b
            kl_sum += kl.detach().sum().item()
            rec_sum += rec.detach().sum().item()
            loss_sum += loss.detach().item() * b
        losses = {
            "kl": kl_sum / n_seen,
            "reconstruction": rec_sum / n_seen,
            "loss": loss_sum / n_seen,
        }
        snap = None
        if run.wants_snapshot(epoch):
            snap = run.snapshot_path(epoch)
            export_snapshot(sample_fn, config.snapshot_count, snap,
                            seed=config.seed + epoch)
        run.log(epoch, losses, snap)
    run.finish(sample_fn, seed=config.seed)
    return run.logs
