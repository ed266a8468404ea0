"""Adversarial trainer, probability-output discriminator.

Alternating updates with separate learning rates: the slow generator
maximizes the discriminator's mistake probability, the faster
discriminator separates data from generator output. Binary cross-entropy
on sigmoid scores, Adam with momentum 0.5.
"""

from __future__ import annotations

import torch
from torch import nn

from .common import (
    EpochLog,
    RunWriter,
    export_snapshot,
    iter_batches,
    load_training_tensor,
    make_generator,
)
from .config import TrainerConfig
from .nets import ConvDiscriminator, ConvGenerator

_ADAM_BETAS = (0.5, 0.999)


def train_gan(config: TrainerConfig) -> list[EpochLog]:
    if config.model != "gan":
        raise ValueError(f"config.model is {config.model!r}, expected 'gan'")
    torch.manual_seed(config.seed)
    g = make_generator(config.seed + 1)

    data = load_training_tensor(config.dataset)
    generator = ConvGenerator(latent_dim=config.latent_dim)
    disc = ConvDiscriminator(sigmoid=True)
    opt_g = torch.optim.Adam(generator.parameters(), lr=config.lr_generator,
                             betas=_ADAM_BETAS)
    opt_d = torch.optim.Adam(disc.parameters(), lr=config.lr_discriminator,
                             betas=_ADAM_BETAS)
    bce = nn.BCELoss()

    def sample_fn(n: int, gen: torch.Generator) -> torch.Tensor:
        generator.eval()
        try:
            z = torch.randn(n, config.latent_dim, generator=gen)
            return generator(z)
        finally:
            generator.train()

    run = RunWriter(config)
    for epoch in range(1, config.epochs + 1):
        d_sum = g_sum = acc_sum = 0.0
        n_batches = 0
        for xb in iter_batches(data, config.batch_size, g):
            b = xb.shape[0]
            ones = torch.ones(b)
            zeros = torch.zeros(b)

            # discriminator step on real and on detached fake
            z = torch.randn(b, config.latent_dim, generator=g)
            fake = generator(z).detach()
            d_real = disc(xb)
            d_fake = disc(fake)
            loss_d = bce(d_real, ones) + bce(d_fake, zeros)
            opt_d.zero_grad()
            loss_d.backward()
            opt_d.step()

            # generator step against the updated discriminator
            z = torch.randn(b, config.latent_dim, generator=g)
            d_gen = disc(generator(z))
            loss_g = bce(d_gen, ones)
            opt_g.zero_grad()
            loss_g.backward()
            opt_g.step()

            d_sum += loss_d.detach().item()
            g_sum += loss_g.detach().item()
            acc_sum += 0.5 * (float((d_real > 0.5).float().mean())
                              + float((d_fake < 0.5).float().mean()))
            n_batches += 1
        losses = {
            "discriminator": d_sum / n_batches,
            "generator": g_sum / n_batches,
            "d_accuracy": acc_sum / n_batches,
        }
        snap = None
        if run.wants_snapshot(epoch):
            snap = run.snapshot_path(epoch)
            export_snapshot(sample_fn, config.snapshot_count, snap,
                            seed=config.seed + epoch)
        run.log(epoch, losses, snap)
    run.finish(sample_fn, seed=config.seed)
    return run.logs
