"""Adversarial trainer with a Wasserstein critic.

The critic outputs unbounded reals (no sigmoid) and approximates the
dual-form distance under a Lipschitz bound enforced by weight clipping to
[-clip, clip]; it takes several steps per generator step. RMSprop, per the
original clipping recipe, which cautions against momentum here.
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
from .nets import ConvDiscriminator, ConvGenerator


def train_wgan(config: TrainerConfig) -> list[EpochLog]:
    if config.model != "wgan":
        raise ValueError(f"config.model is {config.model!r}, expected 'wgan'")
    torch.manual_seed(config.seed)
    g = make_generator(config.seed + 1)

    data = load_training_tensor(config.dataset)
    generator = ConvGenerator(latent_dim=config.latent_dim)
    critic = ConvDiscriminator(sigmoid=False)
    opt_g = torch.optim.RMSprop(generator.parameters(), lr=config.lr_generator)
    opt_c = torch.optim.RMSprop(critic.parameters(), lr=config.lr_discriminator)

    def sample_fn(n: int, gen: torch.Generator) -> torch.Tensor:
        generator.eval()
        try:
            z = torch.randn(n, config.latent_dim, generator=gen)
            return generator(z)
        finally:
            generator.train()

    run = RunWriter(config)
    for epoch in range(1, config.epochs + 1):
        w_sum = g_sum = 0.0
        n_critic = n_gen = 0
        since_gen = 0
        for xb in iter_batches(data, config.batch_size, g):
            b = xb.shape[0]

            # critic step: push real scores up, generated scores down
            z = torch.randn(b, config.latent_dim, generator=g)
            fake = generator(z).detach()
            score_gap = critic(xb).mean() - critic(fake).mean()
            loss_c = -score_gap
            opt_c.zero_grad()
            loss_c.backward()
            opt_c.step()
            with torch.no_grad():
                for p in critic.parameters():
                    p.clamp_(-config.clip, config.clip)
            w_sum += score_gap.detach().item()
            n_critic += 1
            since_gen += 1

            if since_gen >= config.critic_steps:
                since_gen = 0
                z = torch.randn(b, config.latent_dim, generator=g)
                loss_g = -critic(generator(z)).mean()
                opt_g.zero_grad()
                loss_g.backward()
                opt_g.step()
                g_sum += loss_g.detach().item()
                n_gen += 1
        losses = {
            "critic_gap": w_sum / n_critic,
            "generator": g_sum / max(n_gen, 1),
        }
        snap = None
        if run.wants_snapshot(epoch):
            snap = run.snapshot_path(epoch)
            export_snapshot(sample_fn, config.snapshot_count, snap,
                            seed=config.seed + epoch)
        run.log(epoch, losses, snap)
    run.finish(sample_fn, seed=config.seed)
    return run.logs
