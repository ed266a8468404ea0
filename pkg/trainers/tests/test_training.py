"""Training smoke runs: loss trends, logging layout, snapshot export, and
interoperability of exported files with the pattern library CLI."""

import json
import shutil
import subprocess

import numpy as np
import pytest
import torch

from kirigami_trainers import TRAINERS
from kirigami_trainers.common import export_snapshot, validate_snapshot
from kirigami_trainers.config import TrainerConfig
from kirigami_trainers.kgs import read_kgs
from kirigami_trainers.nets import ConvGenerator

KIRIGAMI = shutil.which("kirigami")


@pytest.fixture(scope="session")
def dataset20(tmp_path_factory):
    """Small admissible training set fetched through the library CLI."""
    path = tmp_path_factory.mktemp("data") / "train20.kgs"
    subprocess.run(
        ["kirigami", "gen", "--beta-max", "20", "--count", "256",
         "--seed", "4242", "--out", str(path)],
        check=True, capture_output=True,
    )
    return path


@pytest.fixture(scope="session")
def vae_run(dataset20, tmp_path_factory):
    out = tmp_path_factory.mktemp("vae-run")
    cfg = TrainerConfig(model="vae", dataset=str(dataset20), seed=5,
                        epochs=20, snapshot_every=100, snapshot_count=100,
                        out_dir=str(out))
    return cfg, TRAINERS["vae"](cfg)


@pytest.fixture(scope="session")
def gan_run(dataset20, tmp_path_factory):
    out = tmp_path_factory.mktemp("gan-run")
    cfg = TrainerConfig(model="gan", dataset=str(dataset20), seed=5,
                        epochs=20, snapshot_every=100, snapshot_count=100,
                        out_dir=str(out))
    return cfg, TRAINERS["gan"](cfg)


# ------------------------------------------------------------------ vae trend

def test_vae_loss_finite_and_decreasing(vae_run):
    _, logs = vae_run
    losses = [log.losses["loss"] for log in logs]
    assert len(losses) == 20
    assert all(np.isfinite(v) for v in losses)
    assert np.mean(losses[-5:]) < np.mean(losses[:5])
    # the trade-off plays out as reconstruction error dropping
    assert logs[-1].losses["reconstruction"] < logs[0].losses["reconstruction"]


def test_vae_loss_terms_present(vae_run):
    _, logs = vae_run
    assert set(logs[0].losses) == {"kl", "reconstruction", "loss"}
    assert all(log.losses["kl"] >= 0.0 for log in logs)


# ----------------------------------------------------------------- gan health

def test_gan_discriminator_never_collapses(gan_run):
    _, logs = gan_run
    acc = [log.losses["d_accuracy"] for log in logs]
    assert len(acc) == 20
    # strictly between the all-wrong and all-right extremes on > 90% of
    # epochs (here: all of them)
    inside = sum(1 for a in acc if 0.0 < a < 1.0)
    assert inside >= 19
    assert all(np.isfinite(log.losses["discriminator"]) for log in logs)
    assert all(np.isfinite(log.losses["generator"]) for log in logs)


# ------------------------------------------------------------- wgan/ddpm smoke

def test_wgan_losses_finite(dataset20, tmp_path):
    cfg = TrainerConfig(model="wgan", dataset=str(dataset20), seed=5,
                        epochs=5, snapshot_every=100, snapshot_count=50,
                        out_dir=str(tmp_path / "wgan"))
    logs = TRAINERS["wgan"](cfg)
    assert len(logs) == 5
    assert set(logs[0].losses) == {"critic_gap", "generator"}
    for log in logs:
        assert all(np.isfinite(v) for v in log.losses.values())


def test_ddpm_noise_error_decreases(dataset20, tmp_path):
    cfg = TrainerConfig(model="ddpm", dataset=str(dataset20), seed=5,
                        epochs=3, T=25, snapshot_every=100, snapshot_count=16,
                        out_dir=str(tmp_path / "ddpm"))
    logs = TRAINERS["ddpm"](cfg)
    mse = [log.losses["noise_mse"] for log in logs]
    assert all(np.isfinite(v) for v in mse)
    assert mse[-1] < mse[0]
    ds = read_kgs(tmp_path / "ddpm" / "final.kgs")
    assert ds.count == 16
    assert np.all(np.abs(ds.betas) <= 90.0)


# ------------------------------------------------------------------ run layout

def test_run_directory_layout(vae_run):
    cfg, logs = vae_run
    out = cfg.out_dir
    reloaded = TrainerConfig.from_json(f"{out}/config.json")
    assert reloaded == cfg
    with open(f"{out}/epochs.jsonl", encoding="ascii") as fh:
        lines = [json.loads(line) for line in fh]
    assert [e["epoch"] for e in lines] == list(range(1, 21))
    assert all(set(e) == {"epoch", "losses", "snapshot"} for e in lines)
    # snapshot_every=100 > epochs, so only the final epoch exports one
    snaps = [e["snapshot"] for e in lines if e["snapshot"]]
    assert len(snaps) == 1 and snaps[0].endswith("epoch_0020.kgs")


def test_final_snapshot_written_and_valid(vae_run):
    cfg, _ = vae_run
    path = f"{cfg.out_dir}/final.kgs"
    validate_snapshot(path)
    ds = read_kgs(path)
    assert ds.count == cfg.snapshot_count
    assert ds.source == "external"
    assert ds.beta_max == 90.0
    assert np.all(np.isfinite(ds.betas))
    assert np.all(ds.betas > -90.0) and np.all(ds.betas <= 90.0)


@pytest.mark.skipif(KIRIGAMI is None, reason="pattern library CLI not on PATH")
def test_snapshot_accepted_by_library_evaluator(vae_run):
    cfg, _ = vae_run
    proc = subprocess.run(
        [KIRIGAMI, "eval", "--in", f"{cfg.out_dir}/final.kgs"],
        check=True, capture_output=True, text=True,
    )
    report = json.loads(proc.stdout)
    assert report["count"] == cfg.snapshot_count
    assert report["source"] == "external"
    assert 0.0 <= report["admissible_fraction"] <= 1.0
    assert report["mean_intersections"] >= 0.0


# ------------------------------------------------------------- export samples

def test_export_snapshot_deterministic(tmp_path):
    torch.manual_seed(0)
    gen = ConvGenerator(16)

    def sample_fn(n, g):
        return gen(torch.randn(n, 16, generator=g))

    a, b, c = (tmp_path / name for name in ("a.kgs", "b.kgs", "c.kgs"))
    export_snapshot(sample_fn, 32, a, seed=9)
    export_snapshot(sample_fn, 32, b, seed=9)
    export_snapshot(sample_fn, 32, c, seed=10)
    assert a.read_bytes() == b.read_bytes()
    assert a.read_bytes() != c.read_bytes()


def test_export_snapshot_rejects_non_finite(tmp_path):
    def bad_fn(n, g):
        return torch.full((n, 1, 6, 6), float("nan"))

    with pytest.raises(ValueError, match="non-finite"):
        export_snapshot(bad_fn, 4, tmp_path / "bad.kgs", seed=1)
    assert not (tmp_path / "bad.kgs").exists()


def test_default_snapshot_count_is_one_thousand(tmp_path):
    cfg = TrainerConfig(model="vae", dataset="x.kgs", seed=0,
                        out_dir=str(tmp_path))
    assert cfg.snapshot_count == 1000


# -------------------------------------------------------------- config checks

def test_config_rejects_bad_values(tmp_path):
    ok = dict(model="vae", dataset="d.kgs", seed=0, out_dir=str(tmp_path))
    with pytest.raises(ValueError, match="model"):
        TrainerConfig(**{**ok, "model": "flow"})
    with pytest.raises(ValueError, match="T >= 10"):
        TrainerConfig(**{**ok, "model": "ddpm", "T": 5})
    with pytest.raises(ValueError, match="beta_start"):
        TrainerConfig(**{**ok, "beta_start": 0.5, "beta_end": 0.1})
    with pytest.raises(ValueError, match="positive"):
        TrainerConfig(**{**ok, "lr_generator": -1.0})
    with pytest.raises(ValueError, match="batch_size"):
        TrainerConfig(**{**ok, "batch_size": 0})


def test_config_learning_rate_defaults():
    slow_gen = TrainerConfig(model="gan", dataset="d.kgs", seed=0)
    assert slow_gen.lr_generator == pytest.approx(1e-5)
    assert slow_gen.lr_discriminator == pytest.approx(5e-4)
    sym = TrainerConfig(model="vae", dataset="d.kgs", seed=0)
    assert sym.lr_generator == sym.lr_discriminator == pytest.approx(5e-4)


def test_config_json_roundtrip_and_unknown_field(tmp_path):
    cfg = TrainerConfig(model="wgan", dataset="d.kgs", seed=3, epochs=7,
                        out_dir=str(tmp_path))
    path = tmp_path / "cfg.json"
    cfg.to_json(path)
    assert TrainerConfig.from_json(path) == cfg
    raw = json.loads(path.read_text())
    raw["mystery"] = 1
    path.write_text(json.dumps(raw))
    with pytest.raises(ValueError, match="unknown config fields"):
        TrainerConfig.from_json(path)


def test_trainers_reject_mismatched_model(dataset20, tmp_path):
    cfg = TrainerConfig(model="gan", dataset=str(dataset20), seed=0,
                        out_dir=str(tmp_path))
    with pytest.raises(ValueError, match="expected 'vae'"):
        TRAINERS["vae"](cfg)
