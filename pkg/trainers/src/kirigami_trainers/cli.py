"""Command line: run a training config, and score a run's snapshots by
invoking the pattern library's evaluator on each exported dataset."""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

from . import TRAINERS
from .config import TrainerConfig


def _cmd_train(args) -> int:
    config = TrainerConfig.from_json(args.config)
    logs = TRAINERS[config.model](config)
    last = logs[-1]
    print(json.dumps({
        "model": config.model,
        "out_dir": config.out_dir,
        "epochs": last.epoch,
        "final_losses": last.losses,
        "final_snapshot": os.path.join(config.out_dir, "final.kgs"),
    }, sort_keys=True))
    return 0


def _eval_snapshot(eval_cmd: str, path: str) -> dict:
    proc = subprocess.run(
        [eval_cmd, "eval", "--in", path],
        capture_output=True, text=True, check=True,
    )
    return json.loads(proc.stdout)


def _cmd_curve(args) -> int:
    run_dir = args.run
    log_path = os.path.join(run_dir, "epochs.jsonl")
    with open(log_path, encoding="ascii") as fh:
        entries = [json.loads(line) for line in fh if line.strip()]

    points = []
    for entry in entries:
        snap = entry.get("snapshot")
        if not snap:
            continue
        report = _eval_snapshot(args.eval_cmd, snap)
        points.append({
            "epoch": entry["epoch"],
            "snapshot": snap,
            "mean_intersections": report["mean_intersections"],
            "admissible_fraction": report["admissible_fraction"],
        })
    final = os.path.join(run_dir, "final.kgs")
    if os.path.exists(final):
        report = _eval_snapshot(args.eval_cmd, final)
        points.append({
            "epoch": entries[-1]["epoch"] if entries else None,
            "snapshot": final,
            "mean_intersections": report["mean_intersections"],
            "admissible_fraction": report["admissible_fraction"],
        })
    out_path = args.out or os.path.join(run_dir, "curve.json")
    with open(out_path, "w", encoding="ascii") as fh:
        json.dump(points, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(json.dumps({"run": run_dir, "points": len(points), "out": out_path},
                     sort_keys=True))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="kirigami-train",
        description="Train generative models on pattern datasets and score "
                    "their snapshots.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="run one training config")
    p.add_argument("--config", required=True, help="TrainerConfig JSON file")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser(
        "curve",
        help="evaluate every snapshot of a finished run via the pattern "
             "library CLI",
    )
    p.add_argument("--run", required=True, help="run directory")
    p.add_argument("--eval-cmd", default="kirigami",
                   help="pattern-library executable (default: kirigami)")
    p.add_argument("--out", default=None, help="curve JSON path")
    p.set_defaults(func=_cmd_curve)

    return ap


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except subprocess.CalledProcessError as exc:
        print(f"error: evaluator failed: {exc.stderr}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
