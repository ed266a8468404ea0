"""Command-line access to the samplers, analyses, and file formats.

Every command that draws random numbers requires an explicit --seed, so any
output can be reproduced from its command line. Validation problems (bad
arguments, malformed files, out-of-range values) exit with status 2;
success exits 0.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import analysis, dataio, evaluation, sampling
from .lattice import LatticeSpec

_SEPS = {"vertical": analysis.SEP_VERTICAL, "horizontal": analysis.SEP_HORIZONTAL}


def _angle_pair(text: str) -> tuple:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 'a,b', got {text!r}")
    try:
        return (float(parts[0]), float(parts[1]))
    except ValueError:
        raise argparse.ArgumentTypeError(f"non-numeric angle pair {text!r}") from None


def _float_list(text: str) -> list:
    try:
        return [float(t) for t in text.split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"non-numeric list {text!r}") from None


def _print_json(obj) -> None:
    print(json.dumps(obj, sort_keys=True))


def _spec_from(args) -> LatticeSpec:
    return LatticeSpec(rows=args.rows, cols=args.cols)


def _add_lattice_args(p):
    p.add_argument("--rows", type=int, default=6, help="lattice rows (even)")
    p.add_argument("--cols", type=int, default=6, help="lattice columns (even)")


def _cmd_gen(args) -> int:
    spec = _spec_from(args)
    ss = sampling.generate_dataset(
        spec, args.beta_max, args.count, sweeps=args.sweeps, seed=args.seed,
        workers=args.workers,
    )
    dataio.write_dataset(ss, args.out)
    counts = evaluation.intersection_counts(spec, ss)
    _print_json(
        {
            "out": args.out,
            "count": ss.count,
            "beta_max": ss.beta_max,
            "sweeps": ss.sweeps,
            "seed": ss.seed,
            "admissible_fraction": float((counts == 0).mean()),
        }
    )
    return 0


def _cmd_gen_uniform(args) -> int:
    spec = _spec_from(args)
    ss = sampling.uniform_set(args.beta_max, args.count, args.seed, spec)
    dataio.write_dataset(ss, args.out)
    _print_json(
        {"out": args.out, "count": ss.count, "beta_max": ss.beta_max, "seed": ss.seed}
    )
    return 0


def _cmd_gen_marginal(args) -> int:
    ref = dataio.read_dataset(args.ref)
    spec = LatticeSpec(rows=ref.rows, cols=ref.cols)
    fit = sampling.fit_marginal(ref, bins=args.bins, spec=spec)
    ss = sampling.marginal_set(fit, args.count, args.seed, spec)
    dataio.write_dataset(ss, args.out)
    _print_json(
        {
            "out": args.out,
            "count": ss.count,
            "beta_max": ss.beta_max,
            "seed": ss.seed,
            "ref": args.ref,
            "bins": args.bins,
        }
    )
    return 0


def _cmd_eval(args) -> int:
    ss = dataio.read_dataset(args.infile)
    spec = LatticeSpec(rows=ss.rows, cols=ss.cols)
    ref = dataio.read_dataset(args.ref) if args.ref else None
    report = evaluation.evaluate(
        spec, ss, reference=ref,
        marginal_bins=args.marginal_bins, pair_bins=args.pair_bins,
        baseline_seed=args.seed,
    )
    if args.report:
        dataio.write_report_json(report, args.report)
    if args.hist:
        dataio.write_histogram_csv(report.marginal, args.hist)
    if args.pair_hist:
        dataio.write_pair_histogram_csv(report.pairs, args.pair_hist)
    summary = report.to_dict()
    del summary["marginal_hist"]
    del summary["pair_hist"]
    _print_json(summary)
    return 0


def _cmd_two_cut_map(args) -> int:
    tcmap = analysis.build_two_cut_map(
        args.beta_max, resolution=args.res, base_angles=args.bases,
        separation=_SEPS[args.sep],
    )
    if args.out:
        dataio.write_pgm(tcmap, args.out)
    if args.csv:
        dataio.write_map_csv(tcmap, args.csv)
    _print_json(
        {
            "beta_max": tcmap.beta_max,
            "resolution": tcmap.resolution,
            "bases": list(tcmap.base_angles),
            "separation": args.sep,
            "nonadmissible_fraction": analysis.nonadmissible_fraction(tcmap),
        }
    )
    return 0


def _cmd_path(args) -> int:
    tcmap = analysis.build_two_cut_map(
        args.beta_max, resolution=args.res, base_angles=args.bases,
        separation=_SEPS[args.sep],
    )
    result = analysis.admissible_path(tcmap, args.src, args.dst)
    if args.out:
        dataio.write_path_csv(result, args.out)
    _print_json(
        {
            "found": result.found,
            "length": result.length if result.found else None,
            "vertices": [list(v) for v in result.vertices],
            "straight_chord_blocked": analysis.straight_path_crosses(
                args.src, args.dst, separation=_SEPS[args.sep], step=args.step
            ),
        }
    )
    return 0


def _cmd_chord_prob(args) -> int:
    stats = analysis.path_crossing_probability(
        args.beta_max, args.n, args.seed, base_angles=args.bases,
        separation=_SEPS[args.sep], step=args.step,
    )
    _print_json(
        {
            "beta_max": stats.beta_max,
            "n_pairs": stats.n_pairs,
            "n_crossing": stats.n_crossing,
            "probability": stats.probability,
            "ci_low": stats.ci_low,
            "ci_high": stats.ci_high,
            "step": stats.step,
        }
    )
    return 0


def _cmd_sweep_curve(args) -> int:
    spec = _spec_from(args)
    points = analysis.sweep_curves(args.beta_max, args.n, args.seed, spec)
    if args.out:
        dataio.write_curve_csv(points, args.out)
    _print_json(
        [
            {
                "beta_max": p.beta_max,
                "n": p.n,
                "mean_intersections": p.mean_intersections,
                "mean_se": p.mean_se,
                "admissible_count": p.admissible_count,
                "admissible_rate": p.admissible_rate,
                "rate_low": p.rate_low,
                "rate_high": p.rate_high,
            }
            for p in points
        ]
    )
    return 0


def _cmd_ed(args) -> int:
    sa = dataio.read_dataset(args.a)
    sb = dataio.read_dataset(args.b)
    if sa.betas.shape != sb.betas.shape:
        raise ValueError(
            f"shape mismatch: {sa.betas.shape} vs {sb.betas.shape}"
        )
    flat_a = sa.betas.reshape(sa.count, -1)
    flat_b = sb.betas.reshape(sb.count, -1)
    d = np.sqrt(((flat_a - flat_b) ** 2).sum(axis=1))
    if args.out:
        with open(args.out, "w", encoding="ascii", newline="\n") as fh:
            fh.write("index,distance\n")
            for k, v in enumerate(d):
                fh.write(f"{k},{v}\n")
    _print_json(
        {
            "count": int(d.size),
            "mean": float(d.mean()),
            "min": float(d.min()),
            "max": float(d.max()),
        }
    )
    return 0


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="kirigami",
        description="Generate, analyze, and evaluate bounded-angle cut patterns.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="sample admissible patterns into a dataset file")
    p.add_argument("--beta-max", type=float, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--sweeps", type=int, default=sampling.DEFAULT_SWEEPS)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--workers", type=int, default=None)
    _add_lattice_args(p)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("gen-uniform", help="sample unconstrained uniform patterns")
    p.add_argument("--beta-max", type=float, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    _add_lattice_args(p)
    p.set_defaults(func=_cmd_gen_uniform)

    p = sub.add_parser(
        "gen-marginal",
        help="fit a per-orientation angle marginal to a dataset and sample it",
    )
    p.add_argument("--ref", required=True, help="reference dataset file")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--bins", type=int, default=180)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen_marginal)

    p = sub.add_parser("eval", help="score a dataset, optionally against a reference")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--ref", default=None)
    p.add_argument("--report", default=None, help="write full JSON report here")
    p.add_argument("--hist", default=None, help="write pooled angle histogram CSV")
    p.add_argument("--pair-hist", default=None, help="write neighbor-pair histogram CSV")
    p.add_argument("--marginal-bins", type=int, default=180)
    p.add_argument("--pair-bins", type=int, default=60)
    p.add_argument("--seed", type=int, default=None,
                   help="seed for baseline draws (requires --ref)")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("two-cut-map", help="rasterize the two-cut design square")
    p.add_argument("--beta-max", type=float, required=True)
    p.add_argument("--res", type=int, default=2048)
    p.add_argument("--bases", type=_angle_pair, default=analysis.BASES_ADJACENT,
                   help="rest angles 'a,b' of the two cuts (default 0,90)")
    p.add_argument("--sep", choices=sorted(_SEPS), default="vertical")
    p.add_argument("--out", default=None, help="write PGM image here")
    p.add_argument("--csv", default=None, help="write CSV matrix here")
    p.set_defaults(func=_cmd_two_cut_map)

    p = sub.add_parser("path", help="detour path between two admissible angle pairs")
    p.add_argument("--from", dest="src", type=_angle_pair, required=True)
    p.add_argument("--to", dest="dst", type=_angle_pair, required=True)
    p.add_argument("--beta-max", type=float, default=90.0)
    p.add_argument("--res", type=int, default=512)
    p.add_argument("--bases", type=_angle_pair, default=analysis.BASES_ABSOLUTE,
                   help="rest angles 'a,b' of the square (default 0,0)")
    p.add_argument("--sep", choices=sorted(_SEPS), default="vertical")
    p.add_argument("--step", type=float, default=0.02,
                   help="chord sampling step for the straight-line check")
    p.add_argument("--out", default=None, help="write vertex CSV here")
    p.set_defaults(func=_cmd_path)

    p = sub.add_parser(
        "chord-prob",
        help="probability a straight chord between admissible pairs is blocked",
    )
    p.add_argument("--beta-max", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--step", type=float, default=0.02)
    p.add_argument("--bases", type=_angle_pair, default=analysis.BASES_ADJACENT)
    p.add_argument("--sep", choices=sorted(_SEPS), default="vertical")
    p.set_defaults(func=_cmd_chord_prob)

    p = sub.add_parser(
        "sweep-curve", help="uniform-draw intersection statistics vs angle bound"
    )
    p.add_argument("--beta-max", type=_float_list, required=True,
                   help="comma-separated bounds, e.g. '10,20,30'")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", default=None, help="write CSV here")
    _add_lattice_args(p)
    p.set_defaults(func=_cmd_sweep_curve)

    p = sub.add_parser("ed", help="per-index distances between two datasets")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--out", default=None, help="write per-index CSV here")
    p.set_defaults(func=_cmd_ed)

    return ap


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
