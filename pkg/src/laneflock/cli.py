"""Command line entry points: simulate, sweep, dubins, stats."""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from dataclasses import replace

from . import config as config_mod
from . import metrics
from .config import ConfigError, RunConfig
from .dubins import (
    ReachabilityPolicy,
    is_reachable,
    sample_path,
    shortest_dubins_path,
)
from .engine import simulate_many
from .geometry import Pose, Vec2
from .scenario import write_ground_truth_csv

DEFAULT_SWEEP_NB = (3, 7, 14)


def _load_config(args) -> RunConfig:
    if args.config:
        cfg = config_mod.load(args.config)
    else:
        cfg = RunConfig()
    overrides = {}
    if getattr(args, "seed", None) is not None:
        overrides["master_seed"] = args.seed
    if getattr(args, "runs", None) is not None:
        overrides["runs"] = args.runs
    if getattr(args, "nb", None) is not None:
        overrides["nb"] = args.nb
    if getattr(args, "out", None) is not None:
        overrides["out_dir"] = args.out
    if overrides:
        cfg = replace(cfg, **overrides)
    config_mod.validate(cfg)
    return cfg


def _write_outputs(cfg: RunConfig, out_dir: str, runs) -> dict:
    summaries = metrics.summarize_by_group(runs)
    os.makedirs(out_dir, exist_ok=True)
    metrics.write_samples_csv(os.path.join(out_dir, f"samples_{cfg.nb}.csv"),
                              runs)
    metrics.write_summary_json(os.path.join(out_dir, f"summary_{cfg.nb}.json"),
                               summaries, cfg.nb)
    metrics.write_summary_csv(os.path.join(out_dir, f"summary_{cfg.nb}.csv"),
                              summaries, cfg.nb)
    missing = [key for key in
               ((p, s) for p in metrics.PAIRS for s in metrics.SOURCES)
               if key not in summaries]
    for pair, source in missing:
        print(f"warning: no samples for pair={pair} source={source}",
              file=sys.stderr)
    return summaries


def _print_summary_table(summaries, nb: int) -> None:
    header = (f"{'pair':10s} {'source':13s} {'nb':>3s} {'count':>7s} "
              f"{'mean':>8s} {'p1':>8s} {'p25':>8s} {'p50':>8s} "
              f"{'p75':>8s} {'p99':>8s}")
    print(header)
    for (pair, source), s in sorted(summaries.items()):
        print(f"{pair:10s} {source:13s} {nb:3d} {s.count:7d} "
              f"{s.mean:8.3f} {s.p1:8.3f} {s.p25:8.3f} {s.p50:8.3f} "
              f"{s.p75:8.3f} {s.p99:8.3f}")


def cmd_simulate(args) -> int:
    cfg = _load_config(args)
    out_dir = cfg.out_dir
    os.makedirs(out_dir, exist_ok=True)
    config_mod.dump(cfg, os.path.join(out_dir, "effective_config.yaml"))
    if args.dump_ground_truth:
        write_ground_truth_csv(cfg.scenario.build(),
                               cfg.lifecycle.cycle_duration,
                               os.path.join(out_dir, "ground_truth.csv"))
    runs = simulate_many(cfg)
    summaries = _write_outputs(cfg, out_dir, runs)
    _print_summary_table(summaries, cfg.nb)
    return 0


def cmd_sweep(args) -> int:
    cfg = _load_config(args)
    nb_list = ([int(x) for x in args.nb_list.split(",")]
               if args.nb_list else list(DEFAULT_SWEEP_NB))
    out_dir = cfg.out_dir
    os.makedirs(out_dir, exist_ok=True)
    config_mod.dump(cfg, os.path.join(out_dir, "effective_config.yaml"))

    all_rows = []
    for nb in nb_list:
        sub = cfg.with_nb(nb)
        runs = simulate_many(sub)
        summaries = _write_outputs(sub, out_dir, runs)
        for (pair, source), s in sorted(summaries.items()):
            all_rows.append((pair, source, nb, s))

    comparison = os.path.join(out_dir, "comparison.csv")
    with open(comparison, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["pair", "source", "nb", "count", "mean",
                         "p1", "p25", "p50", "p75", "p99"])
        for pair, source, nb, s in all_rows:
            writer.writerow([pair, source, nb, s.count] +
                            [f"{v:.6f}" for v in
                             (s.mean, s.p1, s.p25, s.p50, s.p75, s.p99)])

    print(f"{'pair':10s} {'source':13s} {'nb':>3s} {'count':>7s} "
          f"{'mean':>8s} {'p1':>8s} {'p25':>8s} {'p50':>8s} "
          f"{'p75':>8s} {'p99':>8s}")
    for pair, source, nb, s in all_rows:
        print(f"{pair:10s} {source:13s} {nb:3d} {s.count:7d} "
              f"{s.mean:8.3f} {s.p1:8.3f} {s.p25:8.3f} {s.p50:8.3f} "
              f"{s.p75:8.3f} {s.p99:8.3f}")
    return 0


def cmd_dubins(args) -> int:
    vals = args.pose
    try:
        start = Pose(Vec2(vals[0], vals[1]), vals[2])
        target = Pose(Vec2(vals[3], vals[4]), vals[5])
    except ValueError as exc:
        print(f"error: invalid pose: {exc}", file=sys.stderr)
        return 2
    if not args.radius > 0.0 or not math.isfinite(args.radius):
        print("error: radius must be positive and finite", file=sys.stderr)
        return 2
    policy = ReachabilityPolicy(detour_factor=args.detour_factor)
    path = shortest_dubins_path(start, target, args.radius)
    reachable = is_reachable(start, target, args.radius, policy)
    print(f"word: {path.word}")
    print(f"length: {path.total_length:.6f}")
    print(f"segments: "
          + ", ".join(f"{s:.6f}" for s in path.segment_lengths))
    print(f"reachable: {'yes' if reachable else 'no'} "
          f"(detour factor {args.detour_factor})")
    if args.out:
        with open(args.out, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["x", "y", "heading"])
            for x, y, h in sample_path(start, path, step=args.step):
                writer.writerow([f"{x:.6f}", f"{y:.6f}", f"{h:.6f}"])
        print(f"polyline written to {args.out}")
    return 0


def cmd_stats(args) -> int:
    values: dict[tuple[str, str], list[float]] = {}
    for path in args.samples:
        with open(path) as fh:
            for row in csv.DictReader(fh):
                key = (row["pair"], row["source"])
                values.setdefault(key, []).append(float(row["value"]))
    if not values:
        print("error: no samples found", file=sys.stderr)
        return 2
    summaries = {key: metrics.summarize(vals)
                 for key, vals in sorted(values.items())}
    _print_summary_table(summaries, args.nb)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="laneflock",
        description="Boid-flock plausibilization of tracked highway objects")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run Monte-Carlo simulations")
    sim.add_argument("--config", help="YAML config file")
    sim.add_argument("--seed", type=int, help="master seed override")
    sim.add_argument("--runs", type=int, help="number of Monte-Carlo runs")
    sim.add_argument("--nb", type=int, help="boids per flock")
    sim.add_argument("--out", help="output directory")
    sim.add_argument("--dump-ground-truth", action="store_true",
                     help="also write the ego-relative ground truth CSV")
    sim.set_defaults(func=cmd_simulate)

    sweep = sub.add_parser("sweep", help="simulate across swarm sizes")
    sweep.add_argument("--config", help="YAML config file")
    sweep.add_argument("--seed", type=int)
    sweep.add_argument("--runs", type=int)
    sweep.add_argument("--out", help="output directory")
    sweep.add_argument("--nb-list", help="comma-separated swarm sizes "
                                         "(default 3,7,14)")
    sweep.set_defaults(func=cmd_sweep)

    dub = sub.add_parser("dubins", help="inspect one Dubins path")
    dub.add_argument("pose", type=float, nargs=6,
                     metavar=("X0", "Y0", "H0", "X1", "Y1", "H1")[0],
                     help="start and target pose: x0 y0 h0 x1 y1 h1")
    dub.add_argument("--radius", type=float, required=True)
    dub.add_argument("--detour-factor", type=float, default=1.2)
    dub.add_argument("--step", type=float, default=0.5)
    dub.add_argument("--out", help="polyline CSV path")
    dub.set_defaults(func=cmd_dubins)

    stats = sub.add_parser("stats", help="re-summarize existing sample CSVs")
    stats.add_argument("samples", nargs="+", help="samples_<Nb>.csv files")
    stats.add_argument("--nb", type=int, default=0,
                       help="swarm size label for the table")
    stats.set_defaults(func=cmd_stats)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc.strerror}: {exc.filename}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
