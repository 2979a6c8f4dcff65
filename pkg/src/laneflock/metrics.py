"""Lateral-separation sampling and distribution summaries.

Separation samples are taken per vehicle pair (Ego-Left: ID:1/ID:2,
Ego-Right: ID:2/ID:3) and per source (boid swarms, tracked objects, ground
truth), but only while the pair is roughly alongside (longitudinal gap
within the parallel gate).  Summaries carry the statistics behind a
split-violin plot: mean and the 1/25/50/75/99th percentiles.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, asdict

import numpy as np

from .geometry import Vec2
from .flocking import Flock

PAIRS: dict[str, tuple[int, int]] = {"Ego-Left": (1, 2), "Ego-Right": (2, 3)}
SOURCES = ("boids", "tracked", "ground-truth")

DEFAULT_PARALLEL_GATE = 50.0  # meters


class EmptyFlockError(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class SeparationSample:
    cycle: int
    pair: str
    source: str
    value: float


@dataclass(frozen=True, slots=True)
class DistributionSummary:
    count: int
    mean: float
    p1: float
    p25: float
    p50: float
    p75: float
    p99: float


def swarm_mean_position(flock: Flock) -> Vec2:
    """Arithmetic mean of the boid positions; rejects empty flocks."""
    if not flock.boids:
        raise EmptyFlockError(f"flock {flock.flock_id} has no boids")
    n = len(flock.boids)
    return Vec2(sum(b.position.x for b in flock.boids) / n,
                sum(b.position.y for b in flock.boids) / n)


def swarm_lateral_position(flock: Flock) -> float:
    """Mean lateral (y) position of the flock's boids."""
    return swarm_mean_position(flock).y


def sample_separation(pair: str, source: str, pos_a: Vec2 | None,
                      pos_b: Vec2 | None, cycle: int,
                      parallel_gate: float = DEFAULT_PARALLEL_GATE
                      ) -> SeparationSample | None:
    """Lateral separation of a pair, or None when absent or not alongside."""
    if pos_a is None or pos_b is None:
        return None
    if abs(pos_a.x - pos_b.x) > parallel_gate:
        return None
    return SeparationSample(cycle, pair, source, abs(pos_a.y - pos_b.y))


def summarize(samples) -> DistributionSummary:
    """Mean plus percentiles (linear interpolation between closest ranks)."""
    values = np.asarray(list(samples), dtype=float)
    if values.size == 0:
        raise ValueError("cannot summarize an empty sample set")
    p1, p25, p50, p75, p99 = np.percentile(
        values, [1, 25, 50, 75, 99], method="linear")
    return DistributionSummary(int(values.size), float(values.mean()),
                               float(p1), float(p25), float(p50),
                               float(p75), float(p99))


def summarize_by_group(runs: list[tuple[int, list[SeparationSample]]]
                       ) -> dict[tuple[str, str], DistributionSummary]:
    """Pool samples across runs and summarize per (pair, source)."""
    pooled: dict[tuple[str, str], list[float]] = {}
    for _, samples in runs:
        for s in samples:
            pooled.setdefault((s.pair, s.source), []).append(s.value)
    return {key: summarize(vals) for key, vals in sorted(pooled.items())}


def write_samples_csv(path, runs: list[tuple[int, list[SeparationSample]]]
                      ) -> None:
    """Raw samples, one row per sample, fixed 6-decimal formatting."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["run_seed", "cycle", "pair", "source", "value"])
        for run_seed, samples in runs:
            for s in samples:
                writer.writerow([run_seed, s.cycle, s.pair, s.source,
                                 f"{s.value:.6f}"])


def _summary_record(pair: str, source: str, summary: DistributionSummary,
                    nb: int) -> dict:
    rec = {"pair": pair, "source": source, "nb": nb}
    for key, val in asdict(summary).items():
        rec[key] = val if key == "count" else round(float(val), 6)
    return rec


def write_summary_json(path, summaries, nb: int) -> None:
    records = [_summary_record(pair, source, summ, nb)
               for (pair, source), summ in sorted(summaries.items())]
    with open(path, "w") as fh:
        json.dump({"nb": nb, "summaries": records}, fh, indent=2,
                  sort_keys=True)
        fh.write("\n")


def write_summary_csv(path, summaries, nb: int) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["pair", "source", "nb", "count", "mean",
                         "p1", "p25", "p50", "p75", "p99"])
        for (pair, source), s in sorted(summaries.items()):
            writer.writerow([pair, source, nb, s.count] +
                            [f"{v:.6f}" for v in
                             (s.mean, s.p1, s.p25, s.p50, s.p75, s.p99)])
