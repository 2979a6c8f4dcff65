"""Tracker surrogate: noisy tracked objects derived from ground truth.

The production sensor stack is out of scope; this surrogate reproduces its
statistical footprint: unbiased Gaussian position noise everywhere, plus
episodic lateral-association failures between hard-to-discriminate vehicle
pairs (lateral bias toward the neighbor, or a full merge into one track).
The default parameters are calibration targets fitted against the reported
tracked-object separation statistics, not measured sensor values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import Vec2
from .scenario import GroundTruthFrame, ScenarioConfig


@dataclass(frozen=True, slots=True)
class TrackedObject:
    id: int
    position: Vec2  # ego frame, meters
    velocity: Vec2  # over-ground velocity in ego axes, m/s


@dataclass(frozen=True, slots=True)
class NoiseModel:
    lateral_sigma: float = 0.002
    longitudinal_sigma: float = 0.01
    bias_event_rate: float = 0.5  # events/second while a pair is gated
    bias_magnitude: float = 1.8  # meters, toward the neighbor
    bias_duration: float = 13.0  # seconds
    bias_ramp: float = 5.0  # seconds of linear decay at the episode tail
    # A pair must have shared gating volume for this long before a bias
    # episode can start: association flips happen between established
    # tracks whose gate statistics have had time to overlap, not in the
    # first cycles after two vehicles become confusable.
    bias_confirmation_time: float = 2.5  # seconds
    merge_probability_per_cycle: float = 0.0005
    merge_duration: float = 1.0  # seconds
    merge_speed_gate: float = 2.5  # m/s
    merge_range_gate: float = 40.0  # meters of longitudinal overlap
    detection_range: float = 120.0  # meters, longitudinal tracking range
    # Constant lateral pull of two confusable tracks toward each other while
    # they share gating volume: detections near the gate boundary are
    # occasionally credited to the wrong track, which biases both position
    # estimates toward the middle by a small, persistent amount.
    association_drift: float = 0.15  # meters

    def __post_init__(self):
        if self.lateral_sigma < 0.0 or self.longitudinal_sigma < 0.0:
            raise ValueError("sigmas must be >= 0")
        if not 0.0 <= self.merge_probability_per_cycle <= 1.0:
            raise ValueError("merge_probability_per_cycle must be in [0, 1]")
        if self.bias_event_rate < 0.0:
            raise ValueError("bias_event_rate must be >= 0")
        if self.bias_ramp < 0.0:
            raise ValueError("bias_ramp must be >= 0")
        if self.bias_confirmation_time < 0.0:
            raise ValueError("bias_confirmation_time must be >= 0")
        if not self.detection_range > 0.0:
            raise ValueError("detection_range must be > 0")
        if self.association_drift < 0.0:
            raise ValueError("association_drift must be >= 0")


@dataclass(frozen=True, slots=True)
class Episode:
    kind: str  # "bias" | "merge"
    pair: tuple[int, int]  # sorted vehicle ids
    start_cycle: int
    end_cycle: int  # exclusive
    biased_id: int | None = None  # bias episodes only
    ramp_cycles: int = 0  # bias episodes: cycles to decay back to zero

    def active(self, cycle: int) -> bool:
        return self.start_cycle <= cycle < self.end_cycle

    def intensity(self, cycle: int) -> float:
        """Sawtooth profile in [0, 1]: abrupt onset, plateau, linear decay.

        An association error appears abruptly when a gating decision flips
        to the wrong neighbor, then bleeds off gradually while the track
        filter re-converges on its own measurements.
        """
        if not self.active(cycle):
            return 0.0
        if self.ramp_cycles <= 0:
            return 1.0
        fall = (self.end_cycle - cycle) / self.ramp_cycles
        return min(1.0, fall)


def _gated_pairs(config: ScenarioConfig, t: float, model: NoiseModel):
    """Target pairs that are confusable at time t (speed + range gates)."""
    targets = [v for v in config.vehicles if v.id != 0]
    pairs = []
    for i, a in enumerate(targets):
        for b in targets[i + 1:]:
            if abs(a.speed - b.speed) > model.merge_speed_gate:
                continue
            gap = abs((a.start_s + a.speed * t) - (b.start_s + b.speed * t))
            if gap <= model.merge_range_gate:
                pairs.append(tuple(sorted((a.id, b.id))))
    return pairs


def schedule_events(model: NoiseModel, config: ScenarioConfig,
                    cycle_duration: float, n_cycles: int, rng) -> list[Episode]:
    """Seed-deterministic bias/merge episode timeline.

    Episodes only start while their pair satisfies the speed and range
    gates; at most one bias and one merge episode are active per pair.
    """
    episodes: list[Episode] = []
    bias_until: dict[tuple[int, int], int] = {}
    merge_until: dict[tuple[int, int], int] = {}
    gated_since: dict[tuple[int, int], int] = {}
    p_bias = model.bias_event_rate * cycle_duration
    bias_cycles = max(1, int(round(model.bias_duration / cycle_duration)))
    ramp_cycles = int(round(model.bias_ramp / cycle_duration))
    merge_cycles = max(1, int(round(model.merge_duration / cycle_duration)))
    confirm_cycles = int(round(model.bias_confirmation_time / cycle_duration))

    for cycle in range(n_cycles):
        pairs = _gated_pairs(config, cycle * cycle_duration, model)
        for pair in pairs:
            gated_since.setdefault(pair, cycle)
        for pair in [p for p in gated_since if p not in pairs]:
            start = gated_since.pop(pair)
            if model.association_drift > 0.0:
                episodes.append(Episode("drift", pair, start, cycle))
        for pair in pairs:
            confirmed = cycle - gated_since[pair] >= confirm_cycles
            if p_bias > 0.0 and confirmed and cycle >= bias_until.get(pair, 0):
                if rng.random() < p_bias:
                    biased = pair[int(rng.random() < 0.5)]
                    episodes.append(Episode("bias", pair, cycle,
                                            cycle + bias_cycles, biased,
                                            ramp_cycles))
                    bias_until[pair] = cycle + bias_cycles
            if model.merge_probability_per_cycle > 0.0 \
                    and cycle >= merge_until.get(pair, 0):
                if rng.random() < model.merge_probability_per_cycle:
                    episodes.append(Episode("merge", pair, cycle,
                                            cycle + merge_cycles))
                    merge_until[pair] = cycle + merge_cycles
    if model.association_drift > 0.0:
        for pair, start in gated_since.items():
            episodes.append(Episode("drift", pair, start, n_cycles))
    return episodes


def observe(frame: GroundTruthFrame, model: NoiseModel, rng,
            active: list[Episode] = (), cycle: int = 0) -> list[TrackedObject]:
    """Tracked objects for one cycle (non-ego vehicles within range).

    Vehicles beyond the longitudinal detection range are not tracked (the
    range is evaluated on the true position so tracks do not flicker from
    measurement noise).  Position noise is independent per axis.  While a
    pair shares gating volume both tracks drift slightly toward each other;
    an active bias episode additionally shifts the biased track laterally
    toward its partner; an active merge episode collapses the pair into one
    track at the noisy midpoint under the lower id.
    """
    tracked: dict[int, TrackedObject] = {}
    truth_y: dict[int, float] = {vid: v.position.y
                                 for vid, v in frame.vehicles.items()}
    for vid in sorted(frame.vehicles):
        if vid == 0:
            continue
        veh = frame.vehicles[vid]
        if abs(veh.position.x) > model.detection_range:
            continue
        nx = model.longitudinal_sigma * rng.standard_normal()
        ny = model.lateral_sigma * rng.standard_normal()
        tracked[vid] = TrackedObject(
            vid, Vec2(veh.position.x + nx, veh.position.y + ny), veh.velocity)

    for ep in active:
        if ep.kind != "drift":
            continue
        a, b = ep.pair
        if a not in tracked or b not in tracked:
            continue
        for vid, other in ((a, b), (b, a)):
            dy = truth_y[other] - truth_y[vid]
            shift = math.copysign(model.association_drift, dy) if dy else 0.0
            obj = tracked[vid]
            tracked[vid] = TrackedObject(
                obj.id, Vec2(obj.position.x, obj.position.y + shift),
                obj.velocity)

    for ep in active:
        if ep.kind != "bias":
            continue
        a, b = ep.pair
        if ep.biased_id not in tracked or (a not in tracked or b not in tracked):
            continue
        partner = b if ep.biased_id == a else a
        dy = truth_y[partner] - truth_y[ep.biased_id]
        magnitude = model.bias_magnitude * ep.intensity(cycle)
        shift = math.copysign(magnitude, dy) if dy != 0.0 else 0.0
        obj = tracked[ep.biased_id]
        tracked[ep.biased_id] = TrackedObject(
            obj.id, Vec2(obj.position.x, obj.position.y + shift), obj.velocity)

    for ep in active:
        if ep.kind != "merge":
            continue
        a, b = ep.pair
        if a in tracked and b in tracked:
            oa, ob = tracked[a], tracked[b]
            merged = TrackedObject(
                min(a, b),
                Vec2((oa.position.x + ob.position.x) / 2.0,
                     (oa.position.y + ob.position.y) / 2.0),
                Vec2((oa.velocity.x + ob.velocity.x) / 2.0,
                     (oa.velocity.y + ob.velocity.y) / 2.0))
            del tracked[max(a, b)]
            tracked[min(a, b)] = merged

    return [tracked[vid] for vid in sorted(tracked)]
