"""Ground-truth world: a three-lane highway with four constant-speed vehicles.

The road is a chain of straight and gently curved segments.  Vehicles are
tracked in Frenet coordinates (arc length along the centerline plus a fixed
lateral offset) and re-expressed per cycle in the ego vehicle's ISO 8855
frame, which is the frame the sensing surrogate and the flocks operate in.
"""

from __future__ import annotations

import bisect
import csv
import math
from dataclasses import dataclass, field, replace

from .geometry import Vec2, Pose, normalize_angle

LANES = ("left", "ego", "right")

MIN_CURVE_RADIUS = 250.0  # "gentle curves" floor


@dataclass(frozen=True, slots=True)
class RoadSegment:
    length: float
    curvature: float = 0.0  # 1/m, 0 for straight, positive bends left

    def __post_init__(self):
        if not self.length > 0.0:
            raise ValueError("segment length must be > 0")
        if self.curvature != 0.0 and 1.0 / abs(self.curvature) < MIN_CURVE_RADIUS:
            raise ValueError("curve radius below the gentle-curve floor")


class RoadModel:
    """Arc-length parameterized centerline with three lanes."""

    def __init__(self, segments: list[RoadSegment], lane_width: float = 3.5):
        if not segments:
            raise ValueError("road needs at least one segment")
        if not lane_width > 0.0:
            raise ValueError("lane_width must be > 0")
        self.segments = list(segments)
        self.lane_width = lane_width
        # precompute world pose at the start of every segment
        self._starts = [0.0]
        self._poses = [(0.0, 0.0, 0.0)]
        x = y = h = 0.0
        for seg in self.segments:
            if seg.curvature == 0.0:
                x += seg.length * math.cos(h)
                y += seg.length * math.sin(h)
            else:
                k = seg.curvature
                dh = k * seg.length
                x += (math.sin(h + dh) - math.sin(h)) / k
                y += (math.cos(h) - math.cos(h + dh)) / k
                h += dh
            self._starts.append(self._starts[-1] + seg.length)
            self._poses.append((x, y, h))

    @property
    def total_length(self) -> float:
        return self._starts[-1]

    def lane_center(self, lane: str) -> float:
        offsets = {"left": self.lane_width, "ego": 0.0, "right": -self.lane_width}
        return offsets[lane]

    def pose_at(self, s: float) -> Pose:
        """World pose of the centerline at arc length s."""
        if s < 0.0 or s > self.total_length:
            raise ValueError(f"arc length {s} outside road [0, {self.total_length}]")
        idx = bisect.bisect_right(self._starts, s) - 1
        idx = min(idx, len(self.segments) - 1)
        x0, y0, h0 = self._poses[idx]
        ds = s - self._starts[idx]
        seg = self.segments[idx]
        if seg.curvature == 0.0:
            return Pose(Vec2(x0 + ds * math.cos(h0), y0 + ds * math.sin(h0)), h0)
        k = seg.curvature
        dh = k * ds
        x = x0 + (math.sin(h0 + dh) - math.sin(h0)) / k
        y = y0 + (math.cos(h0) - math.cos(h0 + dh)) / k
        return Pose(Vec2(x, y), h0 + dh)

    def frenet_to_world(self, s: float, d: float) -> Pose:
        """World pose at arc length s, offset d to the left of the centerline."""
        pose = self.pose_at(s)
        nx, ny = -math.sin(pose.heading), math.cos(pose.heading)
        return Pose(Vec2(pose.position.x + d * nx, pose.position.y + d * ny),
                    pose.heading)


@dataclass(frozen=True, slots=True)
class VehicleSpec:
    id: int
    lane: str
    speed: float  # m/s, constant
    start_s: float  # initial centerline arc length
    lateral_in_lane: float = 0.0  # offset from the lane center, left-positive

    def __post_init__(self):
        if self.lane not in LANES:
            raise ValueError(f"unknown lane {self.lane!r}")
        if not self.speed > 0.0:
            raise ValueError("speed must be > 0")


@dataclass(frozen=True, slots=True)
class ScenarioConfig:
    road: RoadModel
    vehicles: tuple[VehicleSpec, ...]
    duration: float = 60.0

    def __post_init__(self):
        ids = [v.id for v in self.vehicles]
        if len(set(ids)) != len(ids):
            raise ValueError("vehicle ids must be unique")
        if 0 not in ids:
            raise ValueError("scenario needs an ego vehicle with id 0")

    def lateral_of(self, vehicle: VehicleSpec) -> float:
        return self.road.lane_center(vehicle.lane) + vehicle.lateral_in_lane


@dataclass(frozen=True, slots=True)
class ScenarioState:
    config: ScenarioConfig
    t: float = 0.0
    s: dict[int, float] = field(default_factory=dict)

    @classmethod
    def initial(cls, config: ScenarioConfig) -> "ScenarioState":
        return cls(config, 0.0, {v.id: v.start_s for v in config.vehicles})


def advance(state: ScenarioState, dt: float) -> ScenarioState:
    """Move every vehicle dt seconds along its lane at constant speed."""
    new_s = {v.id: state.s[v.id] + v.speed * dt
             for v in state.config.vehicles}
    return replace(state, t=state.t + dt, s=new_s)


@dataclass(frozen=True, slots=True)
class VehicleTruth:
    """Ego-relative pose and over-ground velocity (ego axes, m/s)."""

    position: Vec2
    heading: float
    velocity: Vec2


@dataclass(frozen=True, slots=True)
class GroundTruthFrame:
    t: float
    ego_world: Pose
    vehicles: dict[int, VehicleTruth]


def ground_truth_frame(state: ScenarioState) -> GroundTruthFrame:
    cfg = state.config
    world: dict[int, tuple[Pose, Vec2]] = {}
    for v in cfg.vehicles:
        pose = cfg.road.frenet_to_world(state.s[v.id], cfg.lateral_of(v))
        vel = Vec2(v.speed * math.cos(pose.heading),
                   v.speed * math.sin(pose.heading))
        world[v.id] = (pose, vel)

    ego_pose, _ = world[0]
    ce, se = math.cos(ego_pose.heading), math.sin(ego_pose.heading)
    vehicles = {}
    for vid, (pose, vel) in world.items():
        dx = pose.position.x - ego_pose.position.x
        dy = pose.position.y - ego_pose.position.y
        vehicles[vid] = VehicleTruth(
            position=Vec2(ce * dx + se * dy, -se * dx + ce * dy),
            heading=normalize_angle(pose.heading - ego_pose.heading),
            velocity=Vec2(ce * vel.x + se * vel.y, -se * vel.x + ce * vel.y),
        )
    return GroundTruthFrame(state.t, ego_pose, vehicles)


def build_default_road(needed_length: float, lane_width: float = 3.5,
                       straight_length: float = 500.0,
                       arc_radius: float = 1000.0,
                       arc_length: float = 400.0) -> RoadModel:
    """Alternating straight and arc segments, curvature flipping sign."""
    segments: list[RoadSegment] = []
    total = 0.0
    sign = 1.0
    while total < needed_length:
        segments.append(RoadSegment(straight_length, 0.0))
        total += straight_length
        if total >= needed_length:
            break
        segments.append(RoadSegment(arc_length, sign / arc_radius))
        total += arc_length
        sign = -sign
    return RoadModel(segments, lane_width)


def build_default_scenario(duration: float = 60.0,
                           lane_width: float = 3.5,
                           v_ego: float = 25.0, v1: float = 33.0,
                           v2: float = 25.0, v3: float = 23.0,
                           d12: float = 3.2, d23: float = 3.7,
                           id1_offset: float = -60.0,
                           id2_offset: float = 30.0,
                           id3_offset: float = 20.0,
                           straight_length: float = 500.0,
                           arc_radius: float = 1000.0,
                           arc_length: float = 400.0) -> ScenarioConfig:
    """Three-lane highway usecase with the default vehicle kinematics.

    The ego and ID:2 share the center lane (time gap id2_offset / v2); ID:1
    approaches on the left lane, ID:3 is slower on the right lane.  Lane
    placement realizes the configured lateral separations exactly: ID:2 sits
    at the center-lane middle, ID:1 at +d12 and ID:3 at -d23.
    """
    ego_s0 = max(0.0, -min(id1_offset, id2_offset, id3_offset))
    max_travel = ego_s0 + max(id1_offset, id2_offset, id3_offset) \
        + max(v_ego, v1, v2, v3) * duration + 100.0
    road = build_default_road(max_travel, lane_width, straight_length,
                              arc_radius, arc_length)
    vehicles = (
        VehicleSpec(0, "ego", v_ego, ego_s0, 0.0),
        VehicleSpec(1, "left", v1, ego_s0 + id1_offset, d12 - lane_width),
        VehicleSpec(2, "ego", v2, ego_s0 + id2_offset, 0.0),
        VehicleSpec(3, "right", v3, ego_s0 + id3_offset, lane_width - d23),
    )
    return ScenarioConfig(road, vehicles, duration)


def write_ground_truth_csv(config: ScenarioConfig, cycle_duration: float,
                           path) -> None:
    """Dump per-cycle ego-relative ground truth for offline inspection."""
    n_cycles = int(round(config.duration / cycle_duration))
    state = ScenarioState.initial(config)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["cycle", "id", "x", "y", "heading", "vx", "vy"])
        for cycle in range(n_cycles):
            frame = ground_truth_frame(state)
            for vid in sorted(frame.vehicles):
                veh = frame.vehicles[vid]
                writer.writerow([cycle, vid,
                                 f"{veh.position.x:.6f}", f"{veh.position.y:.6f}",
                                 f"{veh.heading:.6f}",
                                 f"{veh.velocity.x:.6f}", f"{veh.velocity.y:.6f}"])
            state = advance(state, cycle_duration)
