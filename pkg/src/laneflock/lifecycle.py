"""Flock management: creation, spawning cadence, aging and the cycle step.

One flock exists per currently tracked object.  Boids spawn on a nominal
spawn-interval grid (at most one per flock per cycle, skipped slots are
dropped), live for a bounded number of cycles and are refilled by later
spawns.  `step_cycle` evaluates all steering rules against a frozen
start-of-cycle snapshot and commits the Dubins-filtered updates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import Vec2, Pose, heading_of
from .flocking import (
    Boid,
    Flock,
    LeadState,
    RuleWeights,
    visible_set,
    rule_separation,
    rule_cohesion,
    rule_leader_cohesion,
    rule_alignment,
    rule_leader_alignment,
    neighbor_flock_centers,
    rule_flock_repulsion,
    velocity_update,
    position_update,
)
from .dubins import (
    ReachabilityPolicy,
    min_turn_radius,
    constrain_update,
)
from .rng import LazyGenerator

_EPS = 1e-9


@dataclass(frozen=True, slots=True)
class LifecycleConfig:
    cycle_duration: float = 0.08  # seconds
    spawn_interval: float = 0.1  # seconds
    target_flock_size: int = 7
    # Boid lifetime also bounds how long a degraded boid can distort the
    # swarm mean: a boid frozen by the reachability filter dead-reckons on
    # a stale velocity until it ages out and respawns at its lead.
    max_boid_age: int = 200  # cycles
    # Longitudinal jitter keeps co-spawned boids apart (coincident boids
    # degenerate the separation rule).  The lateral jitter is much smaller:
    # a boid's pursuit of its lead is an undamped oscillation whose
    # amplitude is set by the spawn offset, and the reachability filter
    # only admits lateral corrections of a few centimeters per cycle.
    spawn_jitter: float = 0.2  # meters, longitudinal
    spawn_jitter_lateral: float = 0.002  # meters

    def __post_init__(self):
        if not self.cycle_duration > 0.0:
            raise ValueError("cycle_duration must be > 0")
        if not self.spawn_interval > 0.0:
            raise ValueError("spawn_interval must be > 0")
        if self.target_flock_size < 1:
            raise ValueError("target_flock_size must be >= 1")


def spawn_schedule(config: LifecycleConfig, n_boids: int) -> list[int]:
    """Cycle indices at which a fresh flock spawns its first n_boids boids.

    The first boid spawns at flock creation.  Afterwards a boid spawns as
    soon as a full spawn interval has elapsed since the last credited slot;
    the credit advances on the nominal interval grid, so late spawns do not
    compress later ones.
    """
    out = []
    last = None
    cycle = 0
    while len(out) < n_boids:
        now = cycle * config.cycle_duration
        if last is None:
            out.append(cycle)
            last = now
        else:
            elapsed = now - last
            if elapsed >= config.spawn_interval - _EPS:
                out.append(cycle)
                last += config.spawn_interval * math.ceil(
                    elapsed / config.spawn_interval - _EPS)
        cycle += 1
    return out


class FlockManager:
    """Owns all flocks; one per tracked object, no flock without a lead."""

    def __init__(self, config: LifecycleConfig):
        self.config = config
        self.flocks: dict[int, Flock] = {}
        self._last_spawn: dict[int, float | None] = {}
        # raw (never reframed) previous tracker output per flock; spawn anchor
        self._raw_lead: dict[int, LeadState] = {}
        self.cycle = 0
        self._next_boid_id = 0
        # ego yaw rate (rad/s) from the latest reframe; see _spawn_one
        self._yaw_rate = 0.0

    @property
    def now(self) -> float:
        return self.cycle * self.config.cycle_duration

    def total_boids(self) -> int:
        return sum(len(f.boids) for f in self.flocks.values())

    def reframe(self, shift) -> None:
        """Re-express all state in a new ego frame (see geometry.FrameShift)."""
        self._yaw_rate = -shift.rotation() / self.config.cycle_duration
        for flock in self.flocks.values():
            for boid in flock.boids:
                # Boid state lives in road-relative coordinates: the ego's
                # heading change on a curve is the road's own change of
                # direction, so only the translation of the frame applies to
                # positions and velocities keep their components.  The full
                # rigid map would either drag every lane-keeping boid
                # sideways by its longitudinal offset times the turned angle
                # per cycle (positions) or send any boid coasting on its
                # previous velocity off the curve on a world-frame tangent
                # (velocities).
                boid.position = shift.comoving_point(boid.position)
            # lead_prev intentionally keeps the tracker's raw previous-cycle
            # numbers: spawning re-expresses "at the lead vehicle" in the
            # current frame, not at the lead's world-trail point one cycle
            # back (which would seed every new boid with a position error of
            # one ego travel distance).
            lead = flock.lead
            if lead is not None:
                flock.lead = LeadState(shift.point(lead.position),
                                       shift.vector(lead.velocity))

    def sync_flocks(self, tracked) -> None:
        """Create/remove flocks so they mirror the tracked-object set."""
        ids = [t.id for t in tracked]
        if len(set(ids)) != len(ids):
            raise ValueError("tracked ids must be unique")
        seen = set()
        for obj in tracked:
            seen.add(obj.id)
            state = LeadState(obj.position, obj.velocity)
            flock = self.flocks.get(obj.id)
            if flock is None:
                self.flocks[obj.id] = Flock(obj.id, [], lead=state,
                                            lead_prev=state)
                self._last_spawn[obj.id] = None
            else:
                flock.lead_prev = self._raw_lead[obj.id]
                flock.lead = state
            self._raw_lead[obj.id] = state
        for fid in [fid for fid in self.flocks if fid not in seen]:
            del self.flocks[fid]
            del self._last_spawn[fid]
            del self._raw_lead[fid]

    def spawn_boids(self, rng) -> None:
        """Spawn at most one boid per under-full flock per cycle."""
        cfg = self.config
        now = self.now
        for fid in sorted(self.flocks):
            flock = self.flocks[fid]
            if len(flock.boids) >= cfg.target_flock_size:
                continue
            last = self._last_spawn[fid]
            if last is None:
                self._spawn_one(flock, rng)
                self._last_spawn[fid] = now
            else:
                elapsed = now - last
                if elapsed >= cfg.spawn_interval - _EPS:
                    self._spawn_one(flock, rng)
                    self._last_spawn[fid] = last + cfg.spawn_interval * math.ceil(
                        elapsed / cfg.spawn_interval - _EPS)

    def _spawn_one(self, flock: Flock, rng) -> None:
        cfg = self.config
        lead = flock.lead_prev if flock.lead_prev is not None else flock.lead
        jx = cfg.spawn_jitter * (2.0 * rng.random() - 1.0)
        jy = cfg.spawn_jitter_lateral * (2.0 * rng.random() - 1.0)
        # Boid velocities are road-relative (see reframe), while the tracker
        # reports velocity in instantaneous ego axes.  When the ego yaws, a
        # lane-keeping lead carries an apparent rotation-field velocity
        # omega x p on top of its road-relative motion; subtract it so boids
        # spawned on a curve do not inherit a phantom lateral drift.
        vx, vy = self._comoving_velocity(lead)
        boid = Boid(
            id=self._next_boid_id,
            position=Vec2(lead.position.x + jx, lead.position.y + jy),
            velocity=Vec2(vx, vy) * cfg.cycle_duration,
        )
        self._next_boid_id += 1
        flock.boids.append(boid)

    def _comoving_velocity(self, lead: LeadState) -> tuple[float, float]:
        """Lead velocity (m/s) expressed in the boids' road-relative frame.

        The tracker reports velocity in instantaneous ego axes.  When the
        ego yaws, a lane-keeping lead carries an apparent rotation-field
        velocity omega x p on top of its road-relative motion; subtract it
        so the value used for spawning and leader alignment does not carry
        a phantom lateral drift on curves.
        """
        om = self._yaw_rate
        return (lead.velocity.x + om * lead.position.y,
                lead.velocity.y - om * lead.position.x)

    def step_cycle(self, weights: RuleWeights, ellipse, policy: ReachabilityPolicy,
                   boid_rng_factory) -> None:
        """Advance every boid one cycle against the start-of-cycle snapshot.

        boid_rng_factory(flock_id, boid_id, cycle) must return a generator;
        it is only invoked when a proposal needs perturbing.
        """
        cfg = self.config
        flock_list = sorted(self.flocks.values(), key=lambda f: f.flock_id)
        updates: list[tuple[Boid, Vec2, Vec2]] = []

        for flock in flock_list:
            foreign = [f for f in flock_list if f.flock_id != flock.flock_id]
            lead_pos = flock.lead.position
            lead_speed = flock.lead.velocity.norm()
            lvx, lvy = self._comoving_velocity(flock.lead)
            lead_vel = Vec2(lvx * cfg.cycle_duration, lvy * cfg.cycle_duration)
            for boid in flock.boids:
                visible = visible_set(boid, flock, ellipse)
                r_sep = rule_separation(boid, visible)
                r_coh = rule_cohesion(boid, visible)
                r_cohl = rule_leader_cohesion(boid, lead_pos)
                r_ali = rule_alignment(boid, visible)
                r_alil = rule_leader_alignment(boid, lead_vel)
                centers = neighbor_flock_centers(boid, foreign, ellipse)
                repulsion = rule_flock_repulsion(boid, centers, weights.g_rep)
                new_v = velocity_update(boid, r_coh, r_cohl, r_ali, r_alil,
                                        r_sep, repulsion, weights)
                # Limit the speed change per cycle (policy accel budget);
                # direction is left alone, the reachability test owns it.
                dv_cap = policy.max_longitudinal_accel * cfg.cycle_duration ** 2
                cur_speed = boid.velocity.norm()
                prop_speed = new_v.norm()
                if prop_speed > cur_speed + dv_cap:
                    new_v = new_v * ((cur_speed + dv_cap) / prop_speed)
                elif 0.0 < prop_speed < cur_speed - dv_cap:
                    new_v = new_v * ((cur_speed - dv_cap) / prop_speed)
                new_p = position_update(boid, new_v)

                # Radius of the maneuver under test: the boid's speed changes
                # from the current to the proposed value during the cycle, so
                # the tightest radius it can command corresponds to the lower
                # of the two (a braking vehicle turns tighter); it is further
                # capped by the lead's radius so a boid that got fast never
                # inflates its own radius to where it can no longer brake.
                speed = min(boid.velocity.norm() / cfg.cycle_duration,
                            new_v.norm() / cfg.cycle_duration,
                            lead_speed)
                radius = min_turn_radius(speed, policy.max_lateral_accel,
                                         policy.radius_floor)
                start = Pose(boid.position, heading_of(boid.velocity))
                proposed = Pose(new_p, heading_of(new_v))
                rng = LazyGenerator(
                    lambda fid=flock.flock_id, bid=boid.id, cyc=self.cycle:
                    boid_rng_factory(fid, bid, cyc))
                pose, velocity, _ = constrain_update(
                    start, boid.velocity, proposed, new_v, radius, policy, rng,
                    max_speed_change=dv_cap)
                updates.append((boid, pose.position, velocity))

        for boid, position, velocity in updates:
            boid.position = position
            boid.velocity = velocity
            boid.age_cycles += 1

        for flock in flock_list:
            flock.boids = [b for b in flock.boids
                           if b.age_cycles <= cfg.max_boid_age]

        self.cycle += 1
