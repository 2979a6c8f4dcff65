"""Boid/flock state and the steering rules.

Six rules act on each boid: separation, cohesion, leader cohesion,
alignment within the own flock, leader alignment and a lateral repulsion
between flocks.  Rule outputs are combined into a velocity update and a
position update.

Boid velocities are stored in meters-per-cycle: the position update adds
the velocity directly, so lead-vehicle speeds in m/s are converted once
at spawn time (and back only for the turn-radius computation).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .geometry import Vec2, FovEllipse, contains_local, heading_of


@dataclass(slots=True)
class Boid:
    id: int
    position: Vec2
    velocity: Vec2
    age_cycles: int = 0


@dataclass(frozen=True, slots=True)
class LeadState:
    """Position (m, ego frame) and over-ground velocity (m/s, ego axes)."""

    position: Vec2
    velocity: Vec2


@dataclass(slots=True)
class Flock:
    flock_id: int
    boids: list[Boid] = field(default_factory=list)
    lead: LeadState | None = None
    lead_prev: LeadState | None = None


@dataclass(frozen=True, slots=True)
class RuleWeights:
    """Per-axis rule weights plus the repulsion range factor g_rep.

    Each weight is applied componentwise (x weight to the longitudinal
    rule component, y weight to the lateral one), which is what allows a
    larger longitudinal than lateral separation.
    """

    w_sep: Vec2 = Vec2(0.15, 0.07)
    w_coh: Vec2 = Vec2(0.4, 0.4)
    w_cohl: Vec2 = Vec2(0.4, 0.2)
    w_ali: Vec2 = Vec2(0.3, 0.3)
    w_alil: Vec2 = Vec2(0.3, 0.3)
    g_rep: float = 1.5

    def __post_init__(self):
        for name in ("w_sep", "w_coh", "w_cohl", "w_ali", "w_alil"):
            w = getattr(self, name)
            if w.x < 0.0 or w.y < 0.0:
                raise ValueError(f"{name} components must be >= 0")
        if not self.g_rep > 0.0:
            raise ValueError("g_rep must be > 0")


@dataclass(frozen=True, slots=True)
class NeighborFlockCenters:
    """Perceived centers of foreign flocks, one per visible flock."""

    centers: tuple[Vec2, ...]


def visible_set(observer: Boid, own_flock: Flock, ellipse: FovEllipse) -> list[Boid]:
    """Flock mates inside the observer's field-of-view ellipse.

    The observer itself is never part of the result.
    """
    heading = heading_of(observer.velocity)
    cos_h, sin_h = math.cos(heading), math.sin(heading)
    px, py = observer.position.x, observer.position.y
    a, b = ellipse.semi_axis_long, ellipse.semi_axis_lat
    out = []
    for peer in own_flock.boids:
        if peer.id == observer.id:
            continue
        if contains_local(peer.position.x - px, peer.position.y - py,
                          cos_h, sin_h, a, b):
            out.append(peer)
    return out


def rule_separation(observer: Boid, visible: list[Boid]) -> Vec2:
    """Sum of offsets pointing away from visible flock mates."""
    sx = sy = 0.0
    for peer in visible:
        sx += observer.position.x - peer.position.x
        sy += observer.position.y - peer.position.y
    return Vec2(sx, sy)


def rule_cohesion(observer: Boid, visible: list[Boid]) -> Vec2:
    """Pull toward the perceived center of the visible flock mates."""
    if not visible:
        return Vec2(0.0, 0.0)
    sx = sy = 0.0
    for peer in visible:
        sx += peer.position.x
        sy += peer.position.y
    n = len(visible)
    return Vec2(sx / n - observer.position.x, sy / n - observer.position.y)


def rule_leader_cohesion(observer: Boid, lead_position: Vec2) -> Vec2:
    """Pull toward the designated leader."""
    return Vec2(lead_position.x - observer.position.x,
                lead_position.y - observer.position.y)


def rule_alignment(observer: Boid, visible: list[Boid]) -> Vec2:
    """Match the mean velocity of the visible flock mates."""
    if not visible:
        return Vec2(0.0, 0.0)
    sx = sy = 0.0
    for peer in visible:
        sx += peer.velocity.x
        sy += peer.velocity.y
    n = len(visible)
    return Vec2(sx / n - observer.velocity.x, sy / n - observer.velocity.y)


def rule_leader_alignment(observer: Boid, lead_velocity: Vec2) -> Vec2:
    """Match the leader's velocity.

    Like leader cohesion, this rule does not go through the field-of-view
    test: the leader is the designated reference and always perceived.
    It damps the leader pursuit — cohesion alone is an undamped oscillator
    around the lead, and with few or no visible mates the in-flock
    alignment rule provides no damping of its own.
    """
    return Vec2(lead_velocity.x - observer.velocity.x,
                lead_velocity.y - observer.velocity.y)


def neighbor_flock_centers(observer: Boid, foreign_flocks: list[Flock],
                           ellipse: FovEllipse) -> NeighborFlockCenters:
    """Perceived center of each foreign flock with at least one visible boid."""
    heading = heading_of(observer.velocity)
    cos_h, sin_h = math.cos(heading), math.sin(heading)
    px, py = observer.position.x, observer.position.y
    a, b = ellipse.semi_axis_long, ellipse.semi_axis_lat
    centers = []
    for flock in foreign_flocks:
        sx = sy = 0.0
        n = 0
        for peer in flock.boids:
            if contains_local(peer.position.x - px, peer.position.y - py,
                              cos_h, sin_h, a, b):
                sx += peer.position.x
                sy += peer.position.y
                n += 1
        if n:
            centers.append(Vec2(sx / n, sy / n))
    return NeighborFlockCenters(tuple(centers))


def rule_flock_repulsion(observer: Boid, centers: NeighborFlockCenters,
                         g_rep: float) -> Vec2:
    """Purely lateral push away from each visible foreign flock center.

    Magnitude exp(g_rep - distance) decays with the Euclidean distance to
    the center; the direction is the sign of the lateral offset, so a
    flock to the right pushes left and vice versa.
    """
    if not g_rep > 0.0:
        raise ValueError("g_rep must be > 0")
    ry = 0.0
    px, py = observer.position.x, observer.position.y
    for c in centers.centers:
        dist = math.hypot(px - c.x, py - c.y)
        dy = py - c.y
        sign = (dy > 0.0) - (dy < 0.0)
        ry += sign * math.exp(g_rep - dist)
    return Vec2(0.0, ry)


def velocity_update(observer: Boid, r_coh: Vec2, r_cohl: Vec2, r_ali: Vec2,
                    r_alil: Vec2, r_sep: Vec2, repulsion: Vec2,
                    weights: RuleWeights) -> Vec2:
    """Combine the weighted rule outputs into the next velocity.

    The repulsion term enters unweighted: its direction selection and
    magnitude are already internal to `rule_flock_repulsion`.
    """
    w = weights
    return Vec2(
        observer.velocity.x
        + w.w_coh.x * r_coh.x + w.w_cohl.x * r_cohl.x
        + w.w_ali.x * r_ali.x + w.w_alil.x * r_alil.x
        + w.w_sep.x * r_sep.x + repulsion.x,
        observer.velocity.y
        + w.w_coh.y * r_coh.y + w.w_cohl.y * r_cohl.y
        + w.w_ali.y * r_ali.y + w.w_alil.y * r_alil.y
        + w.w_sep.y * r_sep.y + repulsion.y,
    )


def position_update(observer: Boid, new_velocity: Vec2) -> Vec2:
    """Next position: trapezoidal step, velocity in meters-per-cycle.

    Averaging the old and new velocity makes the one-cycle displacement
    consistent with a vehicle that changes heading gradually over the
    cycle: the lateral offset matches the mean of the two headings, which
    is exactly the chord of a constant-curvature arc.  Stepping with the
    new velocity alone would displace the boid as if the full turn
    happened instantaneously at the cycle start — a pose transition no
    finite turn radius can reproduce, which the reachability filter would
    then reject for even the gentlest real maneuver.
    """
    return Vec2(observer.position.x + 0.5 * (observer.velocity.x + new_velocity.x),
                observer.position.y + 0.5 * (observer.velocity.y + new_velocity.y))
