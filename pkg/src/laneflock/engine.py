"""Monte-Carlo experiment orchestration.

One run = one seeded pass over the scenario: ground truth -> tracker
surrogate -> flock lifecycle -> separation samples.  Runs are fully
independent and merged by run index, so results do not depend on
execution order.
"""

from __future__ import annotations

from .geometry import FrameShift
from .config import RunConfig
from .lifecycle import FlockManager
from .metrics import (
    PAIRS,
    SeparationSample,
    sample_separation,
    swarm_mean_position,
)
from .rng import derive_seed, mix64, substream, SplitMix64
from .scenario import ScenarioState, advance, ground_truth_frame
from .sensing import observe, schedule_events


def run_seed_for(master_seed: int, run_index: int) -> int:
    return derive_seed(master_seed, run_index)


def simulate_run(config: RunConfig, run_index: int) -> list[SeparationSample]:
    """Execute one seeded scenario pass and return its separation samples."""
    run_seed = run_seed_for(config.master_seed, run_index)
    scenario = config.scenario.build()
    lifecycle_cfg = config.lifecycle_for_nb()
    dt = lifecycle_cfg.cycle_duration
    n_cycles = int(round(scenario.duration / dt))

    events = schedule_events(config.noise, scenario, dt, n_cycles,
                             substream(run_seed, "events"))
    sense_rng = substream(run_seed, "sense")
    spawn_rng = substream(run_seed, "spawn")

    def boid_rng(flock_id: int, boid_id: int, cycle: int):
        return SplitMix64(mix64(run_seed, flock_id, boid_id, cycle))

    manager = FlockManager(lifecycle_cfg)
    state = ScenarioState.initial(scenario)
    prev_ego = None
    samples: list[SeparationSample] = []
    gate = config.parallel_gate

    for cycle in range(n_cycles):
        frame = ground_truth_frame(state)
        if prev_ego is not None:
            manager.reframe(FrameShift(prev_ego, frame.ego_world))
        prev_ego = frame.ego_world

        active = [ep for ep in events if ep.active(cycle)]
        tracked = observe(frame, config.noise, sense_rng, active, cycle)
        manager.sync_flocks(tracked)
        manager.spawn_boids(spawn_rng)

        tracked_by_id = {t.id: t for t in tracked}
        for pair_name, (id_a, id_b) in PAIRS.items():
            truth_a = frame.vehicles.get(id_a)
            truth_b = frame.vehicles.get(id_b)
            s = sample_separation(
                pair_name, "ground-truth",
                truth_a.position if truth_a else None,
                truth_b.position if truth_b else None, cycle, gate)
            if s:
                samples.append(s)

            obj_a = tracked_by_id.get(id_a)
            obj_b = tracked_by_id.get(id_b)
            s = sample_separation(
                pair_name, "tracked",
                obj_a.position if obj_a else None,
                obj_b.position if obj_b else None, cycle, gate)
            if s:
                samples.append(s)

            flock_a = manager.flocks.get(id_a)
            flock_b = manager.flocks.get(id_b)
            s = sample_separation(
                pair_name, "boids",
                swarm_mean_position(flock_a) if flock_a and flock_a.boids else None,
                swarm_mean_position(flock_b) if flock_b and flock_b.boids else None,
                cycle, gate)
            if s:
                samples.append(s)

        manager.step_cycle(config.weights, config.fov, config.reachability,
                           boid_rng)
        state = advance(state, dt)

    return samples


def simulate_many(config: RunConfig) -> list[tuple[int, list[SeparationSample]]]:
    """All Monte-Carlo runs, ordered by run index."""
    return [(run_seed_for(config.master_seed, idx), simulate_run(config, idx))
            for idx in range(config.runs)]
