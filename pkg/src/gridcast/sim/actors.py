"""Disc actors: straight-line bouncers, noisy wanderers, flow followers."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from ..errors import DataError
from ..geometry import first_hit_capsules, point_seg_dist, reflect, slerp_dir, unit
from .flow import FlowField
from .world import WorldMap


class Behavior(Enum):
    BOUNCER = "bouncer"
    WANDERER = "wanderer"
    FLOW = "flow"


@dataclass
class Actor:
    pos: np.ndarray
    vel: np.ndarray
    behavior: Behavior
    speed: float
    radius: float
    goal_idx: int = -1


@dataclass
class StepParams:
    eta: float = 0.3  # wanderer per-step heading noise bound (rad)
    repulsion_radius: float = 1.5
    avoidance_radius: float = 0.6
    kappa: float = 0.5  # flow steering gain per step
    goal_tolerance: float = 0.3
    max_substeps: int = 10


def spawn_actor(
    pos: np.ndarray,
    behavior: Behavior,
    speed: float,
    radius: float,
    world: WorldMap,
    rng: np.random.Generator,
    goal_idx: int = -1,
) -> Actor:
    """Create an actor with a random heading; placement inside an obstacle is an error."""
    segs, _ = world.obstacle_segments()
    if segs.shape[0] and float(np.min(point_seg_dist(pos, segs))) < radius:
        raise DataError(f"actor spawned inside an obstacle at ({pos[0]:.3f}, {pos[1]:.3f})")
    ang = rng.uniform(0.0, 2.0 * math.pi)
    vel = speed * np.array([math.cos(ang), math.sin(ang)])
    return Actor(pos=np.asarray(pos, dtype=np.float64), vel=vel, behavior=behavior, speed=speed, radius=radius, goal_idx=goal_idx)


def _integrate(actor: Actor, segs: np.ndarray, circles: np.ndarray, dt: float, max_substeps: int) -> tuple[np.ndarray, np.ndarray]:
    """Advance with specular bounces; a step crossing a surface splits at contact."""
    pos = actor.pos.copy()
    vel = actor.vel.copy()
    remaining = dt
    for _ in range(max_substeps):
        if remaining <= 1e-12:
            break
        hit = first_hit_capsules(pos, vel, remaining, segs, actor.radius, circles)
        if hit is None:
            pos = pos + vel * remaining
            break
        t, n = hit
        pos = pos + vel * t
        vel = reflect(vel, n)
        nv = float(np.linalg.norm(vel))
        if nv > 0.0:
            vel = vel * (actor.speed / nv)
        pos = pos + n * 1e-9
        remaining -= t
    return pos, vel


def step_actor(
    actor: Actor,
    world: WorldMap,
    others: list[Actor],
    robot: np.ndarray,
    robot_radius: float,
    flows: list[FlowField] | None,
    dt: float,
    rng: np.random.Generator,
    params: StepParams,
    goal_set: list[np.ndarray] | None = None,
) -> Actor:
    if dt <= 0.0:
        raise DataError("step_actor requires dt > 0")
    vel = actor.vel.copy()

    if actor.behavior is Behavior.WANDERER:
        ang = rng.uniform(-params.eta, params.eta)
        c, s = math.cos(ang), math.sin(ang)
        vel = np.array([c * vel[0] - s * vel[1], s * vel[0] + c * vel[1]])
        away = actor.pos - robot
        d = float(np.linalg.norm(away))
        if 0.0 < d < params.repulsion_radius:
            frac = 0.5 * (1.0 - d / params.repulsion_radius)
            vel = actor.speed * slerp_dir(unit(vel), away / d, frac)
    elif actor.behavior is Behavior.FLOW:
        if flows is None or not (0 <= actor.goal_idx < len(flows)):
            raise DataError("flow follower stepped without a flow field")
        fdir = flows[actor.goal_idx].direction_at(actor.pos)
        if fdir[0] != 0.0 or fdir[1] != 0.0:
            vel = actor.speed * slerp_dir(unit(vel), fdir, params.kappa)
        away = actor.pos - robot
        d = float(np.linalg.norm(away))
        if 0.0 < d < params.avoidance_radius:
            vel = actor.speed * slerp_dir(unit(vel), away / d, 0.8)

    segs, _ = world.obstacle_segments()
    circ_rows = []
    for o in others:
        circ_rows.append([o.pos[0], o.pos[1], o.radius + actor.radius])
    circ_rows.append([robot[0], robot[1], robot_radius + actor.radius])
    circles = np.array(circ_rows, dtype=np.float64)

    moved = replace(actor, vel=vel)
    pos, vel = _integrate(moved, segs, circles, dt, params.max_substeps)
    out = replace(actor, pos=pos, vel=vel)

    if actor.behavior is Behavior.FLOW and goal_set is not None and 0 <= out.goal_idx < len(goal_set):
        goal = goal_set[out.goal_idx]
        if float(np.linalg.norm(out.pos - goal)) < params.goal_tolerance:
            # new goal drawn from the set, excluding the one just reached
            choices = [k for k in range(len(goal_set)) if k != out.goal_idx]
            if choices:
                out = replace(out, goal_idx=choices[int(rng.integers(0, len(choices)))])
    return out
