import math

import numpy as np
import pytest

from gridcast.errors import DataError
from gridcast.sim.actors import Actor, Behavior, StepParams, spawn_actor, step_actor
from gridcast.sim.flow import compute_flow_field
from gridcast.sim.world import WorldMap

from conftest import make_box_world

FAR_ROBOT = np.array([1000.0, 1000.0])


def _step(actor, world, rng=None, dt=0.1, params=None, flows=None, goals=None):
    rng = rng or np.random.default_rng(0)
    params = params or StepParams()
    return step_actor(actor, world, [], FAR_ROBOT, 0.3, flows, dt, rng, params, goals)


def test_bouncer_specular_reflection_off_vertical_wall(box_world):
    a = Actor(pos=np.array([9.5, 4.0]), vel=np.array([1.0, 0.0]), behavior=Behavior.BOUNCER, speed=1.0, radius=0.3)
    out = _step(a, box_world, dt=1.0)
    assert np.allclose(out.vel, [-1.0, 0.0], atol=1e-9)
    assert abs(np.linalg.norm(out.vel) - 1.0) < 1e-12


def test_bouncer_speed_preserved_over_many_bounces(box_world):
    rng = np.random.default_rng(7)
    a = Actor(
        pos=np.array([5.0, 4.0]),
        vel=2.0 * np.array([math.cos(0.83), math.sin(0.83)]),
        behavior=Behavior.BOUNCER,
        speed=2.0,
        radius=0.25,
    )
    for _ in range(500):
        a = _step(a, box_world, rng=rng, dt=0.1)
        assert abs(np.linalg.norm(a.vel) - 2.0) < 1e-9


def test_containment_never_leaves_bounds():
    world = make_box_world(6.0, 5.0)
    rng = np.random.default_rng(3)
    actors = [
        spawn_actor(np.array([1.0 + k, 2.0]), Behavior.BOUNCER, 3.0, 0.2, world, rng) for k in range(4)
    ]
    for _ in range(400):
        for i in range(len(actors)):
            others = actors[:i] + actors[i + 1 :]
            actors[i] = step_actor(
                actors[i], world, others, FAR_ROBOT, 0.3, None, 0.1, rng, StepParams()
            )
            x, y = actors[i].pos
            assert 0.0 <= x <= 6.0 and 0.0 <= y <= 5.0


def test_wanderer_with_zero_noise_matches_bouncer(box_world):
    start = np.array([2.0, 2.0])
    vel = np.array([0.7, 0.4])
    speed = float(np.linalg.norm(vel))
    b = Actor(pos=start.copy(), vel=vel.copy(), behavior=Behavior.BOUNCER, speed=speed, radius=0.3)
    w = Actor(pos=start.copy(), vel=vel.copy(), behavior=Behavior.WANDERER, speed=speed, radius=0.3)
    params = StepParams(eta=0.0)
    rng_b, rng_w = np.random.default_rng(0), np.random.default_rng(0)
    for _ in range(200):
        b = step_actor(b, box_world, [], FAR_ROBOT, 0.3, None, 0.1, rng_b, params)
        w = step_actor(w, box_world, [], FAR_ROBOT, 0.3, None, 0.1, rng_w, params)
        assert np.allclose(b.pos, w.pos, atol=1e-12)
        assert np.allclose(b.vel, w.vel, atol=1e-12)


def test_wanderer_turns_away_from_robot(box_world):
    a = Actor(pos=np.array([5.0, 4.0]), vel=np.array([1.0, 0.0]), behavior=Behavior.WANDERER, speed=1.0, radius=0.3)
    robot = np.array([5.8, 4.0])  # dead ahead, inside repulsion radius
    rng = np.random.default_rng(0)
    out = step_actor(a, box_world, [], robot, 0.3, None, 0.05, rng, StepParams(eta=0.0))
    # velocity rotated away from the straight-at-robot direction
    assert out.vel[0] < 1.0 - 1e-6 or abs(out.vel[1]) > 1e-6


def test_flow_follower_corridor_travel_time():
    # straight corridor: arrival time matches distance/speed within 2 sim steps
    world = make_box_world(12.0, 2.0)
    goal = np.array([10.0, 1.0])
    field = compute_flow_field(world, [goal], dl_flow=0.25, clearance=0.3)
    a = Actor(pos=np.array([2.0, 1.0]), vel=np.array([1.0, 0.0]), behavior=Behavior.FLOW, speed=1.0, radius=0.2)
    a.goal_idx = 0
    params = StepParams(goal_tolerance=0.1)
    rng = np.random.default_rng(0)
    dt = 0.05
    path_len = np.linalg.norm(goal - a.pos)
    t, arrived = 0.0, None
    for _ in range(int(20.0 / dt)):
        a = step_actor(a, world, [], FAR_ROBOT, 0.3, [field], dt, rng, params, [goal])
        t += dt
        if np.linalg.norm(a.pos - goal) < params.goal_tolerance:
            arrived = t
            break
    assert arrived is not None
    assert abs(arrived - path_len / a.speed) <= 2.0 * dt + params.goal_tolerance / a.speed


def test_flow_follower_draws_new_goal_on_arrival():
    world = make_box_world(12.0, 4.0)
    goals = [np.array([10.0, 2.0]), np.array([2.0, 2.0])]
    fields = [compute_flow_field(world, [g], dl_flow=0.25) for g in goals]
    a = Actor(pos=np.array([9.7, 2.0]), vel=np.array([1.0, 0.0]), behavior=Behavior.FLOW, speed=1.0, radius=0.2)
    a.goal_idx = 0
    rng = np.random.default_rng(1)
    out = step_actor(a, world, [], FAR_ROBOT, 0.3, fields, 0.1, rng, StepParams(), goals)
    assert out.goal_idx == 1


def test_spawn_inside_obstacle_errors(box_world):
    rng = np.random.default_rng(0)
    with pytest.raises(DataError, match="spawned inside"):
        spawn_actor(np.array([0.1, 4.0]), Behavior.BOUNCER, 1.0, 0.3, box_world, rng)


def test_dt_must_be_positive(box_world):
    a = Actor(pos=np.array([5.0, 4.0]), vel=np.array([1.0, 0.0]), behavior=Behavior.BOUNCER, speed=1.0, radius=0.3)
    with pytest.raises(DataError):
        _step(a, box_world, dt=0.0)


def test_actor_actor_bounce(box_world):
    a = Actor(pos=np.array([4.0, 4.0]), vel=np.array([1.0, 0.0]), behavior=Behavior.BOUNCER, speed=1.0, radius=0.3)
    b = Actor(pos=np.array([5.0, 4.0]), vel=np.array([0.0, 0.0]), behavior=Behavior.BOUNCER, speed=0.0, radius=0.3)
    rng = np.random.default_rng(0)
    out = step_actor(a, box_world, [b], FAR_ROBOT, 0.3, None, 1.0, rng, StepParams())
    assert out.vel[0] < 0.0  # reflected off the other disc
    assert abs(np.linalg.norm(out.vel) - 1.0) < 1e-9
