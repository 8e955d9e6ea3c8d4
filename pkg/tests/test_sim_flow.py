import math

import numpy as np
import pytest

from gridcast.errors import DataError
from gridcast.sim.flow import _NEIGHBORS, compute_flow_field
from gridcast.sim.world import WorldMap, build_free_grid

from conftest import make_box_world


def dijkstra_oracle(grid, goals):
    """Brute-force shortest-path distances by repeated relaxation (no heap)."""
    h, w = grid.blocked.shape
    dist = np.full((h, w), np.inf)
    for g in goals:
        i, j = grid.cell_of(np.asarray(g))
        dist[i, j] = 0.0
    changed = True
    while changed:
        changed = False
        for i in range(h):
            for j in range(w):
                if grid.blocked[i, j]:
                    continue
                for di, dj in _NEIGHBORS:
                    ni, nj = i + di, j + dj
                    if 0 <= ni < h and 0 <= nj < w and not grid.blocked[ni, nj]:
                        step = grid.dl * (math.sqrt(2.0) if di and dj else 1.0)
                        if dist[ni, nj] + step < dist[i, j] - 1e-12:
                            dist[i, j] = dist[ni, nj] + step
                            changed = True
    return dist


def test_cell_next_to_goal_points_at_goal(box_world):
    goal = np.array([5.0, 4.0])
    field = compute_flow_field(box_world, [goal], dl_flow=0.5)
    gi, gj = field.grid.cell_of(goal)
    v = field.vectors[gi, gj + 1]  # one cell to the +x side
    assert np.allclose(v, [-1.0, 0.0])


def test_goal_cell_has_zero_vector(box_world):
    goal = np.array([5.0, 4.0])
    field = compute_flow_field(box_world, [goal], dl_flow=0.5)
    gi, gj = field.grid.cell_of(goal)
    assert np.all(field.vectors[gi, gj] == 0.0)


def test_unit_norm_or_zero(box_world):
    field = compute_flow_field(box_world, [np.array([2.0, 2.0])], dl_flow=0.4)
    norms = np.linalg.norm(field.vectors, axis=2)
    assert np.all((np.abs(norms - 1.0) < 1e-12) | (norms == 0.0))


def test_l_corridor_matches_bruteforce_direction():
    # L-shaped free region: a wall splits the box leaving a bend at the top
    walls = np.array(
        [
            [0.0, 0.0, 8.0, 0.0],
            [8.0, 0.0, 8.0, 6.0],
            [8.0, 6.0, 0.0, 6.0],
            [0.0, 6.0, 0.0, 0.0],
            [4.0, 0.0, 4.0, 4.0],  # interior wall with a gap near y=6
        ]
    )
    world = WorldMap(bounds=(0.0, 0.0, 8.0, 6.0), walls=walls, movables=[])
    goal = np.array([6.5, 2.0])
    field = compute_flow_field(world, [goal], dl_flow=0.5)
    grid = field.grid
    dist = dijkstra_oracle(grid, [goal])
    assert np.allclose(
        np.where(np.isfinite(dist), dist, -1.0), np.where(np.isfinite(field.dist), field.dist, -1.0), atol=1e-9
    )
    # at a probe cell left of the wall, the oracle's steepest-descent neighbor
    # direction must equal the field vector (it must route around the bend)
    for probe in (np.array([2.0, 2.0]), np.array([3.2, 3.5])):
        i, j = grid.cell_of(probe)
        assert np.isfinite(dist[i, j])
        best, bdir = dist[i, j], None
        for di, dj in _NEIGHBORS:
            ni, nj = i + di, j + dj
            if grid.in_grid(ni, nj) and not grid.blocked[ni, nj] and dist[ni, nj] < best:
                best, bdir = dist[ni, nj], (di, dj)
        expect = np.array([bdir[1], bdir[0]], dtype=float)
        expect /= np.linalg.norm(expect)
        assert np.allclose(field.vectors[i, j], expect)
        assert expect[1] > 0.0  # routes up toward the gap, not into the wall


def test_goal_inside_obstacle_rejected(box_world):
    with pytest.raises(DataError):
        compute_flow_field(box_world, [np.array([0.05, 0.05])], dl_flow=0.5)


def test_disconnected_flow_field_errors(box_world):
    grid = build_free_grid(box_world, 0.5, 0.3)
    blocked = np.ones_like(grid.blocked)
    gi, gj = grid.cell_of(np.array([5.0, 4.0]))
    blocked[gi, gj] = False  # the goal sits on an isolated free island
    blocked[4, 4] = False  # another free cell that cannot reach it
    grid.blocked = blocked
    with pytest.raises(DataError, match="disconnected flow field"):
        compute_flow_field(box_world, [np.array([5.0, 4.0])], 0.5, grid=grid)
