"""Goal-directed force fields from a multi-source Dijkstra wavefront."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from ..errors import DataError
from .world import FreeGrid, WorldMap, build_free_grid

# fixed neighbor order: ties in the descent direction resolve deterministically
_NEIGHBORS = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))


@dataclass
class FlowField:
    grid: FreeGrid
    dist: np.ndarray  # [H,W] shortest-path metric distance to nearest goal
    vectors: np.ndarray  # [H,W,2] unit descent directions (0 at goals/unreachable/blocked)
    goals: list[np.ndarray]

    def direction_at(self, p: np.ndarray) -> np.ndarray:
        i, j = self.grid.cell_of(p)
        if not self.grid.in_grid(i, j):
            return np.zeros(2)
        return self.vectors[i, j]


def compute_flow_field(
    world: WorldMap,
    goals: list[np.ndarray],
    dl_flow: float,
    clearance: float = 0.3,
    grid: FreeGrid | None = None,
) -> FlowField:
    """Unit force field descending the wavefront distance-to-nearest-goal."""
    if grid is None:
        grid = build_free_grid(world, dl_flow, clearance)
    h, w = grid.blocked.shape
    dist = np.full((h, w), np.inf)
    heap: list[tuple[float, int, int]] = []
    for g in goals:
        i, j = grid.cell_of(np.asarray(g, dtype=np.float64))
        if not grid.in_grid(i, j) or grid.blocked[i, j]:
            raise DataError(f"flow goal ({g[0]:.3f}, {g[1]:.3f}) is not in free space")
        if dist[i, j] > 0.0:
            dist[i, j] = 0.0
            heapq.heappush(heap, (0.0, i, j))
    while heap:
        d, i, j = heapq.heappop(heap)
        if d > dist[i, j]:
            continue
        for di, dj in _NEIGHBORS:
            ni, nj = i + di, j + dj
            if not grid.in_grid(ni, nj) or grid.blocked[ni, nj]:
                continue
            step = grid.dl * (math.sqrt(2.0) if di and dj else 1.0)
            nd = d + step
            if nd < dist[ni, nj]:
                dist[ni, nj] = nd
                heapq.heappush(heap, (nd, ni, nj))

    reachable_free = np.isfinite(dist) & ~grid.blocked & (dist > 0.0)
    if not reachable_free.any():
        raise DataError("disconnected flow field")

    vectors = np.zeros((h, w, 2))
    for i in range(h):
        for j in range(w):
            if grid.blocked[i, j] or not np.isfinite(dist[i, j]) or dist[i, j] == 0.0:
                continue
            best = dist[i, j]
            bdir = None
            for di, dj in _NEIGHBORS:
                ni, nj = i + di, j + dj
                if not grid.in_grid(ni, nj) or grid.blocked[ni, nj]:
                    continue
                if dist[ni, nj] < best:
                    best = dist[ni, nj]
                    bdir = (di, dj)
            if bdir is not None:
                v = np.array([bdir[1], bdir[0]], dtype=np.float64)
                vectors[i, j] = v / np.linalg.norm(v)
    return FlowField(grid=grid, dist=dist, vectors=vectors, goals=[np.asarray(g, dtype=np.float64) for g in goals])
