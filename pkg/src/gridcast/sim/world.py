"""2D world model: border/interior walls, movable boxes, free-space grid."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .. import labels
from ..config import Config
from ..errors import DataError
from ..geometry import convex_polygon_edges, point_in_convex, points_seg_dist


@dataclass
class WorldMap:
    """Static geometry of one session's world.

    walls are shared across sessions of the same environment; movables are
    re-placed per session.
    """

    bounds: tuple[float, float, float, float]  # xmin, ymin, xmax, ymax
    walls: np.ndarray  # [S,4] segments
    movables: list[np.ndarray] = field(default_factory=list)  # convex vertex loops

    def __post_init__(self):
        if self.walls.size and np.any(
            np.hypot(self.walls[:, 2] - self.walls[:, 0], self.walls[:, 3] - self.walls[:, 1]) <= 0.0
        ):
            raise DataError("wall segment with zero length")
        for poly in self.movables:
            if not self._inside_bounds(poly):
                raise DataError("movable polygon outside world bounds")

    def _inside_bounds(self, poly: np.ndarray) -> bool:
        xmin, ymin, xmax, ymax = self.bounds
        return bool(
            np.all(poly[:, 0] >= xmin)
            and np.all(poly[:, 0] <= xmax)
            and np.all(poly[:, 1] >= ymin)
            and np.all(poly[:, 1] <= ymax)
        )

    def obstacle_segments(self) -> tuple[np.ndarray, np.ndarray]:
        """All wall and movable-edge segments with their semantic labels."""
        segs = [self.walls]
        labs = [np.full(self.walls.shape[0], labels.PERMANENT, dtype=np.uint8)]
        for poly in self.movables:
            e = convex_polygon_edges(poly)
            segs.append(e)
            labs.append(np.full(e.shape[0], labels.MOVABLE, dtype=np.uint8))
        return np.concatenate(segs, axis=0), np.concatenate(labs)

    def clearance(self, p: np.ndarray) -> float:
        """Distance from p to the nearest wall or movable edge (0 if inside a movable)."""
        segs, _ = self.obstacle_segments()
        d = math.inf
        for s in segs:
            d = min(d, float(points_seg_dist(p[None, :], s)[0]))
        for poly in self.movables:
            if point_in_convex(p, poly):
                return 0.0
        return d


@dataclass
class FreeGrid:
    """Coarse occupancy of free space used for flow fields and tour planning."""

    origin: np.ndarray  # world coords of cell (0,0) center
    dl: float
    blocked: np.ndarray  # [H,W] bool

    def cell_of(self, p: np.ndarray) -> tuple[int, int]:
        j = int(math.floor((p[0] - self.origin[0]) / self.dl + 0.5))
        i = int(math.floor((p[1] - self.origin[1]) / self.dl + 0.5))
        return i, j

    def center_of(self, i: int, j: int) -> np.ndarray:
        return self.origin + np.array([j * self.dl, i * self.dl])

    def in_grid(self, i: int, j: int) -> bool:
        return 0 <= i < self.blocked.shape[0] and 0 <= j < self.blocked.shape[1]

    def is_free(self, p: np.ndarray) -> bool:
        i, j = self.cell_of(p)
        return self.in_grid(i, j) and not self.blocked[i, j]


def build_free_grid(world: WorldMap, dl: float, clearance: float) -> FreeGrid:
    xmin, ymin, xmax, ymax = world.bounds
    w = int(math.floor((xmax - xmin) / dl)) + 1
    h = int(math.floor((ymax - ymin) / dl)) + 1
    origin = np.array([xmin, ymin])
    xs = origin[0] + np.arange(w) * dl
    ys = origin[1] + np.arange(h) * dl
    gx, gy = np.meshgrid(xs, ys)
    centers = np.stack([gx.ravel(), gy.ravel()], axis=1)
    blocked = np.zeros(centers.shape[0], dtype=bool)
    segs, _ = world.obstacle_segments()
    for s in segs:
        blocked |= points_seg_dist(centers, s) < clearance
    for poly in world.movables:
        d = np.roll(poly, -1, axis=0) - poly
        rel = centers[:, None, :] - poly[None, :, :]
        cross = d[None, :, 0] * rel[:, :, 1] - d[None, :, 1] * rel[:, :, 0]
        inside = np.all(cross >= 0.0, axis=1) | np.all(cross <= 0.0, axis=1)
        blocked |= inside
    # cells outside the walls (border margin) are blocked too
    margin = (
        (centers[:, 0] < xmin + clearance)
        | (centers[:, 0] > xmax - clearance)
        | (centers[:, 1] < ymin + clearance)
        | (centers[:, 1] > ymax - clearance)
    )
    blocked |= margin
    return FreeGrid(origin=origin, dl=dl, blocked=blocked.reshape(h, w))


def _rect(cx: float, cy: float, wx: float, wy: float, angle: float) -> np.ndarray:
    base = np.array([[-wx, -wy], [wx, -wy], [wx, wy], [-wx, wy]]) * 0.5
    c, s = math.cos(angle), math.sin(angle)
    r = np.array([[c, -s], [s, c]])
    return base @ r.T + np.array([cx, cy])


def generate_walls(cfg: Config, rng: np.random.Generator) -> tuple[tuple[float, float, float, float], np.ndarray]:
    """Border walls plus randomized interior walls with door gaps."""
    w, h = cfg["sim.arena_w"], cfg["sim.arena_h"]
    bounds = (0.0, 0.0, w, h)
    segs = [
        (0.0, 0.0, w, 0.0),
        (w, 0.0, w, h),
        (w, h, 0.0, h),
        (0.0, h, 0.0, 0.0),
    ]
    door = cfg["sim.door_width"]
    for _ in range(cfg["sim.n_interior_walls"]):
        vertical = bool(rng.integers(0, 2))
        if vertical:
            x = rng.uniform(0.2 * w, 0.8 * w)
            gap_c = rng.uniform(door, h - door)
            segs.append((x, 0.0, x, max(0.0, gap_c - door / 2)))
            segs.append((x, min(h, gap_c + door / 2), x, h))
        else:
            y = rng.uniform(0.2 * h, 0.8 * h)
            gap_c = rng.uniform(door, w - door)
            segs.append((0.0, y, max(0.0, gap_c - door / 2), y))
            segs.append((min(w, gap_c + door / 2), y, w, y))
    arr = np.array(segs, dtype=np.float64)
    keep = np.hypot(arr[:, 2] - arr[:, 0], arr[:, 3] - arr[:, 1]) > 1e-9
    return bounds, arr[keep]


def place_movables(
    bounds: tuple[float, float, float, float],
    walls: np.ndarray,
    cfg: Config,
    rng: np.random.Generator,
) -> list[np.ndarray]:
    """Session-specific movable boxes in free space, clear of walls and each other."""
    xmin, ymin, xmax, ymax = bounds
    out: list[np.ndarray] = []
    presence = cfg["sim.movable_presence"]
    for _ in range(cfg["sim.n_movables"]):
        present = rng.uniform() < presence
        size = rng.uniform(cfg["sim.movable_min"], cfg["sim.movable_max"], size=2)
        angle = rng.uniform(0.0, math.pi)
        placed = None
        for _try in range(200):
            cx = rng.uniform(xmin + 1.0, xmax - 1.0)
            cy = rng.uniform(ymin + 1.0, ymax - 1.0)
            poly = _rect(cx, cy, size[0], size[1], angle)
            rad = float(np.max(np.linalg.norm(poly - [cx, cy], axis=1)))
            ok = all(points_seg_dist(np.array([[cx, cy]]), s)[0] > rad + 0.3 for s in walls)
            ok = ok and all(
                np.linalg.norm(np.mean(q, axis=0) - [cx, cy]) > rad + np.max(np.linalg.norm(q - np.mean(q, axis=0), axis=1)) + 0.3
                for q in out
            )
            if ok:
                placed = poly
                break
        # rng consumed identically whether or not the box ends up present
        if present and placed is not None:
            out.append(placed)
    return out


def sample_free_positions(
    grid: FreeGrid,
    n: int,
    rng: np.random.Generator,
    min_sep: float = 0.0,
    avoid: list[np.ndarray] | None = None,
) -> list[np.ndarray]:
    free = np.argwhere(~grid.blocked)
    if free.shape[0] == 0:
        raise DataError("no free space to sample positions from")
    picked: list[np.ndarray] = []
    existing = list(avoid or [])
    guard = 0
    while len(picked) < n:
        guard += 1
        if guard > 200 * n + 200:
            raise DataError("could not sample enough free positions")
        k = int(rng.integers(0, free.shape[0]))
        p = grid.center_of(int(free[k, 0]), int(free[k, 1]))
        jitter = rng.uniform(-0.3, 0.3, size=2) * grid.dl
        q = p + jitter
        if not grid.is_free(q):
            continue
        if min_sep > 0.0 and any(np.linalg.norm(q - e) < min_sep for e in existing + picked):
            continue
        picked.append(q)
    return picked
