"""Session recording: randomized worlds, a scripted robot tour, persistence.

Session layout on disk:
    sessions/<id>/meta.cfg        key=value config echo plus session.* keys
    sessions/<id>/poses.csv       t,x,y,theta
    sessions/<id>/frames/<k>.frm  FRM1, u32 count, then f32 x, f32 y, u8 label
"""

from __future__ import annotations

import heapq
import math
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..config import Config, parse_lines
from ..errors import DataError
from .actors import Actor, Behavior, StepParams, spawn_actor, step_actor
from .flow import FlowField, compute_flow_field
from .sensor import Frame, lidar_scan
from .world import FreeGrid, WorldMap, build_free_grid, generate_walls, place_movables, sample_free_positions

_FRM_MAGIC = b"FRM1"
_POINT_DTYPE = np.dtype([("x", "<f4"), ("y", "<f4"), ("label", "u1")])


@dataclass
class SessionData:
    path: Path
    frames: list[Frame]
    config: Config
    meta: dict[str, str]


def _grid_path(grid: FreeGrid, start: np.ndarray, goal: np.ndarray) -> list[np.ndarray]:
    """Shortest 8-connected cell path between two free positions."""
    si, sj = grid.cell_of(start)
    gi, gj = grid.cell_of(goal)
    h, w = grid.blocked.shape
    for (i, j), name in (((si, sj), "start"), ((gi, gj), "goal")):
        if not grid.in_grid(i, j) or grid.blocked[i, j]:
            raise DataError(f"unreachable tour waypoint: {name} cell ({i},{j}) is not free")
    dist = np.full((h, w), np.inf)
    parent = np.full((h, w, 2), -1, dtype=np.int64)
    dist[si, sj] = 0.0
    heap = [(0.0, si, sj)]
    while heap:
        d, i, j = heapq.heappop(heap)
        if (i, j) == (gi, gj):
            break
        if d > dist[i, j]:
            continue
        for di in (-1, 0, 1):
            for dj in (-1, 0, 1):
                if di == 0 and dj == 0:
                    continue
                ni, nj = i + di, j + dj
                if not grid.in_grid(ni, nj) or grid.blocked[ni, nj]:
                    continue
                nd = d + grid.dl * (math.sqrt(2.0) if di and dj else 1.0)
                if nd < dist[ni, nj]:
                    dist[ni, nj] = nd
                    parent[ni, nj] = (i, j)
                    heapq.heappush(heap, (nd, ni, nj))
    if not np.isfinite(dist[gi, gj]):
        raise DataError(f"unreachable tour waypoint at ({goal[0]:.3f}, {goal[1]:.3f})")
    cells = [(gi, gj)]
    while cells[-1] != (si, sj):
        i, j = cells[-1]
        pi, pj = parent[i, j]
        cells.append((int(pi), int(pj)))
    cells.reverse()
    return [grid.center_of(i, j) for i, j in cells]


class _TourFollower:
    """Constant-speed motion along a closed polyline of path points."""

    def __init__(self, polyline: list[np.ndarray], speed: float):
        pts = np.array(polyline)
        deltas = np.diff(pts, axis=0)
        lens = np.linalg.norm(deltas, axis=1)
        keep = lens > 1e-12
        self.pts = np.concatenate([pts[:1], pts[1:][keep]], axis=0)
        self.lens = lens[keep]
        self.cum = np.concatenate([[0.0], np.cumsum(self.lens)])
        self.total = float(self.cum[-1])
        self.speed = speed

    def pose_at(self, t: float) -> tuple[float, float, float]:
        if self.total <= 0.0 or self.speed <= 0.0:
            p = self.pts[0]
            return float(p[0]), float(p[1]), 0.0
        s = (self.speed * t) % self.total
        k = int(np.searchsorted(self.cum, s, side="right") - 1)
        k = min(k, len(self.lens) - 1)
        u = (s - self.cum[k]) / self.lens[k]
        p = self.pts[k] + u * (self.pts[k + 1] - self.pts[k])
        d = self.pts[k + 1] - self.pts[k]
        return float(p[0]), float(p[1]), math.atan2(d[1], d[0])


def write_frame(path: Path, frame: Frame) -> None:
    rec = np.empty(frame.points.shape[0], dtype=_POINT_DTYPE)
    rec["x"] = frame.points[:, 0].astype(np.float32)
    rec["y"] = frame.points[:, 1].astype(np.float32)
    rec["label"] = frame.labels
    with open(path, "wb") as f:
        f.write(_FRM_MAGIC)
        f.write(struct.pack("<I", frame.points.shape[0]))
        f.write(rec.tobytes())


def read_frame(path: Path, t: float, pose: tuple[float, float, float]) -> Frame:
    raw = Path(path).read_bytes()
    if raw[:4] != _FRM_MAGIC:
        raise DataError(f"bad frame magic in {path}")
    (count,) = struct.unpack_from("<I", raw, 4)
    rec = np.frombuffer(raw, dtype=_POINT_DTYPE, count=count, offset=8)
    pts = np.stack([rec["x"].astype(np.float64), rec["y"].astype(np.float64)], axis=1)
    return Frame(t=t, pose=pose, points=pts, labels=rec["label"].copy())


def record_session(cfg: Config, walls_seed_rng: np.random.Generator, session_rng: np.random.Generator,
                   out_dir: Path, session_id: str, session_index: int) -> Path:
    """Simulate one session and persist it under out_dir."""
    bounds, walls = generate_walls(cfg, walls_seed_rng)
    movables = place_movables(bounds, walls, cfg, session_rng)
    world = WorldMap(bounds=bounds, walls=walls, movables=movables)
    grid = build_free_grid(world, cfg["sim.dl_flow"], cfg["sim.flow_clearance"])

    behavior = Behavior(cfg["sim.behavior"])
    goal_set: list[np.ndarray] = []
    flows: list[FlowField] | None = None
    if behavior is Behavior.FLOW:
        goal_set = sample_free_positions(grid, cfg["sim.n_goals"], session_rng, min_sep=1.0)
        flows = [compute_flow_field(world, [g], cfg["sim.dl_flow"], cfg["sim.flow_clearance"], grid=grid) for g in goal_set]

    waypoints = sample_free_positions(grid, cfg["sim.n_waypoints"], session_rng, min_sep=1.0)
    legs: list[np.ndarray] = []
    loop = waypoints + [waypoints[0]]
    for a, b in zip(loop[:-1], loop[1:]):
        leg = _grid_path(grid, a, b)
        legs.extend(leg if not legs else leg[1:])
    tour = _TourFollower(legs, cfg["sim.robot_speed"])

    robot0 = np.array(tour.pose_at(0.0)[:2])
    spawn_pts = sample_free_positions(
        grid,
        cfg["sim.n_actors"],
        session_rng,
        min_sep=2.0 * cfg["sim.actor_radius"] + 0.2,
        avoid=[robot0],
    )
    actors: list[Actor] = []
    for p in spawn_pts:
        gi = int(session_rng.integers(0, len(goal_set))) if goal_set else -1
        actors.append(
            spawn_actor(p, behavior, cfg["sim.actor_speed"], cfg["sim.actor_radius"], world, session_rng, goal_idx=gi)
        )

    params = StepParams(
        eta=cfg["sim.wander_eta"],
        repulsion_radius=cfg["sim.repulsion_radius"],
        avoidance_radius=cfg["sim.avoidance_radius"],
        kappa=cfg["sim.flow_kappa"],
        goal_tolerance=cfg["sim.goal_tolerance"],
    )

    f_lidar = cfg["sim.f_lidar"]
    dt = 1.0 / f_lidar
    n_frames = int(round(cfg["sim.t_session"] * f_lidar))

    out_dir.mkdir(parents=True, exist_ok=True)
    frames_dir = out_dir / "frames"
    frames_dir.mkdir(exist_ok=True)

    pose_rows = []
    for k in range(n_frames):
        t = k * dt
        pose = tour.pose_at(t)
        frame = lidar_scan(
            world, actors, pose, cfg["sim.n_rays"], cfg["sim.r_max"], cfg["sim.sigma_r"], session_rng, t=t
        )
        write_frame(frames_dir / f"{k:06d}.frm", frame)
        pose_rows.append((t, pose[0], pose[1], pose[2]))
        robot = np.array(pose[:2])
        for idx in range(len(actors)):
            others = actors[:idx] + actors[idx + 1 :]
            actors[idx] = step_actor(
                actors[idx], world, others, robot, cfg["sim.robot_radius"], flows, dt, session_rng, params, goal_set
            )

    with open(out_dir / "poses.csv", "w", newline="\n") as f:
        f.write("t,x,y,theta\n")
        for row in pose_rows:
            f.write(",".join(repr(v) for v in row) + "\n")

    with open(out_dir / "meta.cfg", "w", newline="\n") as f:
        f.write("# session metadata and generating configuration\n")
        f.write(f"session.id = {session_id}\n")
        f.write(f"session.index = {session_index}\n")
        f.write(f"session.n_frames = {n_frames}\n")
        f.write(cfg.dump())
    return out_dir


def record_sessions(cfg: Config, seed: int, out_root: Path) -> list[Path]:
    """Record sim.n_sessions sessions sharing walls but with fresh placements."""
    out_root = Path(out_root)
    dirs = []
    for s in range(cfg["sim.n_sessions"]):
        # walls are regenerated from the same stream so every session shares them
        walls_rng = np.random.default_rng([seed, 0])
        session_rng = np.random.default_rng([seed, 1, s])
        sid = f"s{s:03d}"
        dirs.append(record_session(cfg, walls_rng, session_rng, out_root / sid, sid, s))
    return dirs


def load_session(path: str | Path) -> SessionData:
    path = Path(path)
    meta_path = path / "poses.csv"
    if not meta_path.is_file():
        raise DataError(f"not a session directory (missing poses.csv): {path}")
    raw = parse_lines((path / "meta.cfg").read_text())
    meta = {k: v for k, v in raw.items() if k.startswith("session.")}
    cfg = Config({k: v for k, v in raw.items() if not k.startswith("session.")})
    rows = (path / "poses.csv").read_text().strip().splitlines()[1:]
    poses = [tuple(float(x) for x in r.split(",")) for r in rows]
    frame_files = sorted((path / "frames").glob("*.frm"))
    if len(frame_files) != len(poses):
        raise DataError(f"session {path}: {len(frame_files)} frames but {len(poses)} poses")
    frames = []
    for fp, (t, x, y, theta) in zip(frame_files, poses):
        frames.append(read_frame(fp, t, (x, y, theta)))
    return SessionData(path=path, frames=frames, config=cfg, meta=meta)
