"""Planar range sensor: first-hit ray casting against the live world state."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .. import _kernels, labels
from ..errors import DataError
from .actors import Actor
from .world import WorldMap


@dataclass
class Frame:
    """One timestamped scan: world-frame hit points with semantic labels."""

    t: float
    pose: tuple[float, float, float]  # x, y, theta
    points: np.ndarray  # [N,2] world coordinates
    labels: np.ndarray  # [N] uint8 ground-truth classes
    ranges: np.ndarray | None = None  # [n_rays] distances, inf on miss (not persisted)
    inferred_labels: np.ndarray | None = None  # filled by the annotation pipeline

    def __post_init__(self):
        if self.points.shape[0] != self.labels.shape[0]:
            raise DataError("frame points and labels length mismatch")


def lidar_scan(
    world: WorldMap,
    actors: list[Actor],
    pose: tuple[float, float, float],
    n_rays: int,
    r_max: float,
    sigma_r: float = 0.0,
    rng: np.random.Generator | None = None,
    t: float = 0.0,
) -> Frame:
    """Scan n_rays evenly spaced bearings; misses produce no point."""
    if n_rays < 1:
        raise DataError("lidar needs n_rays >= 1")
    x, y, theta = pose
    bearings = theta + 2.0 * math.pi * np.arange(n_rays) / n_rays
    segs, seg_labels = world.obstacle_segments()
    if actors:
        circles = np.array([[a.pos[0], a.pos[1], a.radius] for a in actors])
        circ_labels = np.full(len(actors), labels.DYNAMIC, dtype=np.uint8)
    else:
        circles = np.zeros((0, 3))
        circ_labels = np.zeros(0, dtype=np.uint8)
    ranges, ray_labels = _kernels.raycast(
        float(x), float(y), bearings, np.ascontiguousarray(segs), seg_labels, circles, circ_labels, float(r_max)
    )
    ranges = np.asarray(ranges, dtype=np.float64)
    if sigma_r > 0.0:
        if rng is None:
            raise DataError("sigma_r > 0 requires an rng")
        noise = rng.normal(0.0, sigma_r, size=n_rays)
        hit = np.isfinite(ranges)
        ranges = np.where(hit, np.maximum(ranges + noise, 1e-6), ranges)
    hit = np.isfinite(ranges)
    pts = np.stack(
        [x + ranges[hit] * np.cos(bearings[hit]), y + ranges[hit] * np.sin(bearings[hit])], axis=1
    ) if hit.any() else np.zeros((0, 2))
    return Frame(t=t, pose=(float(x), float(y), float(theta)), points=pts, labels=np.asarray(ray_labels)[hit].copy(), ranges=ranges)
