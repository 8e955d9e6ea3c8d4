"""Planar geometry helpers shared by the simulator and planner."""

from __future__ import annotations

import math

import numpy as np


def unit(v: np.ndarray) -> np.ndarray:
    n = math.hypot(v[0], v[1])
    if n == 0.0:
        return np.zeros(2)
    return v / n


def rot(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


def rotate_points(pts: np.ndarray, angle: float, center: np.ndarray) -> np.ndarray:
    """Rotate an [N,2] point array about `center`."""
    if pts.size == 0:
        return pts.reshape(0, 2).copy()
    return (pts - center) @ rot(angle).T + center


def seg_normals(segs: np.ndarray) -> np.ndarray:
    """Unit left normals for an [S,4] segment array."""
    d = segs[:, 2:4] - segs[:, 0:2]
    n = np.stack([-d[:, 1], d[:, 0]], axis=1)
    ln = np.linalg.norm(n, axis=1, keepdims=True)
    ln[ln == 0.0] = 1.0
    return n / ln


def point_seg_dist(p: np.ndarray, segs: np.ndarray) -> np.ndarray:
    """Distances from one point to each segment of an [S,4] array."""
    a = segs[:, 0:2]
    d = segs[:, 2:4] - a
    len2 = np.einsum("ij,ij->i", d, d)
    len2[len2 == 0.0] = 1.0
    u = np.clip(np.einsum("ij,ij->i", p[None, :] - a, d) / len2, 0.0, 1.0)
    closest = a + u[:, None] * d
    return np.linalg.norm(p[None, :] - closest, axis=1)


def points_seg_dist(pts: np.ndarray, seg: np.ndarray) -> np.ndarray:
    """Distances from an [N,2] point array to one segment (x1,y1,x2,y2)."""
    a = seg[0:2]
    d = seg[2:4] - a
    len2 = float(d @ d)
    if len2 == 0.0:
        return np.linalg.norm(pts - a[None, :], axis=1)
    u = np.clip((pts - a[None, :]) @ d / len2, 0.0, 1.0)
    closest = a[None, :] + u[:, None] * d[None, :]
    return np.linalg.norm(pts - closest, axis=1)


def reflect(v: np.ndarray, normal: np.ndarray) -> np.ndarray:
    """Specular reflection of v about a unit normal."""
    return v - 2.0 * float(v @ normal) * normal


def slerp_dir(d: np.ndarray, target: np.ndarray, frac: float) -> np.ndarray:
    """Rotate unit direction d toward unit direction target by frac of the angle."""
    ang_d = math.atan2(d[1], d[0])
    ang_t = math.atan2(target[1], target[0])
    delta = math.atan2(math.sin(ang_t - ang_d), math.cos(ang_t - ang_d))
    a = ang_d + frac * delta
    return np.array([math.cos(a), math.sin(a)])


def convex_polygon_edges(verts: np.ndarray) -> np.ndarray:
    """[V,2] vertex loop -> [V,4] closed edge segments."""
    nxt = np.roll(verts, -1, axis=0)
    return np.concatenate([verts, nxt], axis=1)


def point_in_convex(p: np.ndarray, verts: np.ndarray) -> bool:
    d = np.roll(verts, -1, axis=0) - verts
    rel = p[None, :] - verts
    cross = d[:, 0] * rel[:, 1] - d[:, 1] * rel[:, 0]
    return bool(np.all(cross >= 0.0) or np.all(cross <= 0.0))


def first_hit_capsules(
    p: np.ndarray,
    v: np.ndarray,
    h: float,
    segs: np.ndarray,
    radius: float,
    circles: np.ndarray,
) -> tuple[float, np.ndarray] | None:
    """Earliest contact of the moving point p + t*v, t in [0, h].

    Obstacles are segments inflated by `radius` (capsules) and extra circles
    given as [C,3] rows (cx, cy, r). Returns (t, unit contact normal) of the
    earliest hit, or None. A start position already touching a surface
    reports t = 0 with the outward normal.
    """
    best_t = math.inf
    best_n: np.ndarray | None = None
    eps = 1e-12

    if segs.shape[0]:
        a = segs[:, 0:2]
        d = segs[:, 2:4] - a
        nrm = seg_normals(segs)
        rel = p[None, :] - a
        s0 = np.einsum("ij,ij->i", rel, nrm)
        side = np.where(s0 >= 0.0, 1.0, -1.0)
        n_eff = nrm * side[:, None]
        s_abs = np.abs(s0)
        rate = n_eff @ v
        with np.errstate(divide="ignore", invalid="ignore"):
            t = (s_abs - radius) / (-rate)
        valid = (rate < -eps) & (t >= 0.0) & (t <= h)
        if valid.any():
            q = p[None, :] + t[:, None] * v[None, :]
            len2 = np.einsum("ij,ij->i", d, d)
            len2 = np.where(len2 == 0.0, 1.0, len2)
            u = np.einsum("ij,ij->i", q - a, d) / len2
            valid &= (u >= 0.0) & (u <= 1.0)
            if valid.any():
                idx = np.flatnonzero(valid)
                k = idx[np.argmin(t[idx])]
                best_t = float(t[k])
                best_n = n_eff[k].copy()
        # capsule end caps
        for endpoint in (a, segs[:, 2:4]):
            hit = _first_hit_circles(p, v, h, endpoint, np.full(segs.shape[0], radius))
            if hit is not None and hit[0] < best_t:
                best_t, best_n = hit

    if circles.shape[0]:
        hit = _first_hit_circles(p, v, h, circles[:, 0:2], circles[:, 2])
        if hit is not None and hit[0] < best_t:
            best_t, best_n = hit

    if best_n is None:
        return None
    return best_t, best_n


def _first_hit_circles(
    p: np.ndarray, v: np.ndarray, h: float, centers: np.ndarray, radii: np.ndarray
) -> tuple[float, np.ndarray] | None:
    m = p[None, :] - centers
    b = m @ v
    c0 = np.einsum("ij,ij->i", m, m) - radii**2
    a = float(v @ v)
    if a == 0.0:
        return None
    disc = b * b - a * c0
    with np.errstate(invalid="ignore"):
        root = np.sqrt(np.where(disc >= 0.0, disc, np.nan))
    t = (-b - root) / a
    # already-overlapping starts collide immediately while approaching
    t = np.where((c0 <= 0.0) & (b < 0.0), 0.0, t)
    valid = (disc >= 0.0) & (b < 0.0) & (t >= 0.0) & (t <= h)
    if not valid.any():
        return None
    idx = np.flatnonzero(valid)
    k = idx[np.argmin(t[idx])]
    tq = float(t[k])
    contact = p + tq * v
    n = contact - centers[k]
    ln = float(np.linalg.norm(n))
    if ln == 0.0:
        n = -unit(v)
        ln = 1.0
    return tq, n / ln
