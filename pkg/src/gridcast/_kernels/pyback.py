"""NumPy implementations of the hot kernels.

Used when the compiled extension is unavailable (or explicitly disabled via
GRIDCAST_PURE_PYTHON=1). Semantics match ``_core`` exactly; floating-point
results may differ in the last bits because summation order differs.
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view


def conv2d_forward(xp: np.ndarray, w: np.ndarray, stride: int) -> np.ndarray:
    """Cross-correlate a pre-padded [Ci,Hp,Wp] input with [Co,Ci,kh,kw] weights."""
    co, ci, kh, kw = w.shape
    hp, wp = xp.shape[1], xp.shape[2]
    ho = (hp - kh) // stride + 1
    wo = (wp - kw) // stride + 1
    win = sliding_window_view(xp, (kh, kw), axis=(1, 2))[:, ::stride, ::stride]
    cols = np.ascontiguousarray(win.transpose(1, 2, 0, 3, 4)).reshape(ho * wo, ci * kh * kw)
    out = cols @ w.reshape(co, -1).T
    return np.ascontiguousarray(out.T.reshape(co, ho, wo))


def conv2d_grad_input(w: np.ndarray, dout: np.ndarray, hp: int, wp: int, stride: int) -> np.ndarray:
    """Gradient of conv2d_forward w.r.t. the padded input."""
    co, ci, kh, kw = w.shape
    ho, wo = dout.shape[1], dout.shape[2]
    dcols = dout.reshape(co, -1).T @ w.reshape(co, -1)  # [ho*wo, ci*kh*kw]
    dcols = dcols.reshape(ho, wo, ci, kh, kw)
    dxp = np.zeros((ci, hp, wp), dtype=np.float64)
    for u in range(kh):
        for v in range(kw):
            dxp[:, u : u + (ho - 1) * stride + 1 : stride, v : v + (wo - 1) * stride + 1 : stride] += (
                dcols[:, :, :, u, v].transpose(2, 0, 1)
            )
    return dxp


def conv2d_grad_weights(xp: np.ndarray, dout: np.ndarray, kh: int, kw: int, stride: int) -> np.ndarray:
    """Gradient of conv2d_forward w.r.t. the weights."""
    co = dout.shape[0]
    ci = xp.shape[0]
    ho, wo = dout.shape[1], dout.shape[2]
    win = sliding_window_view(xp, (kh, kw), axis=(1, 2))[:, ::stride, ::stride]
    cols = np.ascontiguousarray(win.transpose(1, 2, 0, 3, 4)).reshape(ho * wo, ci * kh * kw)
    dw = dout.reshape(co, -1) @ cols
    return np.ascontiguousarray(dw.reshape(co, ci, kh, kw))


def raycast(
    sx: float,
    sy: float,
    bearings: np.ndarray,
    segs: np.ndarray,
    seg_labels: np.ndarray,
    circles: np.ndarray,
    circ_labels: np.ndarray,
    r_max: float,
) -> tuple[np.ndarray, np.ndarray]:
    """First-hit distances and labels for rays from (sx, sy).

    segs is [S,4] endpoint pairs, circles is [C,3] (cx, cy, r). Returns
    (ranges, labels) per bearing; misses get range inf and label 255.
    Segments win distance ties against circles.
    """
    nr = bearings.shape[0]
    dx = np.cos(bearings)[:, None]
    dy = np.sin(bearings)[:, None]
    best_t = np.full(nr, np.inf)
    best_lab = np.full(nr, 255, dtype=np.uint8)
    eps = 1e-12

    if segs.shape[0]:
        x1, y1 = segs[:, 0][None, :], segs[:, 1][None, :]
        ex = (segs[:, 2] - segs[:, 0])[None, :]
        ey = (segs[:, 3] - segs[:, 1])[None, :]
        cross = dx * ey - dy * ex
        px, py = x1 - sx, y1 - sy
        with np.errstate(divide="ignore", invalid="ignore"):
            t = (px * ey - py * ex) / cross
            u = (px * dy - py * dx) / cross
        ok = (np.abs(cross) > eps) & (t > eps) & (t <= r_max) & (u >= 0.0) & (u <= 1.0)
        t = np.where(ok, t, np.inf)
        j = np.argmin(t, axis=1)
        tz = t[np.arange(nr), j]
        upd = tz < best_t
        best_t[upd] = tz[upd]
        best_lab[upd] = seg_labels[j[upd]]

    if circles.shape[0]:
        mx = (circles[:, 0])[None, :] - sx
        my = (circles[:, 1])[None, :] - sy
        b = mx * dx + my * dy
        c0 = mx * mx + my * my - (circles[:, 2] ** 2)[None, :]
        disc = b * b - c0
        with np.errstate(invalid="ignore"):
            root = np.sqrt(np.where(disc >= 0.0, disc, np.nan))
        t = b - root
        ok = (disc >= 0.0) & (t > eps) & (t <= r_max)
        t = np.where(ok, t, np.inf)
        j = np.argmin(t, axis=1)
        tz = t[np.arange(nr), j]
        upd = tz < best_t
        best_t[upd] = tz[upd]
        best_lab[upd] = circ_labels[j[upd]]

    return best_t, best_lab


def trace_rays(si: int, sj: int, ei: np.ndarray, ej: np.ndarray, hits: np.ndarray, misses: np.ndarray) -> None:
    """Accumulate Bresenham traversals from cell (si, sj) to each endpoint.

    Every visited cell except the endpoint gets +1 miss (the sensor cell
    included); the endpoint gets +1 hit. In-place on hits/misses.
    """
    n = ei.shape[0]
    if n == 0:
        return
    r = np.full(n, si, dtype=np.int64)
    c = np.full(n, sj, dtype=np.int64)
    dx = np.abs(ej - sj)
    dy = -np.abs(ei - si)
    sxs = np.where(sj < ej, 1, -1)
    sys_ = np.where(si < ei, 1, -1)
    err = dx + dy
    active = np.ones(n, dtype=bool)
    while True:
        at_end = active & (r == ei) & (c == ej)
        if at_end.any():
            np.add.at(hits, (r[at_end], c[at_end]), 1)
            active &= ~at_end
        if not active.any():
            break
        idx = np.flatnonzero(active)
        np.add.at(misses, (r[idx], c[idx]), 1)
        e2 = 2 * err[idx]
        stx = e2 >= dy[idx]
        sty = e2 <= dx[idx]
        err[idx] += np.where(stx, dy[idx], 0) + np.where(sty, dx[idx], 0)
        c[idx] += np.where(stx, sxs[idx], 0)
        r[idx] += np.where(sty, sys_[idx], 0)


def correlate2d_same(plane: np.ndarray, kern: np.ndarray) -> np.ndarray:
    """'same'-size zero-padded correlation with an odd-sized kernel."""
    h, w = plane.shape
    kh, kw = kern.shape
    rh, rw = kh // 2, kw // 2
    padded = np.zeros((h + kh - 1, w + kw - 1), dtype=np.float64)
    padded[rh : rh + h, rw : rw + w] = plane
    out = np.zeros((h, w), dtype=np.float64)
    for u in range(kh):
        for v in range(kw):
            kv = kern[u, v]
            if kv == 0.0:
                continue
            out += kv * padded[u : u + h, v : v + w]
    return out
