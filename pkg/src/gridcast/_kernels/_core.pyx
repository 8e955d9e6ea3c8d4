# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels: convolution forward/backward, ray casting,
Bresenham hit/miss tracing, and spatial correlation.

Same contracts as pyback.py; loop nests are ordered so every output element
is accumulated in a fixed sequence, which keeps results deterministic under
OpenMP (threads never share an output element). Inner loops go through
restrict-qualified C helpers so the compiler can vectorize them.
"""

import numpy as np

cimport numpy as cnp
from cython.parallel cimport prange
from libc.math cimport cos, fabs, sin, sqrt

cnp.import_array()

cdef extern from *:
    """
    static inline void gc_axpy(double* __restrict__ o, const double* __restrict__ x,
                               double a, long n) {
        for (long j = 0; j < n; ++j) o[j] += a * x[j];
    }
    static inline void gc_axpy_s(double* __restrict__ o, long so,
                                 const double* __restrict__ x, long sx,
                                 double a, long n) {
        for (long j = 0; j < n; ++j) o[j * so] += a * x[j * sx];
    }
    static inline double gc_dot(const double* __restrict__ x, const double* __restrict__ y,
                                long n) {
        double acc = 0.0;
        for (long j = 0; j < n; ++j) acc += x[j] * y[j];
        return acc;
    }
    static inline double gc_dot_s(const double* __restrict__ x, long sx,
                                  const double* __restrict__ y, long n) {
        double acc = 0.0;
        for (long j = 0; j < n; ++j) acc += x[j * sx] * y[j];
        return acc;
    }
    """
    void gc_axpy(double* o, const double* x, double a, long n) nogil
    void gc_axpy_s(double* o, long so, const double* x, long sx, double a, long n) nogil
    double gc_dot(const double* x, const double* y, long n) nogil
    double gc_dot_s(const double* x, long sx, const double* y, long n) nogil


def conv2d_forward(double[:, :, ::1] xp, double[:, :, :, ::1] w, int stride):
    cdef Py_ssize_t co_n = w.shape[0], ci_n = w.shape[1], kh = w.shape[2], kw = w.shape[3]
    cdef Py_ssize_t hp = xp.shape[1], wp = xp.shape[2]
    cdef Py_ssize_t ho = (hp - kh) // stride + 1
    cdef Py_ssize_t wo = (wp - kw) // stride + 1
    out_arr = np.zeros((co_n, ho, wo), dtype=np.float64)
    cdef double[:, :, ::1] out = out_arr
    cdef Py_ssize_t co, ci, u, v, i
    cdef double wv
    with nogil:
        for co in prange(co_n, schedule='static'):
            for ci in range(ci_n):
                for u in range(kh):
                    for v in range(kw):
                        wv = w[co, ci, u, v]
                        if stride == 1:
                            for i in range(ho):
                                gc_axpy(&out[co, i, 0], &xp[ci, i + u, v], wv, wo)
                        else:
                            for i in range(ho):
                                gc_axpy_s(&out[co, i, 0], 1, &xp[ci, i * stride + u, v], stride, wv, wo)
    return out_arr


def conv2d_grad_input(double[:, :, :, ::1] w, double[:, :, ::1] dout, int hp, int wp, int stride):
    cdef Py_ssize_t co_n = w.shape[0], ci_n = w.shape[1], kh = w.shape[2], kw = w.shape[3]
    cdef Py_ssize_t ho = dout.shape[1], wo = dout.shape[2]
    dxp_arr = np.zeros((ci_n, hp, wp), dtype=np.float64)
    cdef double[:, :, ::1] dxp = dxp_arr
    cdef Py_ssize_t co, ci, u, v, i
    cdef double wv
    with nogil:
        for ci in prange(ci_n, schedule='static'):
            for co in range(co_n):
                for u in range(kh):
                    for v in range(kw):
                        wv = w[co, ci, u, v]
                        if stride == 1:
                            for i in range(ho):
                                gc_axpy(&dxp[ci, i + u, v], &dout[co, i, 0], wv, wo)
                        else:
                            for i in range(ho):
                                gc_axpy_s(&dxp[ci, i * stride + u, v], stride, &dout[co, i, 0], 1, wv, wo)
    return dxp_arr


def conv2d_grad_weights(double[:, :, ::1] xp, double[:, :, ::1] dout, int kh, int kw, int stride):
    cdef Py_ssize_t co_n = dout.shape[0], ci_n = xp.shape[0]
    cdef Py_ssize_t ho = dout.shape[1], wo = dout.shape[2]
    dw_arr = np.zeros((co_n, ci_n, kh, kw), dtype=np.float64)
    cdef double[:, :, :, ::1] dw = dw_arr
    cdef Py_ssize_t co, ci, u, v, i
    cdef double acc
    with nogil:
        for co in prange(co_n, schedule='static'):
            for ci in range(ci_n):
                for u in range(kh):
                    for v in range(kw):
                        acc = 0.0
                        if stride == 1:
                            for i in range(ho):
                                acc = acc + gc_dot(&xp[ci, i + u, v], &dout[co, i, 0], wo)
                        else:
                            for i in range(ho):
                                acc = acc + gc_dot_s(&xp[ci, i * stride + u, v], stride, &dout[co, i, 0], wo)
                        dw[co, ci, u, v] = acc
    return dw_arr


def raycast(double sx, double sy, double[::1] bearings,
            double[:, ::1] segs, unsigned char[::1] seg_labels,
            double[:, ::1] circles, unsigned char[::1] circ_labels,
            double r_max):
    cdef Py_ssize_t nr = bearings.shape[0]
    cdef Py_ssize_t ns = segs.shape[0], nc = circles.shape[0]
    ranges_arr = np.full(nr, np.inf, dtype=np.float64)
    labels_arr = np.full(nr, 255, dtype=np.uint8)
    cdef double[::1] ranges = ranges_arr
    cdef unsigned char[::1] labels = labels_arr
    cdef Py_ssize_t k, s, c
    cdef double dx, dy, ex, ey, cross, px, py, t, u
    cdef double mx, my, b, c0, disc, best
    cdef double eps = 1e-12
    cdef int best_lab
    with nogil:
        for k in prange(nr, schedule='static'):
            dx = cos(bearings[k])
            dy = sin(bearings[k])
            best = ranges[k]
            best_lab = 255
            for s in range(ns):
                ex = segs[s, 2] - segs[s, 0]
                ey = segs[s, 3] - segs[s, 1]
                cross = dx * ey - dy * ex
                if fabs(cross) <= eps:
                    continue
                px = segs[s, 0] - sx
                py = segs[s, 1] - sy
                t = (px * ey - py * ex) / cross
                u = (px * dy - py * dx) / cross
                if t > eps and t <= r_max and u >= 0.0 and u <= 1.0 and t < best:
                    best = t
                    best_lab = seg_labels[s]
            for c in range(nc):
                mx = circles[c, 0] - sx
                my = circles[c, 1] - sy
                b = mx * dx + my * dy
                c0 = mx * mx + my * my - circles[c, 2] * circles[c, 2]
                disc = b * b - c0
                if disc < 0.0:
                    continue
                t = b - sqrt(disc)
                if t > eps and t <= r_max and t < best:
                    best = t
                    best_lab = circ_labels[c]
            ranges[k] = best
            labels[k] = <unsigned char> best_lab
    return ranges_arr, labels_arr


def trace_rays(Py_ssize_t si, Py_ssize_t sj, long[::1] ei, long[::1] ej,
               long[:, ::1] hits, long[:, ::1] misses):
    cdef Py_ssize_t n = ei.shape[0]
    cdef Py_ssize_t k
    cdef long r, c, dx, dy, sx, sy, err, e2, er, ec
    for k in range(n):
        r = si
        c = sj
        er = ei[k]
        ec = ej[k]
        dx = ec - sj
        if dx < 0:
            dx = -dx
        dy = er - si
        if dy < 0:
            dy = -dy
        dy = -dy
        sx = 1 if sj < ec else -1
        sy = 1 if si < er else -1
        err = dx + dy
        while True:
            if r == er and c == ec:
                hits[r, c] += 1
                break
            misses[r, c] += 1
            e2 = 2 * err
            if e2 >= dy:
                err += dy
                c += sx
            if e2 <= dx:
                err += dx
                r += sy


def correlate2d_same(double[:, ::1] plane, double[:, ::1] kern):
    cdef Py_ssize_t h = plane.shape[0], w = plane.shape[1]
    cdef Py_ssize_t kh = kern.shape[0], kw = kern.shape[1]
    cdef Py_ssize_t rh = kh // 2, rw = kw // 2
    padded_arr = np.zeros((h + kh - 1, w + kw - 1), dtype=np.float64)
    padded_arr[rh : rh + h, rw : rw + w] = np.asarray(plane)
    out_arr = np.zeros((h, w), dtype=np.float64)
    cdef double[:, ::1] padded = padded_arr
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, u, v
    cdef double kv
    with nogil:
        for i in prange(h, schedule='static'):
            for u in range(kh):
                for v in range(kw):
                    kv = kern[u, v]
                    if kv == 0.0:
                        continue
                    gc_axpy(&out[i, 0], &padded[i + u, v], kv, w)
    return out_arr
