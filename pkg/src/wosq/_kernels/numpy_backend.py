"""Vectorized pure-numpy walk kernels.

Walks advance in lockstep over the whole batch; finished walks drop out of
the active index set.  Boundary projection at termination reuses the scalar
geometry routines, so this backend doubles as the reference the accelerated
backend is checked against.
"""

import math

import numpy as np

from ..errors import SingularGreenError
from ..geometry import (KIND_ARC, KIND_CIRCLE, KIND_SEGMENT, SRC_CONST,
                        SRC_SECTOR, TWO_PI, eval_boundary_value,
                        project_encoded)

name = "numpy"


def _piece_dists(kinds, data, X):
    """Minimum distance from each row of X to the piece set."""
    out = np.full(X.shape[0], np.inf)
    for k, d in zip(kinds, data):
        if k == KIND_CIRCLE:
            dd = np.abs(np.hypot(X[:, 0] - d[0], X[:, 1] - d[1]) - d[2])
        elif k == KIND_SEGMENT:
            ux, uy = d[2] - d[0], d[3] - d[1]
            t = ((X[:, 0] - d[0]) * ux + (X[:, 1] - d[1]) * uy) / (ux * ux + uy * uy)
            t = np.clip(t, 0.0, 1.0)
            dd = np.hypot(X[:, 0] - (d[0] + t * ux), X[:, 1] - (d[1] + t * uy))
        elif k == KIND_ARC:
            dd = _arc_dists(d, X)
        else:
            dd = np.abs(np.sqrt((X[:, 0] - d[0]) ** 2 + (X[:, 1] - d[1]) ** 2
                                + (X[:, 2] - d[2]) ** 2) - d[3])
        np.minimum(out, dd, out=out)
    return out


def _arc_dists(d, X):
    cx, cy, rr, a0, width = d[0], d[1], d[2], d[3], d[4]
    dx, dy = X[:, 0] - cx, X[:, 1] - cy
    nrm = np.hypot(dx, dy)
    phi = np.arctan2(dy, dx)
    delta = (phi - a0) % TWO_PI
    a1 = a0 + width
    d0 = np.hypot(X[:, 0] - (cx + rr * math.cos(a0)),
                  X[:, 1] - (cy + rr * math.sin(a0)))
    d1 = np.hypot(X[:, 0] - (cx + rr * math.cos(a1)),
                  X[:, 1] - (cy + rr * math.sin(a1)))
    dd = np.where(delta <= width, np.abs(nrm - rr), np.minimum(d0, d1))
    dd[nrm == 0.0] = rr
    return dd


def _directions(dim, coords):
    """Unit sphere directions from (m, dim-1) uniforms."""
    if dim == 2:
        ang = TWO_PI * coords[:, 0]
        return np.stack((np.cos(ang), np.sin(ang)), axis=-1)
    lam = 2.0 * coords[:, 0] - 1.0
    th = TWO_PI * coords[:, 1]
    rho = np.sqrt(1.0 - lam * lam)
    return np.stack((rho * np.cos(th), rho * np.sin(th), lam), axis=-1)


def _source_vals(kind, const, W):
    if kind == SRC_CONST:
        return np.full(W.shape[0], const)
    if kind == SRC_SECTOR:
        r2 = W[:, 0] ** 2 + W[:, 1] ** 2
        return -(2.0 - r2) * np.exp(-0.5 * r2)
    return np.zeros(W.shape[0])


def _finalize(idx, z, acc, values, kinds, data, comp, bv_kind, bv_const, tol):
    for i in idx:
        p, cid = project_encoded(kinds, data, comp, z[i], tol)
        h = eval_boundary_value(int(bv_kind[cid]), float(bv_const[cid]), p)
        values[i] = h + acc[i]


def walk_batch(points, z0, eps, max_steps, geom, mode, tol):
    """Run one walk per row of ``points``.

    mode 0: harmonic; 1: pointwise source; 2: constant source; 3: fixed
    step count (no shell test, exactly ``max_steps`` moves).  Returns
    (values, taus, truncated).
    """
    dim, kinds, data, comp, bv_kind, bv_const, src_kind, src_const = geom
    n = points.shape[0]
    s0 = dim - 1
    s = s0 + (dim if mode == 1 else 0)
    z = np.tile(np.asarray(z0, dtype=np.float64), (n, 1))
    acc = np.zeros(n)
    values = np.empty(n)
    taus = np.zeros(n, dtype=np.int64)
    trunc = np.zeros(n, dtype=np.uint8)
    alive = np.arange(n)
    for k in range(max_steps):
        r = _piece_dists(kinds, data, z[alive])
        if mode != 3:
            done = r < eps
            if done.any():
                fin = alive[done]
                taus[fin] = k
                _finalize(fin, z, acc, values, kinds, data, comp,
                          bv_kind, bv_const, tol)
                alive = alive[~done]
                if alive.size == 0:
                    return values, taus, trunc
                r = r[~done]
        base = s * k
        if mode == 1:
            rad = (np.sqrt(points[alive, base + s0]) if dim == 2
                   else np.cbrt(points[alive, base + s0]))
            if np.any(rad == 0.0):
                raise SingularGreenError(
                    f"sample point coincides with the ball center at step {k}")
            dir1 = _directions(dim, points[alive, base + s0 + 1:base + s])
            w = z[alive] + (r * rad)[:, None] * dir1
            sd = r * rad
            if dim == 2:
                gg = np.log(r / sd) / TWO_PI
                vol = np.pi * r * r
            else:
                gg = (1.0 / sd - 1.0 / r) / (4.0 * np.pi)
                vol = (4.0 / 3.0) * np.pi * (r * r * r)
            acc[alive] -= vol * gg * _source_vals(src_kind, src_const, w)
        elif mode == 2:
            acc[alive] -= (src_const / (2.0 * dim)) * r * r
        z[alive] += r[:, None] * _directions(dim, points[alive, base:base + s0])
        taus[alive] = k + 1
    if mode != 3:
        r = _piece_dists(kinds, data, z[alive])
        trunc[alive] = (r >= eps).astype(np.uint8)
    _finalize(alive, z, acc, values, kinds, data, comp, bv_kind, bv_const, tol)
    return values, taus, trunc


def indicator_batch(points, z0, eps, geom, a_mask):
    """Indicator of walks that stay outside every shell for the first k-1
    moves and land in the masked-piece shell on move k."""
    dim, kinds, data = geom[0], geom[1], geom[2]
    s0 = dim - 1
    steps = points.shape[1] // s0
    n = points.shape[0]
    a_mask = np.asarray(a_mask, dtype=bool)
    ka, da = kinds[a_mask], data[a_mask]
    kb, db = kinds[~a_mask], data[~a_mask]
    out = np.zeros(n, dtype=np.uint8)
    alive = np.arange(n)
    z = np.tile(np.asarray(z0, dtype=np.float64), (n, 1))
    for j in range(steps):
        r = _piece_dists(kinds, data, z[alive])
        base = s0 * j
        z[alive] += r[:, None] * _directions(dim, points[alive, base:base + s0])
        r1 = _piece_dists(ka, da, z[alive])
        if j < steps - 1:
            keep = r1 >= eps
            if len(kb):
                keep &= _piece_dists(kb, db, z[alive]) >= eps
            alive = alive[keep]
            if alive.size == 0:
                return out
        else:
            out[alive[r1 < eps]] = 1
    return out
