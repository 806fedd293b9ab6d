"""Numba-accelerated walk kernels.

Per-trajectory loops compiled with ``@njit(parallel=True)``; geometry,
boundary-value and source formulas are re-expressed as scalar jitted
helpers dispatching on the encoded piece arrays.  Semantics match
``numpy_backend`` exactly; the parity test suite compares both.
"""

import math

import numpy as np
from numba import njit, prange

from ..errors import SingularGreenError
from ..geometry import (BV_BALL_INV, BV_CONST, BV_DISK_LOG, BV_SECTOR_ARC,
                        BV_SECTOR_BOTTOM, BV_SECTOR_TOP, KIND_ARC,
                        KIND_CIRCLE, KIND_SEGMENT, SRC_CONST, SRC_SECTOR,
                        TWO_PI)

name = "numba"


@njit(cache=True)
def _dist_one(kind, d, x, y, zz):
    if kind == KIND_CIRCLE:
        return abs(math.hypot(x - d[0], y - d[1]) - d[2])
    if kind == KIND_SEGMENT:
        ux = d[2] - d[0]
        uy = d[3] - d[1]
        t = ((x - d[0]) * ux + (y - d[1]) * uy) / (ux * ux + uy * uy)
        if t < 0.0:
            t = 0.0
        elif t > 1.0:
            t = 1.0
        return math.hypot(x - (d[0] + t * ux), y - (d[1] + t * uy))
    if kind == KIND_ARC:
        cx, cy, rr, a0, w = d[0], d[1], d[2], d[3], d[4]
        dx = x - cx
        dy = y - cy
        nrm = math.hypot(dx, dy)
        if nrm == 0.0:
            return rr
        delta = (math.atan2(dy, dx) - a0) % TWO_PI
        if delta <= w:
            return abs(nrm - rr)
        a1 = a0 + w
        d0 = math.hypot(x - (cx + rr * math.cos(a0)), y - (cy + rr * math.sin(a0)))
        d1 = math.hypot(x - (cx + rr * math.cos(a1)), y - (cy + rr * math.sin(a1)))
        return d0 if d0 < d1 else d1
    dx = x - d[0]
    dy = y - d[1]
    dz = zz - d[2]
    return abs(math.sqrt(dx * dx + dy * dy + dz * dz) - d[3])


@njit(cache=True)
def _min_dist(kinds, data, x, y, zz):
    best = np.inf
    for p in range(kinds.shape[0]):
        dd = _dist_one(kinds[p], data[p], x, y, zz)
        if dd < best:
            best = dd
    return best


@njit(cache=True)
def _proj_one(kind, d, x, y, zz):
    """(distance, nearest point) for one piece."""
    if kind == KIND_CIRCLE:
        cx, cy, rr = d[0], d[1], d[2]
        dx = x - cx
        dy = y - cy
        nrm = math.hypot(dx, dy)
        if nrm == 0.0:
            return rr, cx + rr, cy, 0.0
        return abs(nrm - rr), cx + rr * dx / nrm, cy + rr * dy / nrm, 0.0
    if kind == KIND_SEGMENT:
        ux = d[2] - d[0]
        uy = d[3] - d[1]
        t = ((x - d[0]) * ux + (y - d[1]) * uy) / (ux * ux + uy * uy)
        if t < 0.0:
            t = 0.0
        elif t > 1.0:
            t = 1.0
        px = d[0] + t * ux
        py = d[1] + t * uy
        return math.hypot(x - px, y - py), px, py, 0.0
    if kind == KIND_ARC:
        cx, cy, rr, a0, w = d[0], d[1], d[2], d[3], d[4]
        dx = x - cx
        dy = y - cy
        nrm = math.hypot(dx, dy)
        if nrm == 0.0:
            return rr, cx + rr * math.cos(a0), cy + rr * math.sin(a0), 0.0
        phi = math.atan2(dy, dx)
        delta = (phi - a0) % TWO_PI
        if delta <= w:
            return abs(nrm - rr), cx + rr * math.cos(phi), cy + rr * math.sin(phi), 0.0
        a1 = a0 + w
        e0x = cx + rr * math.cos(a0)
        e0y = cy + rr * math.sin(a0)
        e1x = cx + rr * math.cos(a1)
        e1y = cy + rr * math.sin(a1)
        d0 = math.hypot(x - e0x, y - e0y)
        d1 = math.hypot(x - e1x, y - e1y)
        if d0 < d1 or (d0 == d1 and (e0x < e1x or (e0x == e1x and e0y <= e1y))):
            return d0, e0x, e0y, 0.0
        return d1, e1x, e1y, 0.0
    cx, cy, cz, rr = d[0], d[1], d[2], d[3]
    dx = x - cx
    dy = y - cy
    dz = zz - cz
    nrm = math.sqrt(dx * dx + dy * dy + dz * dz)
    if nrm == 0.0:
        return rr, cx + rr, cy, cz
    sc = rr / nrm
    return abs(nrm - rr), cx + sc * dx, cy + sc * dy, cz + sc * dz


@njit(cache=True)
def _project(kinds, data, comp, x, y, zz, tol):
    n = kinds.shape[0]
    dists = np.empty(n)
    pts = np.empty((n, 3))
    dmin = np.inf
    for p in range(n):
        dd, px, py, pz = _proj_one(kinds[p], data[p], x, y, zz)
        dists[p] = dd
        pts[p, 0] = px
        pts[p, 1] = py
        pts[p, 2] = pz
        if dd < dmin:
            dmin = dd
    # tie-break: smallest component id, then lexicographically smallest point
    bc = -1
    bx = by = bz = 0.0
    for p in range(n):
        if dists[p] > dmin + tol:
            continue
        c = comp[p]
        px, py, pz = pts[p, 0], pts[p, 1], pts[p, 2]
        take = bc == -1
        if not take and c < bc:
            take = True
        elif not take and c == bc:
            if px < bx or (px == bx and (py < by or (py == by and pz < bz))):
                take = True
        if take:
            bc = c
            bx, by, bz = px, py, pz
    return bx, by, bz, bc


@njit(cache=True)
def _bv(kind, const, x, y, zz):
    if kind == BV_CONST:
        return const
    if kind == BV_DISK_LOG:
        return 0.5 * math.log((x - 2.0) ** 2 + y * y)
    if kind == BV_BALL_INV:
        return ((x - 2.0) ** 2 + y * y + zz * zz) ** -0.5
    r = math.hypot(x, y)
    if kind == BV_SECTOR_TOP:
        return math.exp(-0.5 * r * r)
    if kind == BV_SECTOR_BOTTOM:
        return -(r ** (1.0 / 3.0)) + math.exp(-0.5 * r * r)
    a = math.atan2(y, x)
    if a > 0.0:
        a -= TWO_PI
    return math.sin(a / 3.0) + math.exp(-0.5)


@njit(cache=True)
def _src(kind, const, x, y, zz):
    if kind == SRC_CONST:
        return const
    if kind == SRC_SECTOR:
        r2 = x * x + y * y
        return -(2.0 - r2) * math.exp(-0.5 * r2)
    return 0.0


@njit(cache=True, parallel=True)
def _walk_kernel(points, z0, eps, max_steps, dim, kinds, data, comp,
                 bv_kind, bv_const, src_kind, src_const, mode, tol):
    n = points.shape[0]
    values = np.empty(n)
    taus = np.empty(n, dtype=np.int64)
    trunc = np.zeros(n, dtype=np.uint8)
    err = np.zeros(n, dtype=np.uint8)
    s0 = dim - 1
    s = s0 + (dim if mode == 1 else 0)
    for i in prange(n):
        x = z0[0]
        y = z0[1]
        zz = z0[2] if dim == 3 else 0.0
        acc = 0.0
        tau = 0
        bad = False
        for k in range(max_steps):
            r = _min_dist(kinds, data, x, y, zz)
            if mode != 3 and r < eps:
                break
            base = s * k
            if mode == 1:
                u1 = points[i, base + s0]
                rad = math.sqrt(u1) if dim == 2 else np.cbrt(u1)
                if rad == 0.0:
                    bad = True
                    break
                sd = r * rad
                if dim == 2:
                    wang = TWO_PI * points[i, base + s0 + 1]
                    wx = x + sd * math.cos(wang)
                    wy = y + sd * math.sin(wang)
                    wz = 0.0
                    gg = math.log(r / sd) / TWO_PI
                    vol = np.pi * r * r
                else:
                    lam = 2.0 * points[i, base + s0 + 1] - 1.0
                    th = TWO_PI * points[i, base + s0 + 2]
                    rho = math.sqrt(1.0 - lam * lam)
                    wx = x + sd * rho * math.cos(th)
                    wy = y + sd * rho * math.sin(th)
                    wz = zz + sd * lam
                    gg = (1.0 / sd - 1.0 / r) / (4.0 * np.pi)
                    vol = (4.0 / 3.0) * np.pi * (r * r * r)
                acc -= vol * gg * _src(src_kind, src_const, wx, wy, wz)
            elif mode == 2:
                acc -= (src_const / (2.0 * dim)) * r * r
            if dim == 2:
                ang = TWO_PI * points[i, base]
                x += r * math.cos(ang)
                y += r * math.sin(ang)
            else:
                lam = 2.0 * points[i, base] - 1.0
                th = TWO_PI * points[i, base + 1]
                rho = math.sqrt(1.0 - lam * lam)
                x += r * rho * math.cos(th)
                y += r * rho * math.sin(th)
                zz += r * lam
            tau += 1
        taus[i] = tau
        if bad:
            err[i] = 1
            values[i] = np.nan
            continue
        if mode != 3 and tau == max_steps:
            if _min_dist(kinds, data, x, y, zz) >= eps:
                trunc[i] = 1
        px, py, pz, cid = _project(kinds, data, comp, x, y, zz, tol)
        values[i] = _bv(bv_kind[cid], bv_const[cid], px, py, pz) + acc
    return values, taus, trunc, err


@njit(cache=True, parallel=True)
def _indicator_kernel(points, z0, eps, dim, kinds, data, a_mask):
    n = points.shape[0]
    s0 = dim - 1
    steps = points.shape[1] // s0
    out = np.zeros(n, dtype=np.uint8)
    for i in prange(n):
        x = z0[0]
        y = z0[1]
        zz = z0[2] if dim == 3 else 0.0
        for j in range(steps):
            r = _min_dist(kinds, data, x, y, zz)
            base = s0 * j
            if dim == 2:
                ang = TWO_PI * points[i, base]
                x += r * math.cos(ang)
                y += r * math.sin(ang)
            else:
                lam = 2.0 * points[i, base] - 1.0
                th = TWO_PI * points[i, base + 1]
                rho = math.sqrt(1.0 - lam * lam)
                x += r * rho * math.cos(th)
                y += r * rho * math.sin(th)
                zz += r * lam
            r1 = np.inf
            r0 = np.inf
            for p in range(kinds.shape[0]):
                dd = _dist_one(kinds[p], data[p], x, y, zz)
                if a_mask[p]:
                    if dd < r1:
                        r1 = dd
                elif dd < r0:
                    r0 = dd
            if j < steps - 1:
                if r1 < eps or r0 < eps:
                    break
            elif r1 < eps:
                out[i] = 1
    return out


def walk_batch(points, z0, eps, max_steps, geom, mode, tol):
    """See ``numpy_backend.walk_batch``; identical contract."""
    dim, kinds, data, comp, bv_kind, bv_const, src_kind, src_const = geom
    z0 = np.asarray(z0, dtype=np.float64)
    values, taus, trunc, err = _walk_kernel(
        np.ascontiguousarray(points), z0, float(eps), int(max_steps),
        int(dim), kinds, data, comp, bv_kind, bv_const,
        int(src_kind), float(src_const), int(mode), float(tol))
    if err.any():
        k = int(np.flatnonzero(err)[0])
        raise SingularGreenError(
            f"sample point coincides with the ball center (walk {k})")
    return values, taus, trunc


def indicator_batch(points, z0, eps, geom, a_mask):
    dim, kinds, data = geom[0], geom[1], geom[2]
    z0 = np.asarray(z0, dtype=np.float64)
    mask = np.asarray(a_mask, dtype=np.uint8)
    return _indicator_kernel(np.ascontiguousarray(points), z0, float(eps),
                             int(dim), kinds, data, mask)
