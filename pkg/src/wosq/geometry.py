"""Domains built from analytic primitives with exact distance and projection.

A domain is described by a small JSON-able config (see ``from_config``) and
compiled at build time into a flat list of boundary *pieces*: full circles,
segments, circular arcs (2D) or spheres (3D).  Union compositions are clipped
exactly, so at query time distance is always a closed-form minimum over
pieces.  The flat arrays double as the encoding consumed by the numeric
kernels.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, PointOutsideDomainError

# piece kinds
KIND_CIRCLE = 0
KIND_SEGMENT = 1
KIND_ARC = 2
KIND_SPHERE = 3

# boundary-value formulas
BV_CONST = 0
BV_DISK_LOG = 1
BV_BALL_INV = 2
BV_SECTOR_TOP = 3
BV_SECTOR_BOTTOM = 4
BV_SECTOR_ARC = 5

BV_FORMULA_IDS = {
    "disk_log": BV_DISK_LOG,
    "ball_inv": BV_BALL_INV,
    "sector_top": BV_SECTOR_TOP,
    "sector_bottom": BV_SECTOR_BOTTOM,
    "sector_arc": BV_SECTOR_ARC,
}

# source formulas
SRC_ZERO = 0
SRC_CONST = 1
SRC_SECTOR = 2

SRC_FORMULA_IDS = {"sector_source": SRC_SECTOR}

TWO_PI = 2.0 * math.pi
REL_TOL = 1e-9  # geometric equality scale, multiplied by r_max


@dataclass
class BoundaryHit:
    """Projection of an interior point onto the boundary."""

    point: np.ndarray
    component_id: int
    value: float


def sector_angle(x, y):
    """Polar angle mapped into (-2*pi, 0] so the sector range [-3*pi/2, 0] is
    contiguous."""
    a = math.atan2(y, x)
    return a if a <= 0.0 else a - TWO_PI


def eval_boundary_value(kind, const, p):
    if kind == BV_CONST:
        return const
    x = float(p[0])
    y = float(p[1])
    if kind == BV_DISK_LOG:
        return 0.5 * math.log((x - 2.0) ** 2 + y * y)
    if kind == BV_BALL_INV:
        z = float(p[2])
        return ((x - 2.0) ** 2 + y * y + z * z) ** -0.5
    r = math.hypot(x, y)
    if kind == BV_SECTOR_TOP:
        return math.exp(-0.5 * r * r)
    if kind == BV_SECTOR_BOTTOM:
        return -(r ** (1.0 / 3.0)) + math.exp(-0.5 * r * r)
    if kind == BV_SECTOR_ARC:
        return math.sin(sector_angle(x, y) / 3.0) + math.exp(-0.5)
    raise ConfigError(f"unknown boundary formula code {kind}")


def eval_source_value(kind, const, p):
    if kind == SRC_ZERO:
        return 0.0
    if kind == SRC_CONST:
        return const
    if kind == SRC_SECTOR:
        r2 = float(p[0]) ** 2 + float(p[1]) ** 2
        return -(2.0 - r2) * math.exp(-0.5 * r2)
    raise ConfigError(f"unknown source formula code {kind}")


# ---------------------------------------------------------------------------
# per-piece distance / projection (scalar reference path)

def piece_distance(kind, d, z):
    if kind == KIND_CIRCLE:
        return abs(math.hypot(z[0] - d[0], z[1] - d[1]) - d[2])
    if kind == KIND_SEGMENT:
        return _segment_project(d, z)[0]
    if kind == KIND_ARC:
        return _arc_project(d, z)[0]
    if kind == KIND_SPHERE:
        dx, dy, dz = z[0] - d[0], z[1] - d[1], z[2] - d[2]
        return abs(math.sqrt(dx * dx + dy * dy + dz * dz) - d[3])
    raise ConfigError(f"unknown piece kind {kind}")


def piece_project(kind, d, z):
    """Return (distance, nearest point) for one piece."""
    if kind == KIND_CIRCLE:
        cx, cy, rr = d[0], d[1], d[2]
        dx, dy = z[0] - cx, z[1] - cy
        nrm = math.hypot(dx, dy)
        if nrm == 0.0:
            return rr, np.array([cx + rr, cy])
        return abs(nrm - rr), np.array([cx + rr * dx / nrm, cy + rr * dy / nrm])
    if kind == KIND_SEGMENT:
        dist, t = _segment_project(d, z)
        p = np.array([d[0] + t * (d[2] - d[0]), d[1] + t * (d[3] - d[1])])
        return dist, p
    if kind == KIND_ARC:
        dist, ang = _arc_project(d, z)
        return dist, np.array([d[0] + d[2] * math.cos(ang), d[1] + d[2] * math.sin(ang)])
    if kind == KIND_SPHERE:
        cx, cy, cz, rr = d[0], d[1], d[2], d[3]
        dx, dy, dz = z[0] - cx, z[1] - cy, z[2] - cz
        nrm = math.sqrt(dx * dx + dy * dy + dz * dz)
        if nrm == 0.0:
            return rr, np.array([cx + rr, cy, cz])
        s = rr / nrm
        return abs(nrm - rr), np.array([cx + s * dx, cy + s * dy, cz + s * dz])
    raise ConfigError(f"unknown piece kind {kind}")


def _segment_project(d, z):
    ax, ay, bx, by = d[0], d[1], d[2], d[3]
    ux, uy = bx - ax, by - ay
    t = ((z[0] - ax) * ux + (z[1] - ay) * uy) / (ux * ux + uy * uy)
    t = min(max(t, 0.0), 1.0)
    px, py = ax + t * ux, ay + t * uy
    return math.hypot(z[0] - px, z[1] - py), t


def _arc_project(d, z):
    """Distance to an arc and the angle of the nearest arc point."""
    cx, cy, rr, a0, width = d[0], d[1], d[2], d[3], d[4]
    dx, dy = z[0] - cx, z[1] - cy
    nrm = math.hypot(dx, dy)
    if nrm == 0.0:
        return rr, a0
    phi = math.atan2(dy, dx)
    delta = (phi - a0) % TWO_PI
    if delta <= width:
        return abs(nrm - rr), phi
    e0x, e0y = cx + rr * math.cos(a0), cy + rr * math.sin(a0)
    a1 = a0 + width
    e1x, e1y = cx + rr * math.cos(a1), cy + rr * math.sin(a1)
    d0 = math.hypot(z[0] - e0x, z[1] - e0y)
    d1 = math.hypot(z[0] - e1x, z[1] - e1y)
    if d0 < d1 or (d0 == d1 and (e0x, e0y) <= (e1x, e1y)):
        return d0, a0
    return d1, a1


def project_encoded(kinds, data, comp, z, tol):
    """Nearest boundary point over all pieces; ties within ``tol`` of the
    minimum resolve to the smallest component id, then the lexicographically
    smallest point.  Returns (point, component_id)."""
    dists = [piece_project(int(k), d, z) for k, d in zip(kinds, data)]
    dmin = min(d for d, _ in dists)
    best = None
    for (d, p), c in zip(dists, comp):
        if d > dmin + tol:
            continue
        key = (int(c), tuple(p.tolist()))
        if best is None or key < best[0]:
            best = (key, p, int(c))
    _, point, cid = best
    return point, cid


# ---------------------------------------------------------------------------
# domain

@dataclass
class Domain:
    """Immutable compiled domain; all queries are pure."""

    name: str
    dim: int
    kinds: np.ndarray          # (n_pieces,) int64
    data: np.ndarray           # (n_pieces, 8) float64
    comp: np.ndarray           # (n_pieces,) int64 component id per piece
    bv_kind: np.ndarray        # (n_components,) int64
    bv_const: np.ndarray       # (n_components,) float64
    source_kind: int
    source_const: float
    r_max: float
    composition: str
    members: list = field(default_factory=list)   # region members for containment
    containment: str = "auto"
    labels: list = field(default_factory=list)

    @property
    def n_pieces(self):
        return len(self.kinds)

    @property
    def n_components(self):
        return len(self.bv_kind)

    @property
    def tol(self):
        return REL_TOL * self.r_max

    # -- containment ------------------------------------------------------
    def contains(self, z, tol=None):
        z = np.asarray(z, dtype=np.float64)
        if tol is None:
            tol = self.tol
        if self._contains_strict(z, tol):
            return True
        return self.boundary_distance(z) <= tol

    def _contains_strict(self, z, tol):
        if self.containment == "none":
            return True
        if self.composition == "outer_minus_holes":
            outer = self.members[0]
            if not _member_contains(outer, z, tol):
                return False
            for hole in self.members[1:]:
                if _member_contains(hole, z, -tol):
                    return False
            return True
        if self.composition == "union":
            return any(_member_contains(m, z, tol) for m in self.members)
        if self.containment == "sector":
            r = math.hypot(z[0], z[1])
            if r > 1.0 + tol:
                return False
            th = sector_angle(z[0], z[1])
            return -1.5 * math.pi - 1e-12 <= th <= 0.0
        return False

    # -- queries ------------------------------------------------------------
    def boundary_distance(self, z):
        """Distance to the boundary, no containment check."""
        z = np.asarray(z, dtype=np.float64)
        return min(piece_distance(int(k), d, z) for k, d in zip(self.kinds, self.data))

    def distance(self, z):
        z = np.asarray(z, dtype=np.float64)
        if not self.contains(z):
            raise PointOutsideDomainError(f"{z.tolist()} is not in {self.name}")
        return self.boundary_distance(z)

    def project(self, z):
        z = np.asarray(z, dtype=np.float64)
        if not self.contains(z):
            raise PointOutsideDomainError(f"{z.tolist()} is not in {self.name}")
        point, cid = project_encoded(self.kinds, self.data, self.comp, z, self.tol)
        return BoundaryHit(point=point, component_id=cid,
                           value=self.boundary_value_at(cid, point))

    def boundary_value_at(self, component_id, point):
        return eval_boundary_value(int(self.bv_kind[component_id]),
                                   float(self.bv_const[component_id]), point)

    def source_value(self, w):
        return eval_source_value(self.source_kind, self.source_const, w)

    def piece_mask_for_components(self, component_ids):
        ids = set(int(i) for i in component_ids)
        return np.array([int(c) in ids for c in self.comp], dtype=bool)

    def encode(self):
        """Flat-array tuple consumed by the numeric kernels."""
        return (self.dim, self.kinds, self.data, self.comp,
                self.bv_kind, self.bv_const, self.source_kind, self.source_const)


def _member_contains(m, z, slack):
    """Closed membership in a region member, inflated by ``slack``."""
    kind = m[0]
    if kind == "disk":
        _, cx, cy, rr = m
        return math.hypot(z[0] - cx, z[1] - cy) <= rr + slack
    if kind == "ball":
        _, cx, cy, cz, rr = m
        return math.sqrt((z[0] - cx) ** 2 + (z[1] - cy) ** 2 + (z[2] - cz) ** 2) <= rr + slack
    if kind == "box":
        _, x0, x1, y0, y1 = m
        return (x0 - slack <= z[0] <= x1 + slack) and (y0 - slack <= z[1] <= y1 + slack)
    raise ConfigError(f"unknown member kind {kind}")


# ---------------------------------------------------------------------------
# union clipping

def _circle_hidden_events(cx, cy, rr, member):
    """Angles where the circle crosses the member's boundary."""
    events = []
    if member[0] == "disk":
        _, ox, oy, orr = member
        d = math.hypot(ox - cx, oy - cy)
        if d == 0.0 or d >= rr + orr or d + min(rr, orr) <= max(rr, orr):
            return events  # disjoint or nested: no crossing
        t = (rr * rr + d * d - orr * orr) / (2.0 * rr * d)
        t = min(max(t, -1.0), 1.0)
        w = math.acos(t)
        psi = math.atan2(oy - cy, ox - cx)
        events.extend([psi - w, psi + w])
    elif member[0] == "box":
        _, x0, x1, y0, y1 = member
        for xv in (x0, x1):
            c = (xv - cx) / rr
            if -1.0 < c < 1.0:
                a = math.acos(c)
                events.extend([a, -a])
        for yv in (y0, y1):
            s = (yv - cy) / rr
            if -1.0 < s < 1.0:
                a = math.asin(s)
                events.extend([a, math.pi - a])
    return events


def _segment_hidden_events(a, b, member):
    """Parameters t in (0,1) where segment a->b crosses the member boundary."""
    ax, ay = a
    ux, uy = b[0] - ax, b[1] - ay
    ts = []
    if member[0] == "disk":
        _, cx, cy, rr = member
        fx, fy = ax - cx, ay - cy
        qa = ux * ux + uy * uy
        qb = 2.0 * (fx * ux + fy * uy)
        qc = fx * fx + fy * fy - rr * rr
        disc = qb * qb - 4.0 * qa * qc
        if disc > 0.0:
            sq = math.sqrt(disc)
            for t in ((-qb - sq) / (2 * qa), (-qb + sq) / (2 * qa)):
                if 0.0 < t < 1.0:
                    ts.append(t)
    elif member[0] == "box":
        _, x0, x1, y0, y1 = member
        if ux != 0.0:
            ts.extend((xv - ax) / ux for xv in (x0, x1))
        if uy != 0.0:
            ts.extend((yv - ay) / uy for yv in (y0, y1))
        ts = [t for t in ts if 0.0 < t < 1.0]
    return ts


def _clip_union_circle(cx, cy, rr, others):
    """Visible arcs of a circle not strictly interior to any other member.

    Returns a list of (a0, width) intervals, or None for the full circle.
    """
    events = []
    for m in others:
        events.extend(_circle_hidden_events(cx, cy, rr, m))
    events = sorted({e % TWO_PI for e in events})

    def hidden(phi):
        p = (cx + rr * math.cos(phi), cy + rr * math.sin(phi))
        return any(_member_contains(m, p, -1e-12) for m in others)

    if not events:
        return [] if hidden(0.0) else None
    arcs = []
    for i, a in enumerate(events):
        b = events[(i + 1) % len(events)]
        width = (b - a) % TWO_PI
        if width < 1e-12:
            width = TWO_PI if len(events) == 1 else width
        mid = a + 0.5 * width
        if not hidden(mid):
            arcs.append((a, width))
    # merge adjacent visible arcs
    merged = []
    for a, w in arcs:
        if merged and abs((merged[-1][0] + merged[-1][1]) % TWO_PI - a % TWO_PI) < 1e-12:
            merged[-1] = (merged[-1][0], merged[-1][1] + w)
        else:
            merged.append((a, w))
    if len(merged) > 1:
        a0, w0 = merged[0]
        al, wl = merged[-1]
        if abs((al + wl) % TWO_PI - a0 % TWO_PI) < 1e-12:
            merged[0] = (al, wl + w0)
            merged.pop()
    return merged


def _clip_union_segment(a, b, others):
    """Visible sub-segments of a->b, as (t0, t1) parameter intervals."""
    ts = [0.0, 1.0]
    for m in others:
        ts.extend(_segment_hidden_events(a, b, m))
    ts = sorted(set(ts))

    def hidden(t):
        p = (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))
        return any(_member_contains(m, p, -1e-12) for m in others)

    spans = []
    for t0, t1 in zip(ts[:-1], ts[1:]):
        if t1 - t0 < 1e-14:
            continue
        if not hidden(0.5 * (t0 + t1)):
            if spans and abs(spans[-1][1] - t0) < 1e-14:
                spans[-1] = (spans[-1][0], t1)
            else:
                spans.append((t0, t1))
    return spans


# ---------------------------------------------------------------------------
# config parsing

def _region_member(comp, dim):
    kind = comp["kind"]
    p = comp["params"]
    if kind == "circle":
        if p["radius"] <= 0:
            raise ConfigError("circle radius must be positive")
        return ("disk", p["center"][0], p["center"][1], p["radius"])
    if kind == "ball":
        if dim != 3:
            raise ConfigError("ball members require dimension 3")
        if p["radius"] <= 0:
            raise ConfigError("ball radius must be positive")
        c = p["center"]
        return ("ball", c[0], c[1], c[2], p["radius"])
    if kind == "box":
        x0, x1 = p["x"]
        y0, y1 = p["y"]
        if not (x0 < x1 and y0 < y1):
            raise ConfigError("box needs x0<x1 and y0<y1")
        return ("box", x0, x1, y0, y1)
    raise ConfigError(f"component kind {kind!r} cannot act as a region")


def _bv_spec(comp, idx):
    bv = comp.get("boundary_value")
    if bv is None:
        raise ConfigError(f"component {idx} has no boundary_value")
    if "const" in bv:
        return BV_CONST, float(bv["const"])
    if "formula" in bv:
        fid = bv["formula"]
        if fid not in BV_FORMULA_IDS:
            raise ConfigError(f"unknown boundary formula id {fid!r}")
        return BV_FORMULA_IDS[fid], 0.0
    raise ConfigError(f"component {idx}: boundary_value needs 'const' or 'formula'")


def from_config(cfg, name="domain"):
    """Build a Domain from a config dict.

    Schema::

        {"dimension": 2 | 3,
         "composition": "outer_minus_holes" | "union" | "pieces",
         "components": [{"kind": ..., "params": {...},
                         "boundary_value": {"const": v} | {"formula": id},
                         "label": optional}, ...],
         "containment": {"kind": "sector" | "none"},   # pieces only
         "source": {"kind": "zero"} | {"kind": "const", "value": v}
                 | {"kind": "formula", "id": "sector_source"}}
    """
    dim = int(cfg.get("dimension", 2))
    if dim not in (2, 3):
        raise ConfigError("dimension must be 2 or 3")
    composition = cfg.get("composition", "outer_minus_holes")
    comps = cfg.get("components", [])
    if not comps:
        raise ConfigError("no components")

    bv_kind = np.zeros(len(comps), dtype=np.int64)
    bv_const = np.zeros(len(comps), dtype=np.float64)
    labels = []
    for i, c in enumerate(comps):
        bv_kind[i], bv_const[i] = _bv_spec(c, i)
        labels.append(c.get("label", f"component-{i}"))

    kinds, data, comp_ids = [], [], []

    def add_piece(kind, vals, cid):
        row = np.zeros(8, dtype=np.float64)
        row[:len(vals)] = vals
        kinds.append(kind)
        data.append(row)
        comp_ids.append(cid)

    members = []
    if composition in ("outer_minus_holes", "union"):
        members = [_region_member(c, dim) for c in comps]

    if composition == "outer_minus_holes":
        for i, m in enumerate(members):
            if m[0] == "disk":
                add_piece(KIND_CIRCLE, m[1:], i)
            elif m[0] == "ball":
                add_piece(KIND_SPHERE, m[1:], i)
            else:
                raise ConfigError("outer_minus_holes supports circles/balls only")
    elif composition == "union":
        if dim != 2:
            raise ConfigError("union composition is 2D only")
        for i, m in enumerate(members):
            others = members[:i] + members[i + 1:]
            if m[0] == "disk":
                arcs = _clip_union_circle(m[1], m[2], m[3], others)
                if arcs is None:
                    add_piece(KIND_CIRCLE, m[1:], i)
                else:
                    for a0, w in arcs:
                        add_piece(KIND_ARC, (m[1], m[2], m[3], a0 % TWO_PI, w), i)
            elif m[0] == "box":
                _, x0, x1, y0, y1 = m
                corners = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]
                for a, b in zip(corners, corners[1:] + corners[:1]):
                    for t0, t1 in _clip_union_segment(a, b, others):
                        ax = a[0] + t0 * (b[0] - a[0])
                        ay = a[1] + t0 * (b[1] - a[1])
                        bx = a[0] + t1 * (b[0] - a[0])
                        by = a[1] + t1 * (b[1] - a[1])
                        add_piece(KIND_SEGMENT, (ax, ay, bx, by), i)
            else:
                raise ConfigError("union supports circles and boxes only")
    elif composition == "pieces":
        if dim != 2:
            raise ConfigError("pieces composition is 2D only")
        for i, c in enumerate(comps):
            kind = c["kind"]
            p = c["params"]
            if kind == "segment":
                a, b = p["a"], p["b"]
                if a == b:
                    raise ConfigError("segment endpoints coincide")
                add_piece(KIND_SEGMENT, (a[0], a[1], b[0], b[1]), i)
            elif kind == "arc":
                if p["radius"] <= 0:
                    raise ConfigError("arc radius must be positive")
                a0, a1 = p["angles"]
                width = a1 - a0
                if not (0.0 < width < TWO_PI):
                    raise ConfigError("arc needs 0 < width < 2*pi")
                c0 = p["center"]
                add_piece(KIND_ARC, (c0[0], c0[1], p["radius"], a0 % TWO_PI, width), i)
            elif kind == "circle":
                c0 = p["center"]
                if p["radius"] <= 0:
                    raise ConfigError("circle radius must be positive")
                add_piece(KIND_CIRCLE, (c0[0], c0[1], p["radius"]), i)
            else:
                raise ConfigError(f"unsupported piece kind {kind!r}")
    else:
        raise ConfigError(f"unknown composition {composition!r}")

    src = cfg.get("source", {"kind": "zero"})
    if src["kind"] == "zero":
        source_kind, source_const = SRC_ZERO, 0.0
    elif src["kind"] == "const":
        source_kind, source_const = SRC_CONST, float(src["value"])
    elif src["kind"] == "formula":
        fid = src.get("id")
        if fid not in SRC_FORMULA_IDS:
            raise ConfigError(f"unknown source formula id {fid!r}")
        source_kind, source_const = SRC_FORMULA_IDS[fid], 0.0
    else:
        raise ConfigError(f"unknown source kind {src['kind']!r}")

    containment = "auto"
    if composition == "pieces":
        containment = cfg.get("containment", {}).get("kind", "none")
        if containment not in ("sector", "none"):
            raise ConfigError(f"unknown containment kind {containment!r}")

    kinds = np.array(kinds, dtype=np.int64)
    data = np.array(data, dtype=np.float64)
    comp_ids = np.array(comp_ids, dtype=np.int64)
    r_max = _enclosing_radius(kinds, data)

    return Domain(name=name, dim=dim, kinds=kinds, data=data, comp=comp_ids,
                  bv_kind=bv_kind, bv_const=bv_const,
                  source_kind=source_kind, source_const=source_const,
                  r_max=r_max, composition=composition, members=members,
                  containment=containment, labels=labels)


def _enclosing_radius(kinds, data):
    r = 0.0
    for k, d in zip(kinds, data):
        if k == KIND_CIRCLE or k == KIND_ARC:
            r = max(r, math.hypot(d[0], d[1]) + d[2])
        elif k == KIND_SEGMENT:
            r = max(r, math.hypot(d[0], d[1]), math.hypot(d[2], d[3]))
        elif k == KIND_SPHERE:
            r = max(r, math.sqrt(d[0] ** 2 + d[1] ** 2 + d[2] ** 2) + d[3])
    return r if r > 0.0 else 1.0


def load_domain(path, name=None):
    with open(path) as fh:
        cfg = json.load(fh)
    if name is None:
        name = str(path)
    return from_config(cfg, name=name)


# thin functional layer matching the operation names used elsewhere

def distance(domain, z):
    return domain.distance(z)


def project(domain, z):
    return domain.project(z)


def boundary_value(domain, hit):
    return domain.boundary_value_at(hit.component_id, hit.point)


def source_value(domain, w):
    return domain.source_value(w)
