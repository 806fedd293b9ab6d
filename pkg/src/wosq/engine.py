"""Walk-on-spheres estimators.

Each walk consumes one row of a point matrix: step k reads its coordinates
from a fixed block of the row (sphere-direction block first, then the
ball-sample block when a pointwise source is integrated), so the estimator
is a deterministic function on the unit cube and any point-set backend can
drive it.  Scalar reference walks live here; ``estimate`` dispatches whole
batches to the compiled kernels.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels, samplers, transforms
from .errors import (SamplerDimensionMismatchError, SingularGreenError,
                     StartInShellError)

MODES = {"harmonic": 0, "source": 1, "const_source": 2, "fixed_step": 3}


@dataclass(frozen=True)
class WalkConfig:
    eps: float = 1e-3
    max_steps: int = 200


@dataclass
class WalkResult:
    tau: int
    hit: object            # BoundaryHit at the projected exit point
    radii: np.ndarray      # sphere radius of every move taken
    source_sum: float      # accumulated source correction
    value: float
    truncated: bool
    coords_used: int


@dataclass
class Estimate:
    value: float
    n: int
    values: np.ndarray
    tau_mean: float
    truncated: int

    @property
    def truncation_rate(self):
        return self.truncated / self.n


def coords_per_step(dim, kind):
    """Row coordinates consumed per walk step."""
    return (dim - 1) + (dim if kind == "source" else 0)


def coords_needed(dim, kind, max_steps):
    return coords_per_step(dim, kind) * max_steps


def _check_start(domain, z0, config, kind):
    r0 = domain.distance(z0)
    if kind != "fixed_step" and r0 < config.eps:
        raise StartInShellError(
            f"start point is within eps={config.eps} of the boundary")
    return r0


def _psi0(dim, coords, cur):
    if dim == 2:
        return transforms.circle_map(coords[cur]), cur + 1
    return transforms.hatbox_map(coords[cur:cur + 2]), cur + 2


def _finish(domain, z, tau, radii, gsum, truncated, cur):
    hit = domain.project(z)
    return WalkResult(tau=tau, hit=hit, radii=np.array(radii),
                      source_sum=gsum, value=hit.value - gsum,
                      truncated=truncated, coords_used=cur)


def walk(domain, z0, coords, config=WalkConfig()):
    """Single harmonic walk; returns the boundary value at the exit point."""
    coords = np.asarray(coords, dtype=np.float64).ravel()
    _require_coords(coords, domain.dim, "harmonic", config.max_steps)
    _check_start(domain, z0, config, "harmonic")
    z = np.asarray(z0, dtype=np.float64)
    cur = 0
    radii = []
    for _ in range(config.max_steps):
        r = domain.boundary_distance(z)
        if r < config.eps:
            return _finish(domain, z, len(radii), radii, 0.0, False, cur)
        psi, cur = _psi0(domain.dim, coords, cur)
        z = z + r * psi
        radii.append(r)
    truncated = domain.boundary_distance(z) >= config.eps
    return _finish(domain, z, len(radii), radii, 0.0, truncated, cur)


def walk_with_source(domain, z0, coords, config=WalkConfig()):
    """Walk integrating the domain's pointwise source term: each step draws
    one point in the current ball and subtracts vol * G * g."""
    coords = np.asarray(coords, dtype=np.float64).ravel()
    _require_coords(coords, domain.dim, "source", config.max_steps)
    _check_start(domain, z0, config, "source")
    d = domain.dim
    z = np.asarray(z0, dtype=np.float64)
    cur = 0
    radii = []
    gsum = 0.0
    for _ in range(config.max_steps):
        r = domain.boundary_distance(z)
        if r < config.eps:
            return _finish(domain, z, len(radii), radii, gsum, False, cur)
        psi, cur = _psi0(d, coords, cur)
        if d == 2:
            ball = transforms.disk_map(coords[cur:cur + 2])
            rad = math.sqrt(coords[cur])
            cur += 2
        else:
            ball = transforms.ball3_map(coords[cur:cur + 3])
            rad = np.cbrt(coords[cur])
            cur += 3
        w = z + r * ball
        gsum += (transforms.ball_volume(d, r) * transforms.green(d, r, r * rad)
                 * domain.source_value(w))
        z = z + r * psi
        radii.append(r)
    truncated = domain.boundary_distance(z) >= config.eps
    return _finish(domain, z, len(radii), radii, gsum, truncated, cur)


def walk_constant_source(domain, z0, coords, config=WalkConfig()):
    """Walk for a spatially constant source nu: the per-ball integral is
    exact, nu/(2d) * r^2, so no extra coordinates are consumed."""
    coords = np.asarray(coords, dtype=np.float64).ravel()
    _require_coords(coords, domain.dim, "const_source", config.max_steps)
    _check_start(domain, z0, config, "const_source")
    nu = domain.source_const
    d = domain.dim
    z = np.asarray(z0, dtype=np.float64)
    cur = 0
    radii = []
    gsum = 0.0
    for _ in range(config.max_steps):
        r = domain.boundary_distance(z)
        if r < config.eps:
            return _finish(domain, z, len(radii), radii, gsum, False, cur)
        psi, cur = _psi0(d, coords, cur)
        gsum += (nu / (2.0 * d)) * r * r
        z = z + r * psi
        radii.append(r)
    truncated = domain.boundary_distance(z) >= config.eps
    return _finish(domain, z, len(radii), radii, gsum, truncated, cur)


def fixed_step_walk(domain, z0, coords, k):
    """Exactly k moves with no shell test, then project to the boundary."""
    coords = np.asarray(coords, dtype=np.float64).ravel()
    _require_coords(coords, domain.dim, "fixed_step", k)
    domain.distance(z0)
    z = np.asarray(z0, dtype=np.float64)
    cur = 0
    radii = []
    for _ in range(k):
        r = domain.boundary_distance(z)
        psi, cur = _psi0(domain.dim, coords, cur)
        z = z + r * psi
        radii.append(r)
    return _finish(domain, z, k, radii, 0.0, False, cur)


def _require_coords(coords, dim, kind, max_steps):
    needed = coords_needed(dim, kind, max_steps)
    if coords.size < needed:
        raise SamplerDimensionMismatchError(
            f"walk needs {needed} coordinates per row, got {coords.size}")


def estimate(domain, z0, sampler_spec, n, config=WalkConfig(), kind="harmonic"):
    """Mean of n independent walk values driven by one point matrix."""
    if kind not in MODES:
        raise ValueError(f"unknown estimator kind {kind!r}")
    _check_start(domain, z0, config, kind)
    needed = coords_needed(domain.dim, kind, config.max_steps)
    if sampler_spec.dim < needed:
        raise SamplerDimensionMismatchError(
            f"sampler dim {sampler_spec.dim} < {needed} coordinates needed "
            f"for {kind} walks of up to {config.max_steps} steps")
    points = samplers.generate(sampler_spec, n)
    values, taus, trunc = _kernels.walk_batch(
        points, np.asarray(z0, dtype=np.float64), config.eps,
        config.max_steps, domain.encode(), MODES[kind], domain.tol)
    return Estimate(value=float(values.mean()), n=n, values=values,
                    tau_mean=float(taus.mean()), truncated=int(trunc.sum()))
