"""Maps from uniform variates to spheres/balls and ball Green's functions.

All functions accept scalars or numpy arrays (broadcasting over the leading
axis) and are stateless.
"""

import numpy as np

from .errors import SingularGreenError

TWO_PI = 2.0 * np.pi


def circle_map(x):
    """Uniform point on the unit circle from one uniform variate.

    ``x`` may be a scalar or an array; output shape is ``x.shape + (2,)``.
    """
    x = np.asarray(x, dtype=np.float64)
    ang = TWO_PI * np.mod(x, 1.0)
    return np.stack([np.cos(ang), np.sin(ang)], axis=-1)


def disk_map(x):
    """Uniform point in the closed unit disk from two uniforms (radius², angle)."""
    x = np.asarray(x, dtype=np.float64)
    rad = np.sqrt(x[..., 0])
    ang = TWO_PI * x[..., 1]
    return np.stack([rad * np.cos(ang), rad * np.sin(ang)], axis=-1)


def hatbox_map(x):
    """Uniform point on the unit 2-sphere via the area-preserving cylinder map.

    Latitude is ``2*x1 - 1`` and longitude ``2*pi*x2``.
    """
    x = np.asarray(x, dtype=np.float64)
    lam = 2.0 * x[..., 0] - 1.0
    ang = TWO_PI * x[..., 1]
    rho = np.sqrt(np.maximum(1.0 - lam * lam, 0.0))
    return np.stack([rho * np.cos(ang), rho * np.sin(ang), lam], axis=-1)


def ball3_map(x):
    """Uniform point in the closed unit 3-ball: cube-root radius times a sphere point."""
    x = np.asarray(x, dtype=np.float64)
    rad = np.cbrt(x[..., 0])
    sph = hatbox_map(x[..., 1:3])
    return rad[..., None] * sph


def green(d, r, s):
    """Green's function of the d-ball of radius ``r`` evaluated at distance ``s``.

    ``s`` is the distance from the ball center to the evaluation point,
    0 < s <= r.  Raises ``SingularGreenError`` at s == 0 (a probability-zero
    draw; callers should not clamp).
    """
    r = np.asarray(r, dtype=np.float64)
    s = np.asarray(s, dtype=np.float64)
    if np.any(s == 0.0):
        raise SingularGreenError("green evaluated at the ball center")
    if d == 2:
        out = np.log(r / s) / TWO_PI
    elif d == 3:
        out = (1.0 / s - 1.0 / r) / (4.0 * np.pi)
    else:
        raise ValueError(f"unsupported dimension {d}")
    if out.ndim == 0:
        return float(out)
    return out


def ball_volume(d, r):
    """Volume of the d-ball of radius r, d in {2, 3}."""
    if d == 2:
        return np.pi * r * r
    if d == 3:
        return (4.0 / 3.0) * np.pi * r * r * r
    raise ValueError(f"unsupported dimension {d}")


def uniforms_per_step(d, with_source):
    """Uniform variates consumed per walk step: d-1 for the sphere draw plus
    d more when a ball point is needed for a source term."""
    s0 = d - 1
    return s0 + (d if with_source else 0)
