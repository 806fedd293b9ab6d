"""Empirical probe of the dyadic box-count growth of k-step termination sets.

For a 2D harmonic walk, the set Theta_k of driver points x in [0,1)^k whose
walk first enters the boundary shell at exactly step k (and lands on a chosen
subset of boundary components) is probed on dyadic grids: a box of side 2^-m
is flagged when the indicator is non-constant over its corners plus a few
fixed interior sample points.  If the boundary of Theta_k has finite (k-1)
dimensional content, the flagged count grows like N^((k-1)/k) for N = 2^(km)
boxes, the rate behind the RQMC variance gains.
"""

import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import _kernels, samplers
from .errors import ConfigError
from .experiments import ExampleSpec, builtin_example

DEFAULT_EPS = 0.05          # much coarser than solver shells, so Theta_k has volume
INTERIOR_SAMPLES = 8
MAX_GRID_POINTS = 1 << 28   # memory guard on (2^m + 1)^k corner grids


@dataclass
class ProbeSpec:
    example: object            # ExampleSpec or built-in name
    k: int
    m: int                     # grid resolution: 2^m boxes per axis
    eps: float = DEFAULT_EPS
    components: list = None    # boundary component ids forming the target set

    def __post_init__(self):
        if isinstance(self.example, str):
            self.example = builtin_example(self.example)
        if self.example.domain.dim != 2:
            raise ConfigError("the box probe is defined for 2D examples")
        if not 1 <= self.k <= 3:
            raise ConfigError("k must be in {1, 2, 3}")
        if self.k * self.m > 36:
            raise ConfigError("k*m must be <= 36")
        if (2 ** self.m + 1) ** self.k > MAX_GRID_POINTS:
            raise ConfigError(f"grid of 2^{self.m} boxes per axis in {self.k} "
                              "dimensions exceeds the memory budget")

    @property
    def piece_mask(self):
        dom = self.example.domain
        if self.components is None:
            return np.ones(dom.n_pieces, dtype=bool)
        return dom.piece_mask_for_components(self.components)


def indicator_theta(example, k, eps, x, components=None):
    """1 iff the walk driven by x stays outside both shells for steps < k and
    enters the target-component shell at step k."""
    spec = ProbeSpec(example=example, k=k, m=1, eps=eps, components=components)
    pts = np.atleast_2d(np.asarray(x, dtype=np.float64))
    out = _indicator(spec, pts)
    return int(out[0]) if np.ndim(x) <= 1 else out


def _indicator(spec, pts):
    ex = spec.example
    return _kernels.indicator_batch(pts, ex.z0, spec.eps, ex.domain.encode(),
                                    spec.piece_mask)


def _interior_offsets(k):
    """Fixed quasi-random offsets strictly inside the unit box."""
    s = samplers.SamplerSpec("digital-net", dim=k, seed=0, randomize=False)
    return samplers.generate(s, 16)[1:1 + INTERIOR_SAMPLES]


@dataclass
class BoxCount:
    k: int
    m: int
    flagged: int
    total: int
    volume_estimate: float


def boundary_box_count(spec):
    """Count dyadic boxes whose sampled indicator values are non-constant."""
    k, m = spec.k, spec.m
    nb = 2 ** m
    scale = 1.0 / nb

    # corner grid, shared between adjacent boxes
    axes = [np.arange(nb + 1, dtype=np.float64) * scale] * k
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, k)
    np.minimum(grid, np.nextafter(1.0, 0.0), out=grid)  # domain is [0,1)^k
    corners = _indicator(spec, grid).reshape((nb + 1,) * k)

    csum = np.zeros((nb,) * k, dtype=np.int64)
    for shifts in product((slice(0, -1), slice(1, None)), repeat=k):
        csum += corners[shifts]
    has1 = csum > 0
    has0 = csum < 2 ** k

    base_axes = [np.arange(nb, dtype=np.float64) * scale] * k
    base = np.stack(np.meshgrid(*base_axes, indexing="ij"), axis=-1).reshape(-1, k)
    ones = 0
    for off in _interior_offsets(k):
        vals = _indicator(spec, base + off * scale).reshape((nb,) * k)
        v = vals.astype(bool)
        has1 |= v
        has0 |= ~v
        ones += int(vals.sum())
    flagged = int(np.count_nonzero(has1 & has0))
    total = nb ** k
    return BoxCount(k=k, m=m, flagged=flagged, total=total,
                    volume_estimate=ones / (INTERIOR_SAMPLES * total))


def probe_study(example, k, ms, eps=DEFAULT_EPS, components=None):
    """BoxCount rows for each resolution in ``ms``."""
    return [boundary_box_count(ProbeSpec(example=example, k=k, m=m, eps=eps,
                                         components=components))
            for m in ms]


def growth_exponent(counts, k):
    """Least-squares exponent e with flagged-count ~ N^e for N = 2^(km).

    ``counts`` is a sequence of (m, count) pairs or BoxCount rows; at least
    three resolutions with nonzero counts are required.
    """
    pairs = [(c.m, c.flagged) if isinstance(c, BoxCount) else (c[0], c[1])
             for c in counts]
    pairs = [(m, c) for m, c in pairs if c > 0]
    if len(pairs) < 3:
        raise ConfigError("need at least 3 resolutions with nonzero counts")
    ms = np.array([m for m, _ in pairs], dtype=np.float64)
    lc = np.log2([c for _, c in pairs])
    slope = np.polyfit(ms, lc, 1)[0]
    return float(slope) / k
