"""Both kernel backends must implement the same walk, step for step.

Values may differ by floating-point association order only; integer outputs
(step counts, truncation flags, box indicators) must match exactly.
"""

import numpy as np
import pytest

from wosq import _kernels, engine, samplers
from wosq.engine import MODES, WalkConfig
from wosq.errors import SingularGreenError

numba_backend = pytest.importorskip("wosq._kernels.numba_backend")
numpy_backend = _kernels.get_backend("numpy")

EXAMPLES = ["disk_example", "ball_example", "sector_example",
            "dumbbell_example", "gasket_example"]


def batch(backend, ex, kind, n=512, seed=99):
    cfg = WalkConfig(eps=ex.eps, max_steps=ex.max_steps)
    dim = ex.domain.dim
    s = engine.coords_per_step(dim, kind)
    pts = samplers.generate(samplers.SamplerSpec("mc", s * ex.max_steps, seed), n)
    return backend.walk_batch(pts, np.asarray(ex.z0, dtype=np.float64), cfg.eps,
                              cfg.max_steps, ex.domain.encode(), MODES[kind],
                              ex.domain.tol)


@pytest.mark.parametrize("fixture", EXAMPLES)
def test_walk_parity(fixture, request):
    ex = request.getfixturevalue(fixture)
    a = batch(numba_backend, ex, ex.kind)
    b = batch(numpy_backend, ex, ex.kind)
    np.testing.assert_array_equal(a[1], b[1])  # taus
    np.testing.assert_array_equal(a[2], b[2])  # truncation flags
    np.testing.assert_allclose(a[0], b[0], rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("kind", list(MODES))
def test_mode_parity_on_disk(kind, disk_example):
    ex = disk_example
    a = batch(numba_backend, ex, kind)
    b = batch(numpy_backend, ex, kind)
    np.testing.assert_array_equal(a[1], b[1])
    np.testing.assert_allclose(a[0], b[0], rtol=1e-12, atol=1e-12)


def test_singular_green_raised_by_both(disk_example):
    from wosq import geometry
    cfg = {"dimension": 2, "composition": "outer_minus_holes",
           "components": [{"kind": "circle",
                           "params": {"center": [0, 0], "radius": 1.0},
                           "boundary_value": {"const": 0.0}}],
           "source": {"kind": "const", "value": -2.0}}
    dom = geometry.from_config(cfg, "poisson-disk")
    pts = np.full((4, 3), 0.5)
    pts[:, 1] = 0.0  # zero ball-radius coordinate => singular Green draw
    for backend in (numba_backend, numpy_backend):
        with pytest.raises(SingularGreenError):
            backend.walk_batch(pts, np.zeros(2), 1e-4, 1, dom.encode(),
                               MODES["source"], dom.tol)


@pytest.mark.parametrize("fixture", ["disk_example", "sector_example",
                                     "dumbbell_example", "gasket_example"])
def test_indicator_parity(fixture, request, rng):
    ex = request.getfixturevalue(fixture)
    enc = ex.domain.encode()
    z0 = np.asarray(ex.z0, dtype=np.float64)
    x = rng.random((2048, 2))
    mask = np.ones(ex.domain.n_pieces, dtype=bool)
    for k in (1, 2):
        a = numba_backend.indicator_batch(x[:, :k], z0, 0.05, enc, mask)
        b = numpy_backend.indicator_batch(x[:, :k], z0, 0.05, enc, mask)
        np.testing.assert_array_equal(a, b)


def test_env_flag_selects_backend(monkeypatch):
    assert _kernels.get_backend("numpy").name == "numpy"
    assert _kernels.get_backend("numba").name == "numba"
    with pytest.raises(ValueError):
        _kernels.get_backend("fortran")
