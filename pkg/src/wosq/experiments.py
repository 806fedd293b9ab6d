"""Benchmark examples and the variance-rate experiment harness.

Five built-in boundary-value problems (a multi-hole gasket plate, the unit
disk, a three-quarter "Pac-Man" sector with a source term, a dumbbell with a
constant source, and the unit 3-ball).  ``run_study`` estimates the solution
at the example's evaluation point for every (method, sample size, replicate)
cell; the table feeds log-log variance fits and variance-reduction factors.
"""

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import engine, geometry, samplers
from .errors import ConfigError, NoExactSolutionError, UnknownExampleError

EXAMPLE_NAMES = ("gasket", "disk", "sector", "dumbbell", "ball")
EXAMPLE_ALIASES = {"pacman": "sector", "pac-man": "sector"}

# evaluation point of the sector example, given in polar form
SECTOR_R0 = 0.1244
SECTOR_TH0 = -0.7906

_EXAMPLE_SETUP = {
    # name: (z0, eps, estimator kind)
    "gasket": ((0.240999, 0.3), 1e-3, "harmonic"),
    "disk": ((0.0, 0.5), 1e-4, "harmonic"),
    "sector": ((SECTOR_R0 * math.cos(SECTOR_TH0),
                SECTOR_R0 * math.sin(SECTOR_TH0)), 1e-4, "source"),
    "dumbbell": ((0.5, 0.0), 1e-4, "const_source"),
    "ball": ((0.2, 0.3, -0.1), 1e-4, "harmonic"),
}

DEFAULT_MAX_STEPS = 200


@dataclass
class ExampleSpec:
    name: str
    domain: geometry.Domain
    z0: np.ndarray
    eps: float
    kind: str                  # estimator kind, see engine.MODES
    max_steps: int = DEFAULT_MAX_STEPS

    @property
    def config(self):
        return engine.WalkConfig(eps=self.eps, max_steps=self.max_steps)

    @property
    def sampler_dim(self):
        return engine.coords_needed(self.domain.dim, self.kind, self.max_steps)


def builtin_example(name, eps=None, max_steps=DEFAULT_MAX_STEPS,
                    bv_overrides=None):
    """Fully configured ExampleSpec for a built-in example name.

    ``bv_overrides`` maps component index -> constant boundary value,
    for variants such as unbalancing the gasket bore temperatures.
    """
    name = EXAMPLE_ALIASES.get(name, name)
    if name not in EXAMPLE_NAMES:
        raise UnknownExampleError(
            f"unknown example {name!r}; choose from {', '.join(EXAMPLE_NAMES)}")
    domain = geometry.load_domain(samplers.data_path(name + ".json"), name)
    z0, default_eps, kind = _EXAMPLE_SETUP[name]
    if bv_overrides:
        for idx, val in bv_overrides.items():
            idx = int(idx)
            if not 0 <= idx < domain.n_components:
                raise ConfigError(f"no component {idx} in {name}")
            domain.bv_kind[idx] = geometry.BV_CONST
            domain.bv_const[idx] = float(val)
    return ExampleSpec(name=name, domain=domain,
                       z0=np.asarray(z0, dtype=np.float64),
                       eps=default_eps if eps is None else float(eps),
                       kind=kind, max_steps=max_steps)


def exact_solution(name, z):
    """Closed-form solution where one exists (disk, sector, ball)."""
    name = EXAMPLE_ALIASES.get(name, name)
    z = np.asarray(z, dtype=np.float64)
    if name == "disk":
        return 0.5 * math.log((z[0] - 2.0) ** 2 + z[1] ** 2)
    if name == "ball":
        return ((z[0] - 2.0) ** 2 + z[1] ** 2 + z[2] ** 2) ** -0.5
    if name == "sector":
        r = math.hypot(z[0], z[1])
        th = geometry.sector_angle(z[0], z[1])
        return r ** (1.0 / 3.0) * math.sin(th / 3.0) + math.exp(-0.5 * r * r)
    if name in EXAMPLE_NAMES:
        raise NoExactSolutionError(f"{name} has no closed-form solution")
    raise UnknownExampleError(f"unknown example {name!r}")


# ---------------------------------------------------------------------------
# studies

@dataclass
class StudyTable:
    """Per-(method, n, replicate) estimates for one example."""

    example: str
    methods: list
    ns: list
    replicates: int
    rows: list = field(default_factory=list)  # (method, n, replicate, estimate)
    exact: float = None

    def estimates(self, method, n):
        return np.array([e for m, nn, _, e in self.rows
                         if m == method and nn == n])

    def variance_rows(self):
        """(method, n, variance, mse) with the unbiased R-1 variance of the
        replicate means; mse adds the squared mean bias when an exact
        solution is known."""
        out = []
        for m in self.methods:
            for n in self.ns:
                vals = self.estimates(m, n)
                var = float(np.var(vals, ddof=1))
                mse = (var + (float(vals.mean()) - self.exact) ** 2
                       if self.exact is not None else None)
                out.append((m, n, var, mse))
        return out


def run_study(example, methods, ns, replicates, seed, randomize=True):
    """Run R replicates of every (method, n) cell; deterministic given seed.

    ``example`` is an ExampleSpec or a built-in name.  Each cell is keyed by
    (seed, replicate) independently of its position in the loop order.
    """
    if isinstance(example, str):
        example = builtin_example(example)
    methods = [samplers.canonical_backend(m) for m in methods]
    ns = [int(n) for n in ns]
    table = StudyTable(example=example.name, methods=methods, ns=ns,
                       replicates=replicates)
    try:
        table.exact = exact_solution(example.name, example.z0)
    except NoExactSolutionError:
        table.exact = None
    cfg = example.config
    for method in methods:
        for n in ns:
            for rep in range(replicates):
                spec = samplers.SamplerSpec(
                    backend=method, dim=example.sampler_dim, seed=seed,
                    replicate=rep, randomize=randomize)
                est = engine.estimate(example.domain, example.z0, spec, n,
                                      cfg, example.kind)
                table.rows.append((method, n, rep, est.value))
    return table


# ---------------------------------------------------------------------------
# fits and variance reduction factors

RQMC_METHODS = ("digital-net", "halton", "lattice")
POOLED = "rqmc-pooled"


@dataclass
class RegressionFit:
    """ln(variance) = alpha + beta * ln(n), least squares over n >= n_min."""

    method: str
    alpha: float
    beta: float
    n_lo: int
    n_hi: int


def _fit(pairs, method):
    ln_n = np.log([n for n, _ in pairs])
    ln_v = np.log([v for _, v in pairs])
    beta, alpha = np.polyfit(ln_n, ln_v, 1)
    return RegressionFit(method=method, alpha=float(alpha), beta=float(beta),
                         n_lo=min(n for n, _ in pairs),
                         n_hi=max(n for n, _ in pairs))


def fit_loglog(table, methods=None, n_min=128, pooled=True):
    """Per-method fits, plus a pooled fit over all RQMC methods present."""
    if methods is None:
        methods = table.methods
    methods = [samplers.canonical_backend(m) for m in methods]
    var = {(m, n, v) for m, n, v, _ in table.variance_rows()}
    fits = []
    pooled_pairs = []
    for m in methods:
        pairs = [(n, v) for mm, n, v in var if mm == m and n >= n_min and v > 0.0]
        if not pairs:
            raise ConfigError(
                f"no usable variance rows for method {m} with n >= {n_min}")
        fits.append(_fit(pairs, m))
        if m in RQMC_METHODS:
            pooled_pairs.extend(pairs)
    if pooled and pooled_pairs:
        fits.append(_fit(pooled_pairs, POOLED))
    return fits


def vrf(fits, method, baseline, n):
    """Fitted-variance ratio baseline/method at sample size n."""
    fm = _find_fit(fits, method)
    fb = _find_fit(fits, baseline)
    ln_n = math.log(n)
    return math.exp((fb.alpha + fb.beta * ln_n) - (fm.alpha + fm.beta * ln_n))


def _find_fit(fits, method):
    want = samplers.canonical_backend(method)
    for f in fits:
        if f.method == method or samplers.canonical_backend(f.method) == want:
            return f
    raise ConfigError(f"no fit for method {method!r}")


# ---------------------------------------------------------------------------
# artifacts

def _fmt(x):
    return repr(float(x))


def write_estimates_csv(table, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["example", "method", "n", "replicate", "estimate"])
        for m, n, rep, est in table.rows:
            w.writerow([table.example, m, n, rep, _fmt(est)])


def write_variance_csv(table, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["method", "n", "variance", "mse"])
        for m, n, var, mse in table.variance_rows():
            w.writerow([m, n, _fmt(var), "" if mse is None else _fmt(mse)])


def fits_to_json(fits, meta=None):
    doc = {"fits": {f.method: {"alpha": f.alpha, "beta": f.beta,
                               "n_lo": f.n_lo, "n_hi": f.n_hi}
                    for f in fits}}
    if meta:
        doc["config"] = meta
    return doc


def write_fits_json(fits, path, meta=None):
    with open(path, "w") as fh:
        json.dump(fits_to_json(fits, meta), fh, indent=1, sort_keys=True)
        fh.write("\n")


def fits_from_json(doc):
    fits = []
    for m, f in doc["fits"].items():
        fits.append(RegressionFit(method=m, alpha=float(f["alpha"]),
                                  beta=float(f["beta"]),
                                  n_lo=int(f.get("n_lo", 0)),
                                  n_hi=int(f.get("n_hi", 0))))
    return fits
