"""Walk-on-spheres solver for Dirichlet problems driven by randomized
quasi-Monte Carlo point sets, with a variance-rate experiment harness and an
empirical boundary box-count probe."""

from . import (engine, errors, experiments, geometry, minkprobe, samplers,
               transforms)
from .engine import Estimate, WalkConfig, WalkResult, estimate, walk
from .errors import WosqError
from .experiments import builtin_example, exact_solution, fit_loglog, run_study, vrf
from .geometry import Domain, from_config, load_domain
from .samplers import SamplerSpec, generate

__version__ = "1.0.0"

__all__ = [
    "Domain", "Estimate", "SamplerSpec", "WalkConfig", "WalkResult",
    "WosqError", "builtin_example", "engine", "errors", "estimate",
    "exact_solution", "experiments", "fit_loglog", "from_config", "generate",
    "geometry", "load_domain", "minkprobe", "run_study", "samplers",
    "transforms", "vrf", "walk",
]
