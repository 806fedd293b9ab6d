"""Command-line front end: run / fit / vrf / probe / exact subcommands.

All randomness flows from an explicit --seed; identical flags and seed give
byte-identical output files.  Failures print a single "code: message" line
and exit nonzero.
"""

import argparse
import csv
import json
import os
import sys

import numpy as np

from . import experiments, minkprobe, samplers
from ._kernels import backend_name
from .errors import ConfigError, WosqError

UNRANDOMIZED_ENV = "WOSQ_DEBUG_UNRANDOMIZED"


def _parse_n_token(tok):
    tok = tok.strip()
    if "^" in tok:
        base, exp = tok.split("^", 1)
        return int(base) ** int(exp)
    return int(tok)


def parse_n_list(text):
    """Sample-size grammar: comma list of integers, 2^k tokens, or doubling
    ranges like 2^7..2^12."""
    out = []
    for part in text.split(","):
        if ".." in part:
            lo, hi = (_parse_n_token(t) for t in part.split("..", 1))
            if lo < 1 or hi < lo:
                raise ConfigError(f"bad n range {part!r}")
            if lo & (lo - 1) or hi & (hi - 1):
                raise ConfigError(f"n range endpoints must be powers of 2: {part!r}")
            n = lo
            while n <= hi:
                out.append(n)
                n *= 2
        else:
            out.append(_parse_n_token(part))
    if not out:
        raise ConfigError("empty n list")
    return out


def parse_int_range(text):
    """Plain integer list/range grammar for probe resolutions, e.g. 8..12."""
    out = []
    for part in text.split(","):
        if ".." in part:
            lo, hi = (int(t) for t in part.split("..", 1))
            out.extend(range(lo, hi + 1))
        else:
            out.append(int(part))
    if not out:
        raise ConfigError("empty resolution list")
    return out


def _cmd_run(args):
    ns = parse_n_list(args.n)
    methods = [samplers.canonical_backend(m) for m in args.methods.split(",")]
    randomize = not (args.debug_unrandomized
                     or os.environ.get(UNRANDOMIZED_ENV, "") == "1")
    example = experiments.builtin_example(args.example, eps=args.eps,
                                          max_steps=args.max_steps)
    table = experiments.run_study(example, methods, ns, args.replicates,
                                  args.seed, randomize=randomize)
    os.makedirs(args.out, exist_ok=True)
    experiments.write_estimates_csv(table, os.path.join(args.out, "estimates.csv"))
    experiments.write_variance_csv(table, os.path.join(args.out, "variance.csv"))
    summary = {
        "example": example.name, "methods": methods, "n": ns,
        "replicates": args.replicates, "seed": args.seed,
        "eps": example.eps, "max_steps": example.max_steps,
        "randomize": randomize, "kernel_backend": backend_name,
        "exact": table.exact,
    }
    with open(os.path.join(args.out, "summary.json"), "w") as fh:
        json.dump(summary, fh, indent=1, sort_keys=True)
        fh.write("\n")
    return 0


def _read_estimates_csv(path):
    rows = []
    with open(path, newline="") as fh:
        for rec in csv.DictReader(fh):
            rows.append((rec["example"], rec["method"], int(rec["n"]),
                         int(rec["replicate"]), float(rec["estimate"])))
    if not rows:
        raise ConfigError(f"{path}: no estimate rows")
    return rows


def _cmd_fit(args):
    rows = _read_estimates_csv(args.estimates)
    example = rows[0][0]
    methods = sorted({r[1] for r in rows}, key=lambda m: (m != "mc", m))
    ns = sorted({r[2] for r in rows})
    reps = max(r[3] for r in rows) + 1
    table = experiments.StudyTable(example=example, methods=methods, ns=ns,
                                   replicates=reps,
                                   rows=[r[1:] for r in rows])
    try:
        z0 = experiments.builtin_example(example).z0
        table.exact = experiments.exact_solution(example, z0)
    except WosqError:
        table.exact = None
    n_min = _parse_n_token(args.n_min)
    fits = experiments.fit_loglog(table, n_min=n_min)
    meta = {"example": example, "estimates": args.estimates, "n_min": n_min}
    experiments.write_fits_json(fits, args.out, meta)
    return 0


def _cmd_vrf(args):
    with open(args.fits) as fh:
        fits = experiments.fits_from_json(json.load(fh))
    n = _parse_n_token(args.n)
    value = experiments.vrf(fits, args.method, args.baseline, n)
    print(f"{value:.1f}")
    return 0


def _cmd_probe(args):
    ms = parse_int_range(args.m)
    example = experiments.builtin_example(args.example)
    rows = minkprobe.probe_study(example, args.k, ms, eps=args.eps)
    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, "probe.csv"), "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["k", "m", "flagged", "total", "volume_estimate"])
        for bc in rows:
            w.writerow([bc.k, bc.m, bc.flagged, bc.total,
                        repr(bc.volume_estimate)])
    try:
        exponent = minkprobe.growth_exponent(rows, args.k)
    except ConfigError:
        exponent = None
    summary = {"example": example.name, "k": args.k, "m": ms, "eps": args.eps,
               "seed": args.seed, "growth_exponent": exponent,
               "kernel_backend": backend_name}
    with open(os.path.join(args.out, "probe.json"), "w") as fh:
        json.dump(summary, fh, indent=1, sort_keys=True)
        fh.write("\n")
    if exponent is not None:
        print(f"growth exponent: {exponent:.3f}")
    return 0


def _cmd_exact(args):
    z = np.array([float(t) for t in args.point.split(",")])
    print(repr(experiments.exact_solution(args.example, z)))
    return 0


def build_parser():
    p = argparse.ArgumentParser(
        prog="wosq",
        description="walk-on-spheres Dirichlet solver with RQMC drivers")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a variance study, write CSV tables")
    run.add_argument("--example", required=True)
    run.add_argument("--methods", required=True,
                     help="comma list: mc,sobol,digital-net,halton,lattice")
    run.add_argument("--n", required=True, help="sample sizes, e.g. 2^7..2^12")
    run.add_argument("--replicates", type=int, default=100)
    run.add_argument("--seed", type=int, required=True)
    run.add_argument("--eps", type=float, default=None,
                     help="override the example's shell width")
    run.add_argument("--K", dest="max_steps", type=int,
                     default=experiments.DEFAULT_MAX_STEPS,
                     help="maximum walk steps")
    run.add_argument("--out", required=True, help="output directory")
    run.add_argument("--debug-unrandomized", action="store_true",
                     help="disable randomization (deterministic point sets)")
    run.set_defaults(func=_cmd_run)

    fit = sub.add_parser("fit", help="fit log-log variance rates from a study")
    fit.add_argument("--estimates", required=True, help="estimates.csv path")
    fit.add_argument("--n-min", default="2^7")
    fit.add_argument("--out", required=True, help="fits.json path")
    fit.set_defaults(func=_cmd_fit)

    vrf = sub.add_parser("vrf", help="variance reduction factor from fits")
    vrf.add_argument("--fits", required=True)
    vrf.add_argument("--method", required=True)
    vrf.add_argument("--baseline", default="mc")
    vrf.add_argument("--n", default="2^17")
    vrf.set_defaults(func=_cmd_vrf)

    probe = sub.add_parser("probe", help="boundary box-count growth probe")
    probe.add_argument("--example", required=True)
    probe.add_argument("--k", type=int, required=True)
    probe.add_argument("--m", required=True, help="resolutions, e.g. 8..12")
    probe.add_argument("--eps", type=float, default=minkprobe.DEFAULT_EPS)
    probe.add_argument("--seed", type=int, required=True,
                       help="recorded in outputs; the probe is deterministic")
    probe.add_argument("--out", required=True)
    probe.set_defaults(func=_cmd_probe)

    exact = sub.add_parser("exact", help="closed-form solution value")
    exact.add_argument("--example", required=True)
    exact.add_argument("--point", required=True, help="comma-separated coords")
    exact.set_defaults(func=_cmd_exact)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except WosqError as e:
        print(str(e), file=sys.stderr)
        return 2
    except FileNotFoundError as e:
        print(f"bad-data-file: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
