import math

import numpy as np
import pytest

from wosq import experiments, geometry
from wosq.errors import (ConfigError, NoExactSolutionError,
                         UnknownExampleError)
from wosq.experiments import (RegressionFit, StudyTable, builtin_example,
                              exact_solution, fit_loglog, fits_from_json,
                              fits_to_json, run_study, vrf,
                              write_estimates_csv, write_variance_csv)


class TestBuiltinExamples:
    @pytest.mark.parametrize("name,dim,eps,kind", [
        ("gasket", 2, 1e-3, "harmonic"),
        ("disk", 2, 1e-4, "harmonic"),
        ("sector", 2, 1e-4, "source"),
        ("dumbbell", 2, 1e-4, "const_source"),
        ("ball", 3, 1e-4, "harmonic"),
    ])
    def test_setup(self, name, dim, eps, kind):
        ex = builtin_example(name)
        assert ex.domain.dim == dim
        assert ex.eps == eps
        assert ex.kind == kind
        assert ex.max_steps == 200
        assert ex.domain.contains(ex.z0)

    def test_alias(self):
        assert builtin_example("pacman").name == "sector"

    def test_unknown(self):
        with pytest.raises(UnknownExampleError):
            builtin_example("torus")

    def test_eps_override(self):
        assert builtin_example("disk", eps=1e-2).eps == 1e-2

    def test_bv_override(self):
        ex = builtin_example("gasket", bv_overrides={1: 140.0})
        assert ex.domain.bv_const[1] == 140.0
        assert ex.domain.bv_kind[1] == geometry.BV_CONST

    def test_bv_override_bad_index(self):
        with pytest.raises(ConfigError):
            builtin_example("disk", bv_overrides={9: 1.0})

    def test_sampler_dim(self):
        assert builtin_example("disk").sampler_dim == 200
        assert builtin_example("sector").sampler_dim == 600
        assert builtin_example("ball").sampler_dim == 400


class TestExactSolution:
    def test_disk(self):
        assert exact_solution("disk", (0.0, 0.5)) == pytest.approx(
            0.5 * math.log(4.25))

    def test_ball(self):
        assert exact_solution("ball", (0.2, 0.3, -0.1)) == pytest.approx(
            3.34 ** -0.5)

    def test_sector(self):
        z = builtin_example("sector").z0
        assert exact_solution("sector", z) == pytest.approx(0.862254, abs=5e-6)

    def test_no_closed_form(self):
        with pytest.raises(NoExactSolutionError):
            exact_solution("gasket", (0.2, 0.3))
        with pytest.raises(UnknownExampleError):
            exact_solution("cube", (0, 0, 0))


class TestRunStudy:
    def test_shape_and_determinism(self):
        t1 = run_study("disk", ["mc", "sobol"], [64, 128], 5, seed=3)
        t2 = run_study("disk", ["mc", "sobol"], [64, 128], 5, seed=3)
        assert t1.methods == ["mc", "digital-net"]
        assert len(t1.rows) == 2 * 2 * 5
        assert t1.rows == t2.rows
        assert t1.exact == pytest.approx(0.5 * math.log(4.25))

    def test_seed_changes_rows(self):
        t1 = run_study("disk", ["mc"], [64], 3, seed=3)
        t2 = run_study("disk", ["mc"], [64], 3, seed=4)
        assert t1.rows != t2.rows

    def test_zero_variance_with_constant_boundary(self):
        ex = builtin_example("gasket", bv_overrides={i: 50.0 for i in range(51)})
        t = run_study(ex, ["mc"], [32], 4, seed=1)
        for _, _, var, _ in t.variance_rows():
            assert var == 0.0
        assert all(e == 50.0 for _, _, _, e in t.rows)

    def test_gasket_has_no_exact(self):
        t = run_study("gasket", ["mc"], [32], 2, seed=1)
        assert t.exact is None
        assert t.variance_rows()[0][3] is None

    def test_mc_variance_scaling(self):
        t = run_study("disk", ["mc"], [256, 2048], 100, seed=11)
        rows = {n: v for _, n, v, _ in t.variance_rows()}
        # variance of the mean scales like 1/n; 8x the samples, ~8x smaller
        assert 5.0 <= rows[256] / rows[2048] <= 12.0

    def test_rqmc_beats_mc(self):
        t = run_study("disk", ["digital-net", "mc"], [8192], 100, seed=7)
        rows = {m: v for m, _, v, _ in t.variance_rows()}
        assert rows["digital-net"] < rows["mc"] / 1.5


class TestFits:
    def synthetic_table(self, alpha, beta):
        class Stub:
            methods = ["mc"]
            ns = [128, 256, 512, 1024]

            def variance_rows(self):
                return [("mc", n, math.exp(alpha + beta * math.log(n)), None)
                        for n in self.ns]
        return Stub()

    def test_powerlaw_recovery(self):
        fits = fit_loglog(self.synthetic_table(-2.3, -1.07), pooled=False)
        assert len(fits) == 1
        assert fits[0].alpha == pytest.approx(-2.3, abs=1e-12)
        assert fits[0].beta == pytest.approx(-1.07, abs=1e-12)
        assert fits[0].n_lo == 128 and fits[0].n_hi == 1024

    def test_n_min_filter(self):
        stub = self.synthetic_table(-2.0, -1.0)
        fits = fit_loglog(stub, n_min=512, pooled=False)
        assert fits[0].n_lo == 512

    def test_no_rows_raises(self):
        with pytest.raises(ConfigError):
            fit_loglog(self.synthetic_table(-2.0, -1.0), n_min=10_000)

    def test_pooled_fit_present(self):
        t = run_study("disk", ["sobol", "lattice", "mc"], [128, 256, 512],
                      8, seed=5)
        fits = fit_loglog(t)
        names = {f.method for f in fits}
        assert names == {"digital-net", "lattice", "mc", "rqmc-pooled"}

    def test_fit_from_real_study_is_decreasing(self):
        t = run_study("disk", ["mc"], [128, 512, 2048], 30, seed=9)
        fits = fit_loglog(t, pooled=False)
        assert -1.5 <= fits[0].beta <= -0.6


class TestVrf:
    FITS = [RegressionFit("sobol", alpha=5.78, beta=-1.10, n_lo=0, n_hi=0),
            RegressionFit("mc", alpha=6.41, beta=-1.01, n_lo=0, n_hi=0)]

    def test_published_gasket_value(self):
        # alpha/beta pairs quoted for the gasket benchmark give 5.4 at 2^17
        assert vrf(self.FITS, "sobol", "mc", 2 ** 17) == pytest.approx(5.4,
                                                                       abs=0.05)

    def test_identity(self):
        assert vrf(self.FITS, "mc", "mc", 1024) == 1.0

    def test_alias_lookup(self):
        a = vrf(self.FITS, "digital-net", "mc", 2 ** 17)
        assert a == vrf(self.FITS, "sobol", "mc", 2 ** 17)

    def test_missing_method(self):
        with pytest.raises(ConfigError):
            vrf(self.FITS, "halton", "mc", 1024)


class TestArtifacts:
    def test_csv_round_trip(self, tmp_path):
        t = run_study("disk", ["mc"], [64], 3, seed=2)
        p = tmp_path / "est.csv"
        write_estimates_csv(t, p)
        lines = p.read_text().splitlines()
        assert lines[0] == "example,method,n,replicate,estimate"
        assert len(lines) == 1 + len(t.rows)
        # repr round trip preserves the doubles exactly
        vals = [float(line.split(",")[4]) for line in lines[1:]]
        assert vals == [e for _, _, _, e in t.rows]

    def test_variance_csv(self, tmp_path):
        t = run_study("disk", ["mc"], [64, 128], 3, seed=2)
        p = tmp_path / "var.csv"
        write_variance_csv(t, p)
        lines = p.read_text().splitlines()
        assert lines[0] == "method,n,variance,mse"
        assert len(lines) == 3

    def test_fits_json_round_trip(self):
        fits = [RegressionFit("mc", -1.5, -1.02, 128, 4096)]
        back = fits_from_json(fits_to_json(fits))
        assert back == fits
