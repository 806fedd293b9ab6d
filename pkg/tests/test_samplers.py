import numpy as np
import pytest

from wosq import samplers
from wosq.errors import (DimensionUnsupportedError, InvalidSampleSizeError,
                         SamplerFileError)
from wosq.samplers import SamplerSpec, generate


def spec(backend, dim=4, seed=42, replicate=0, **kw):
    return SamplerSpec(backend=backend, dim=dim, seed=seed,
                       replicate=replicate, **kw)


class TestContracts:
    @pytest.mark.parametrize("backend", samplers.BACKENDS)
    def test_range_and_precision(self, backend):
        pts = generate(spec(backend), 256)
        assert pts.shape == (256, 4)
        assert np.all(pts >= 0.0) and np.all(pts < 1.0)
        if backend != "halton":  # base-b digits are not dyadic
            # exactly representable 53-bit fractions
            assert np.all(pts * 2.0 ** 53 == np.floor(pts * 2.0 ** 53))

    @pytest.mark.parametrize("backend", samplers.BACKENDS)
    def test_determinism(self, backend):
        a = generate(spec(backend), 128)
        b = generate(spec(backend), 128)
        np.testing.assert_array_equal(a, b)

    @pytest.mark.parametrize("backend", samplers.BACKENDS)
    def test_replicates_differ(self, backend):
        a = generate(spec(backend, replicate=0), 128)
        b = generate(spec(backend, replicate=1), 128)
        assert not np.array_equal(a, b)

    @pytest.mark.parametrize("backend", ["digital-net", "lattice"])
    def test_power_of_two_required(self, backend):
        with pytest.raises(InvalidSampleSizeError):
            generate(spec(backend), 100)

    def test_aliases(self):
        assert spec("sobol").backend == "digital-net"
        assert spec("net").backend == "digital-net"
        with pytest.raises(ValueError):
            spec("sobel")

    def test_dim_zero_rejected(self):
        with pytest.raises(DimensionUnsupportedError):
            spec("mc", dim=0)

    def test_mc_marginal_mean(self):
        n = 4096
        pts = generate(spec("mc", dim=8), n)
        assert np.all(np.abs(pts.mean(axis=0) - 0.5) <= 4.0 / np.sqrt(12 * n))


class TestDigitalNet:
    def test_unrandomized_golden_n4(self):
        pts = generate(spec("digital-net", dim=2, randomize=False), 4)
        got = {tuple(p) for p in pts}
        assert got == {(0.0, 0.0), (0.5, 0.5), (0.25, 0.75), (0.75, 0.25)}

    def test_unrandomized_matches_reference_sequence(self):
        scipy_qmc = pytest.importorskip("scipy.stats.qmc")
        dim = 8
        ours = generate(spec("digital-net", dim=dim, randomize=False), 256)
        ref = scipy_qmc.Sobol(dim, scramble=False).random(256)
        # same dyadic blocks up to within-block ordering
        for lo, hi in ((0, 1), (1, 2), (2, 4), (4, 8), (8, 16), (16, 256)):
            a = {tuple(p) for p in np.round(ours[lo:hi], 12)}
            b = {tuple(p) for p in np.round(ref[lo:hi], 12)}
            assert a == b

    def test_stratification(self):
        rng = np.random.default_rng(7)
        for seed, rep in rng.integers(0, 2 ** 31, size=(20, 2)):
            dims = rng.integers(0, 64, size=10)
            s = spec("digital-net", dim=65, seed=int(seed), replicate=int(rep))
            for m in (1, 4, 10):
                pts = generate(s, 2 ** m)
                for j in dims:
                    cells = np.floor(pts[:, j] * 2 ** m).astype(int)
                    assert sorted(cells) == list(range(2 ** m))

    def test_parse_errors(self, tmp_path):
        bad = tmp_path / "dirs.txt"
        bad.write_text("d s a m_i\n2 1 0 2\n")  # even m is malformed
        samplers.load_generator_matrices.cache_clear()
        with pytest.raises(SamplerFileError, match="line 2"):
            samplers.load_generator_matrices(str(bad), 2)

    def test_dim_exceeds_file(self, tmp_path):
        small = tmp_path / "dirs.txt"
        small.write_text("d s a m_i\n2 1 0 1\n")
        samplers.load_generator_matrices.cache_clear()
        with pytest.raises(DimensionUnsupportedError):
            samplers.load_generator_matrices(str(small), 10)

    def test_dim_zero_request(self):
        with pytest.raises(DimensionUnsupportedError):
            samplers.load_generator_matrices(samplers.data_path("joe-kuo-1024.txt"), 0)


class TestHalton:
    def test_unscrambled_golden(self):
        pts = generate(spec("halton", dim=2, randomize=False), 4)
        np.testing.assert_allclose(pts[:, 0], [0.0, 0.5, 0.25, 0.75])
        np.testing.assert_allclose(pts[:3, 1], [0.0, 1 / 3, 2 / 3])

    def test_scrambled_ks_uniform(self):
        scipy_stats = pytest.importorskip("scipy.stats")
        n = 100_000
        pts = generate(spec("halton", dim=4, seed=5), n)
        for j in range(4):
            stat = scipy_stats.kstest(pts[:, j], "uniform").statistic
            assert stat <= 1.63 / np.sqrt(n)


class TestLattice:
    def test_unshifted_definition(self):
        pts = generate(spec("lattice", dim=3, randomize=False), 8)
        z = samplers._load_lattice_vector(
            samplers.data_path("lattice-cbc-1024.txt"))[:3]
        i = np.arange(8, dtype=np.uint64)
        expect = ((i[:, None] * z[None, :]) % 8) / 8.0
        np.testing.assert_array_equal(pts, expect)

    @pytest.mark.parametrize("n", [4, 16, 64])
    def test_group_closure(self, n):
        pts = generate(spec("lattice", dim=2, randomize=False), n)
        pset = {tuple(np.round(p, 12)) for p in pts}
        for a in pts:
            for b in pts:
                assert tuple(np.round((a + b) % 1.0, 12)) in pset

    def test_shift_is_per_dimension(self):
        raw = generate(spec("lattice", dim=2, randomize=False), 16)
        shifted = generate(spec("lattice", dim=2), 16)
        d = (shifted - raw) % 1.0
        wrap = (d - d[0][None, :] + 0.5) % 1.0 - 0.5
        np.testing.assert_allclose(wrap, 0.0, atol=1e-12)

    def test_vector_file_errors(self, tmp_path):
        bad = tmp_path / "vec.txt"
        bad.write_text("1\nx\n")
        samplers._load_lattice_vector.cache_clear()
        with pytest.raises(SamplerFileError):
            samplers._load_lattice_vector(str(bad))

    def test_dim_exceeds_vector(self):
        with pytest.raises(DimensionUnsupportedError):
            generate(spec("lattice", dim=2000), 8)


class TestStatistics:
    @pytest.mark.parametrize("backend", samplers.BACKENDS)
    def test_unbiasedness_product_integrand(self, backend):
        # E prod_j x_j over [0,1)^4 is 1/16
        reps = 200
        n = 256
        means = np.empty(reps)
        for r in range(reps):
            pts = generate(spec(backend, seed=11, replicate=r), n)
            means[r] = np.prod(pts, axis=1).mean()
        se = means.std(ddof=1) / np.sqrt(reps)
        assert abs(means.mean() - 1.0 / 16.0) <= 4 * se

    @pytest.mark.parametrize("backend", samplers.BACKENDS)
    def test_replicate_lag1_autocorrelation(self, backend):
        reps = 200
        n = 128
        means = np.empty(reps)
        for r in range(reps):
            pts = generate(spec(backend, seed=3, replicate=r), n)
            means[r] = np.prod(pts, axis=1).mean()
        x = means - means.mean()
        rho = (x[:-1] @ x[1:]) / (x @ x)
        assert abs(rho) <= 4.0 / np.sqrt(reps)
