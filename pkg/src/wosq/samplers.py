"""Randomized point-set backends, deterministically keyed by (seed, replicate).

Four backends: plain Monte Carlo, scrambled digital nets in base 2 (Sobol'
direction numbers or any generator-matrix file in the published d/s/a/m_i
text format), scrambled Halton, and randomly shifted rank-1 lattices.  All
randomization bits come from counter-based Philox streams keyed by
(seed, replicate, backend, dimension), so point generation is stateless and
order-independent.

Points carry 53 output bits, so every coordinate is an exactly representable
double in [0, 1).
"""

import functools
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import (DimensionUnsupportedError, InvalidSampleSizeError,
                     SamplerFileError)

BACKENDS = ("mc", "digital-net", "halton", "lattice")
BACKEND_IDS = {b: i for i, b in enumerate(BACKENDS)}
# common aliases accepted at the CLI / experiments layer
BACKEND_ALIASES = {"sobol": "digital-net", "net": "digital-net"}

OUT_BITS = 53
OUT_SCALE = float(2 ** OUT_BITS)

_DATA_DIR_ENV = "WOSQ_DATA_DIR"


def data_path(fname):
    base = os.environ.get(_DATA_DIR_ENV)
    if base is None:
        base = os.path.join(os.path.dirname(__file__), "data")
    return os.path.join(base, fname)


def canonical_backend(name):
    return BACKEND_ALIASES.get(name, name)


@dataclass(frozen=True)
class SamplerSpec:
    backend: str
    dim: int
    seed: int
    replicate: int = 0
    matrices_file: str = None      # digital-net; default Joe-Kuo file
    vector_file: str = None        # lattice; default in-repo CBC vector
    randomize: bool = True         # debug flag: False disables randomization

    def __post_init__(self):
        object.__setattr__(self, "backend", canonical_backend(self.backend))
        if self.backend not in BACKENDS:
            raise ValueError(f"unknown backend {self.backend!r}")
        if self.dim < 1:
            raise DimensionUnsupportedError("dim must be >= 1")


def _rng(spec, dim_index, extra=0):
    key = [spec.seed, spec.replicate, BACKEND_IDS[spec.backend], dim_index, extra]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(key)))


def _check_pow2(n):
    if n < 1 or (n & (n - 1)) != 0:
        raise InvalidSampleSizeError(f"n={n} is not a power of 2")


# ---------------------------------------------------------------------------
# generator matrices (Joe-Kuo d/s/a/m_i text format)

@dataclass
class GeneratorMatrices:
    """Per-dimension base-2 generator matrix columns (32-bit integers, MSB
    first: column j of dimension 1 is 2^(31-j))."""

    columns: np.ndarray  # (dim, 32) uint64

    @property
    def dim(self):
        return len(self.columns)


def _direction_numbers(s, a, m, n_cols=32):
    """Joe-Kuo recursion for one dimension; returns 32 direction integers."""
    v = [0] * (n_cols + 1)
    for k in range(1, min(s, n_cols) + 1):
        v[k] = m[k - 1] << (32 - k)
    for k in range(s + 1, n_cols + 1):
        acc = v[k - s] ^ (v[k - s] >> s)
        for j in range(1, s):
            if (a >> (s - 1 - j)) & 1:
                acc ^= v[k - j]
        v[k] = acc
    return v[1:]


@functools.lru_cache(maxsize=8)
def load_generator_matrices(path, dim):
    """Parse a direction-number file and build matrices for ``dim`` dimensions.

    Dimension 1 is the implicit identity (van der Corput) construction; the
    file supplies dimensions 2 and up.
    """
    if dim < 1:
        raise DimensionUnsupportedError("requested dim must be >= 1")
    cols = np.zeros((dim, 32), dtype=np.uint64)
    cols[0] = [1 << (31 - j) for j in range(32)]
    if dim == 1:
        return GeneratorMatrices(cols)
    have = 1
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            toks = line.split()
            if not toks:
                continue
            if lineno == 1 and not toks[0].isdigit():
                continue  # header "d s a m_i"
            try:
                d = int(toks[0])
                s = int(toks[1])
                a = int(toks[2])
                m = [int(t) for t in toks[3:3 + s]]
                if len(m) != s or any(mi % 2 == 0 for mi in m):
                    raise ValueError
            except ValueError:
                raise SamplerFileError(f"{path}: malformed line {lineno}") from None
            if d != have + 1:
                raise SamplerFileError(f"{path}: line {lineno}: expected dimension {have + 1}, got {d}")
            cols[have] = _direction_numbers(s, a, m)
            have += 1
            if have == dim:
                break
    if have < dim:
        raise DimensionUnsupportedError(
            f"{path} provides {have} dimensions, {dim} requested")
    if np.any(cols == 0):
        raise SamplerFileError(f"{path}: zero generator column")
    return GeneratorMatrices(cols)


def _scrambled_columns(spec, gm):
    """Matousek linear scramble: per dimension, left-multiply the generator
    matrix by a random lower-triangular unit-diagonal bit matrix extended to
    OUT_BITS rows, plus a full digital shift.  Returns (columns, shifts)."""
    dim = spec.dim
    cols = np.zeros((dim, 32), dtype=np.uint64)
    shifts = np.zeros(dim, dtype=np.uint64)
    top = OUT_BITS - 1
    if not spec.randomize:
        # identity scramble: place the 32 net digits at the top output bits
        cols[:] = gm.columns << np.uint64(OUT_BITS - 32)
        return cols, shifts
    for j in range(dim):
        rng = _rng(spec, j)
        raw = rng.integers(0, 1 << OUT_BITS, size=33, dtype=np.uint64)
        mcols = np.zeros(32, dtype=np.uint64)
        for r in range(32):
            diag = np.uint64(1) << np.uint64(top - r)
            mcols[r] = diag | (raw[r] & (diag - np.uint64(1)))
        shifts[j] = raw[32]
        # composite column = M applied to each generator column
        g = gm.columns[j]
        comp = np.zeros(32, dtype=np.uint64)
        for r in range(32):
            bit = (g >> np.uint64(31 - r)) & np.uint64(1)
            comp ^= bit * mcols[r]
        cols[j] = comp
    return cols, shifts


def digital_net_points(spec, n):
    _check_pow2(n)
    path = spec.matrices_file or data_path("joe-kuo-1024.txt")
    gm = load_generator_matrices(path, spec.dim)
    cols, shifts = _scrambled_columns(spec, gm)
    idx = np.arange(n, dtype=np.uint64)
    y = np.zeros((n, spec.dim), dtype=np.uint64)
    for k in range(max(n - 1, 1).bit_length()):
        bit = (idx >> np.uint64(k)) & np.uint64(1)
        y ^= bit[:, None] * cols[:, k][None, :]
    y ^= shifts[None, :]
    return y.astype(np.float64) / OUT_SCALE


# ---------------------------------------------------------------------------
# Halton

def _primes(count):
    limit = max(16, int(count * (math.log(count + 2) + math.log(math.log(count + 3))) * 1.3))
    while True:
        sieve = np.ones(limit, dtype=bool)
        sieve[:2] = False
        for p in range(2, int(limit ** 0.5) + 1):
            if sieve[p]:
                sieve[p * p::p] = False
        primes = np.flatnonzero(sieve)
        if len(primes) >= count:
            return primes[:count].tolist()
        limit *= 2


def halton_points(spec, n):
    """Scrambled Halton points: radical inverse in the j-th prime base with an
    independent random digit permutation per base per digit position."""
    if n < 1:
        raise InvalidSampleSizeError("n must be >= 1")
    bases = _primes(spec.dim)
    idx = np.arange(n, dtype=np.int64)
    out = np.empty((n, spec.dim), dtype=np.float64)
    for j, b in enumerate(bases):
        ndig = min(int(math.ceil(OUT_BITS / math.log2(b))), 64)
        if spec.randomize:
            rng = _rng(spec, j)
            perms = np.argsort(rng.random((ndig, b)), axis=1)
        else:
            perms = np.tile(np.arange(b), (ndig, 1))
        rem = idx.copy()
        acc = np.zeros(n, dtype=np.float64)
        scale = 1.0
        for k in range(ndig):
            scale /= b
            dig = rem % b
            rem //= b
            acc += perms[k][dig] * scale
        # accumulated rounding must never reach 1.0
        out[:, j] = np.minimum(acc, np.nextafter(1.0, 0.0))
    return out


# ---------------------------------------------------------------------------
# rank-1 lattice

@functools.lru_cache(maxsize=8)
def _load_lattice_vector(path):
    vec = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            t = line.strip()
            if not t or t.startswith("#"):
                continue
            try:
                vec.append(int(t))
            except ValueError:
                raise SamplerFileError(f"{path}: malformed line {lineno}") from None
    if not vec:
        raise SamplerFileError(f"{path}: empty generating vector")
    return np.array(vec, dtype=np.uint64)


def lattice_points(spec, n):
    _check_pow2(n)
    path = spec.vector_file or data_path("lattice-cbc-1024.txt")
    vec = _load_lattice_vector(path)
    if spec.dim > len(vec):
        raise DimensionUnsupportedError(
            f"lattice vector supports {len(vec)} dimensions, {spec.dim} requested")
    z = vec[:spec.dim]
    idx = np.arange(n, dtype=np.uint64)
    pts = ((idx[:, None] * z[None, :]) % np.uint64(n)).astype(np.float64) / float(n)
    if spec.randomize:
        shift = np.array([_rng(spec, j).random() for j in range(spec.dim)])
        pts = (pts + shift[None, :]) % 1.0
    return pts


# ---------------------------------------------------------------------------
# Monte Carlo

def mc_points(spec, n):
    if n < 1:
        raise InvalidSampleSizeError("n must be >= 1")
    out = np.empty((n, spec.dim), dtype=np.float64)
    for j in range(spec.dim):
        out[:, j] = _rng(spec, j).random(n)
    return out


_GENERATORS = {
    "mc": mc_points,
    "digital-net": digital_net_points,
    "halton": halton_points,
    "lattice": lattice_points,
}


def generate(spec, n):
    """n x dim matrix of randomized points; identical (spec, n) gives
    bit-identical output."""
    return _GENERATORS[spec.backend](spec, n)
