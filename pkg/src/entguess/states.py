"""Construction and seeded sampling of quantum states.

All randomness flows through a counter-based Philox generator keyed by a
(seed, stream) pair, with Gaussian variates produced by Box-Muller from its
uniforms.  The same (seed, stream) therefore reproduces the same state
bit-for-bit on a given build, and distinct streams are independent.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, ParameterError
from .linops import RANK_TOL, eigh_decomp, partial_trace, tensor

_TRACE_TOL = 1e-11
_HERM_TOL = 1e-11
_EIG_TOL = 1e-10


@dataclass(frozen=True)
class SeedSpec:
    """Key of the counter-based RNG: a 64-bit seed plus a sub-stream index."""

    seed: int
    stream: int = 0

    def generator(self) -> np.random.Generator:
        key = np.array([self.seed % (1 << 64), self.stream % (1 << 64)], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))


def _box_muller(gen: np.random.Generator, n: int) -> np.ndarray:
    """n standard normals from Box-Muller pairs over Philox uniforms."""
    m = (n + 1) // 2
    # 1 - u keeps the log argument in (0, 1].
    r = np.sqrt(-2.0 * np.log(1.0 - gen.random(m)))
    phi = 2.0 * np.pi * gen.random(m)
    out = np.empty(2 * m)
    out[0::2] = r * np.cos(phi)
    out[1::2] = r * np.sin(phi)
    return out[:n]


def _complex_gaussian(gen: np.random.Generator, shape: tuple) -> np.ndarray:
    n = int(np.prod(shape))
    z = _box_muller(gen, 2 * n)
    return (z[:n] + 1j * z[n:]).reshape(shape)


@dataclass(frozen=True)
class DensityMatrix:
    """Trace-one PSD matrix with declared subsystem dimensions (A major)."""

    matrix: np.ndarray
    dims: tuple = field(default=())

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", m)
        dims = tuple(int(d) for d in self.dims) or (m.shape[0],)
        object.__setattr__(self, "dims", dims)
        n = int(np.prod(dims))
        if m.ndim != 2 or m.shape != (n, n):
            raise DimensionError(f"matrix shape {m.shape} does not match dims {dims}")
        herm_gap = np.abs(m - m.conj().T).max()
        if herm_gap > _HERM_TOL:
            raise ParameterError(f"matrix deviates from Hermitian by {herm_gap:.3e}")
        if abs(np.trace(m).real - 1.0) > _TRACE_TOL or abs(np.trace(m).imag) > _TRACE_TOL:
            raise ParameterError(f"trace {np.trace(m)} differs from 1")
        w = np.linalg.eigvalsh((m + m.conj().T) / 2)
        if w[0] < -_EIG_TOL:
            raise ParameterError(f"negative eigenvalue {w[0]:.3e}")

    @classmethod
    def from_pure(cls, psi: np.ndarray, dims) -> "DensityMatrix":
        psi = np.asarray(psi, dtype=complex)
        return cls(np.outer(psi, psi.conj()), tuple(dims))

    @property
    def d_a(self) -> int:
        self._require_bipartite()
        return self.dims[0]

    @property
    def d_b(self) -> int:
        self._require_bipartite()
        return self.dims[1]

    def _require_bipartite(self):
        if len(self.dims) != 2:
            raise DimensionError(f"expected bipartite dims, got {self.dims}")

    def marginal(self, keep: str) -> np.ndarray:
        """Reduced matrix on subsystem "A" or "B" of a bipartite state."""
        self._require_bipartite()
        return partial_trace(self.matrix, self.dims[0], self.dims[1], keep)

    def reshaped(self, dims) -> "DensityMatrix":
        """Same matrix, re-declared subsystem split."""
        return DensityMatrix(self.matrix, tuple(dims))


def random_pure(d: int, seed: SeedSpec) -> np.ndarray:
    """Haar-distributed unit vector: normalized complex Gaussian."""
    if d < 1:
        raise ParameterError(f"d must be >= 1, got {d}")
    v = _complex_gaussian(seed.generator(), (d,))
    return v / np.linalg.norm(v)


def random_density(d: int, rank: int, seed: SeedSpec, dims=None) -> DensityMatrix:
    """Ginibre-induced mixed state G G^dag / Tr with G a d x rank Gaussian."""
    if not 1 <= rank <= d:
        raise ParameterError(f"rank {rank} out of range [1, {d}]")
    g = _complex_gaussian(seed.generator(), (d, rank))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real, tuple(dims) if dims else (d,))


def random_separable(d_a: int, d_b: int, terms: int, seed: SeedSpec) -> DensityMatrix:
    """Convex mixture of `terms` random product states (separable by construction).

    Mixture weights come from the flat simplex distribution (normalized
    exponentials); each factor is a full-rank Ginibre state.
    """
    if terms < 1:
        raise ParameterError(f"terms must be >= 1, got {terms}")
    gen = seed.generator()
    weights = -np.log(1.0 - gen.random(terms))
    weights /= weights.sum()
    out = np.zeros((d_a * d_b, d_a * d_b), dtype=complex)
    for p in weights:
        ga = _complex_gaussian(gen, (d_a, d_a))
        gb = _complex_gaussian(gen, (d_b, d_b))
        rho_a = ga @ ga.conj().T
        rho_b = gb @ gb.conj().T
        out += p * tensor(rho_a / np.trace(rho_a).real, rho_b / np.trace(rho_b).real)
    return DensityMatrix(out, (d_a, d_b))


def purify(rho: DensityMatrix, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Pure vector on (dim rho) x (numerical rank) whose new-system trace is rho.

    The purifying system is appended as the minor index and has dimension
    equal to the numerical rank, the smallest possible.
    """
    dec = eigh_decomp(rho.matrix)
    w, u = dec.eigenvalues, dec.eigenvectors
    on = np.flatnonzero(w > rank_tol * w.max())[::-1]  # descending eigenvalues
    r = len(on)
    n = rho.matrix.shape[0]
    psi = np.zeros(n * r, dtype=complex)
    for e, idx in enumerate(on):
        psi += np.sqrt(w[idx]) * np.kron(u[:, idx], _basis_vec(r, e))
    return psi / np.linalg.norm(psi)


def _basis_vec(d: int, k: int) -> np.ndarray:
    v = np.zeros(d, dtype=complex)
    v[k] = 1.0
    return v


def schmidt_values(psi: np.ndarray, d_a: int, d_b: int) -> np.ndarray:
    """Squared Schmidt coefficients of a bipartite vector, descending."""
    psi = np.asarray(psi)
    if psi.shape != (d_a * d_b,):
        raise DimensionError(f"vector length {psi.shape} does not match {d_a}x{d_b}")
    if abs(np.linalg.norm(psi) - 1.0) > 1e-10:
        raise ParameterError("vector is not normalized")
    s = np.linalg.svd(psi.reshape(d_a, d_b), compute_uv=False)
    return s**2


def haar_unitary(d: int, seed: SeedSpec) -> np.ndarray:
    """Haar-random unitary via phase-fixed QR of a complex Gaussian matrix."""
    g = _complex_gaussian(seed.generator(), (d, d))
    q, r = np.linalg.qr(g)
    ph = np.diagonal(r).copy()
    ph /= np.abs(ph)
    return q * ph


def mixed_rank_states(d_a: int, d_b: int, count: int, seed: int):
    """Yield `count` seeded random bipartite states with ranks cycling 1..d_a*d_b.

    The i-th state is drawn from stream i of `seed`, so any prefix of the
    sequence is reproducible independently of the rest.
    """
    n = d_a * d_b
    for i in range(count):
        rank = (i % n) + 1
        yield random_density(n, rank, SeedSpec(seed, stream=i), dims=(d_a, d_b))
