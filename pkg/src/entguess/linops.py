"""Dense complex matrix algebra for small composite quantum systems.

Index convention, used everywhere in this package: a composite system AB is
stored row-major with the A index major and the B index minor, i.e. the
basis vector |i>_A |j>_B sits at flat index i*d_B + j.  All matrix functions
of Hermitian operators go through a single eigendecomposition primitive;
negative powers are taken on the support (pseudoinverse convention) with a
relative rank cutoff.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, NotPositiveError, ParameterError

# Relative eigenvalue cutoff below which an operator is treated as singular.
RANK_TOL = 1e-10

_HERM_TOL = 1e-8


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with the A-major index convention."""
    return np.kron(np.asarray(a), np.asarray(b))


def partial_trace(m: np.ndarray, dim_a: int, dim_b: int, keep: str) -> np.ndarray:
    """Trace out one subsystem of a bipartite operator.

    Args:
        m: (dim_a*dim_b)-square matrix.
        dim_a, dim_b: subsystem dimensions, A major.
        keep: "A" to trace out B, "B" to trace out A.

    Returns:
        The reduced operator on the kept subsystem.
    """
    m = np.asarray(m)
    n = dim_a * dim_b
    if m.shape != (n, n):
        raise DimensionError(
            f"matrix is {m.shape}, expected ({n}, {n}) for dims ({dim_a}, {dim_b})"
        )
    m4 = m.reshape(dim_a, dim_b, dim_a, dim_b)
    if keep == "A":
        return np.einsum("ibjb->ij", m4)
    if keep == "B":
        return np.einsum("iaib->ab", m4)
    raise ParameterError(f"keep must be 'A' or 'B', got {keep!r}")


@dataclass(frozen=True)
class EigenDecomposition:
    """Spectral decomposition of a Hermitian matrix.

    eigenvalues are ascending; eigenvectors are the columns of a unitary,
    so ``(eigenvectors * eigenvalues) @ eigenvectors.conj().T`` rebuilds
    the input.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def eigh_decomp(m: np.ndarray) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix, symmetrized first."""
    m = np.asarray(m)
    _require_hermitian(m)
    w, u = np.linalg.eigh((m + m.conj().T) / 2)
    return EigenDecomposition(eigenvalues=w, eigenvectors=u)


def _require_hermitian(m: np.ndarray) -> None:
    scale = max(np.abs(m).max(), 1.0)
    if np.abs(m - m.conj().T).max() > _HERM_TOL * scale:
        raise NotPositiveError("matrix is not Hermitian")


def func_on_support(
    m: np.ndarray, exponent: float, rank_tol: float = RANK_TOL
) -> np.ndarray:
    """Apply ``lambda -> lambda**exponent`` on the support of a PSD matrix.

    Eigenvalues above ``rank_tol * max_eigenvalue`` are raised to the power;
    the rest map to zero, so negative exponents give the pseudoinverse-style
    power.  Raises NotPositiveError if an eigenvalue sits below
    ``-rank_tol * max_eigenvalue``.
    """
    dec = eigh_decomp(m)
    w, u = dec.eigenvalues, dec.eigenvectors
    lam_max = np.abs(w).max() if w.size else 0.0
    cutoff = rank_tol * lam_max
    if w.size and w[0] < -cutoff:
        raise NotPositiveError(f"negative eigenvalue {w[0]:.3e} below -{cutoff:.3e}")
    on = w > cutoff
    powered = np.zeros_like(w)
    powered[on] = w[on] ** exponent
    out = (u * powered) @ u.conj().T
    return (out + out.conj().T) / 2


def support_projector(m: np.ndarray, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Projector onto the eigenspaces of a PSD matrix with lambda > cutoff."""
    return func_on_support(m, 0.0, rank_tol)


def swap_operator(d: int) -> np.ndarray:
    """The operator F on a d*d bipartite space with F|i>|j> = |j>|i>."""
    if d < 1:
        raise ParameterError(f"d must be >= 1, got {d}")
    f = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            f[j * d + i, i * d + j] = 1.0
    return f


def pure_target_fidelity(psi: np.ndarray, sigma: np.ndarray) -> float:
    """Fidelity <psi|sigma|psi> of a PSD operator against a pure target."""
    psi = np.asarray(psi)
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > 1e-10:
        raise ParameterError(f"target vector norm {norm} differs from 1")
    return float(np.real(np.vdot(psi, np.asarray(sigma) @ psi)))


def max_entangled(d: int) -> np.ndarray:
    """The maximally entangled vector (1/sqrt(d)) sum_j |j>|j> on d x d."""
    if d < 2:
        raise ParameterError(f"d must be >= 2, got {d}")
    psi = np.zeros(d * d, dtype=complex)
    psi[:: d + 1] = 1.0 / np.sqrt(d)
    return psi
