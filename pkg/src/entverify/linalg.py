"""Dense complex linear algebra primitives shared by every scheme module."""

from __future__ import annotations

import numpy as np

HERMITIAN_TOL = 1e-10
RANK_TOL = 1e-9


def require_finite(a: np.ndarray, name: str = "array") -> np.ndarray:
    a = np.asarray(a)
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError(f"{name} contains NaN or Inf entries")
    return a


def tensor_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product in row-major index convention (vectors or operators)."""
    return np.kron(a, b)


def conjugate(a: np.ndarray) -> np.ndarray:
    """Entrywise complex conjugate in the computational basis."""
    return np.conj(a)


def vectorize(a: np.ndarray) -> np.ndarray:
    """Flatten a square matrix A to the bipartite vector sum_jk A_jk |j>|k> (row-major).

    For a unitary U the vector of U/sqrt(d) is unit norm, and vectorize(I/sqrt(d))
    is the canonical maximally entangled state.
    """
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"vectorize expects a square matrix, got shape {a.shape}")
    return a.reshape(-1)


def frobenius_distance(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))


def hermiticity_defect(a: np.ndarray) -> float:
    a = np.asarray(a)
    return float(np.max(np.abs(a - a.conj().T)))


def is_hermitian(a: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    return hermiticity_defect(a) <= tol


def require_hermitian(a: np.ndarray, tol: float = HERMITIAN_TOL, name: str = "matrix") -> np.ndarray:
    a = np.asarray(a)
    defect = hermiticity_defect(a)
    if defect > tol:
        raise ValueError(f"{name} is not Hermitian (max |A - A^dag| = {defect:.3e})")
    return a


def eigen_hermitian(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (real, descending) and matching eigenvector columns of a Hermitian matrix."""
    a = require_hermitian(a)
    vals, vecs = np.linalg.eigh(a)
    return vals[::-1], vecs[:, ::-1]


def numerical_rank(a: np.ndarray, tol: float = RANK_TOL) -> int:
    """Number of eigenvalues of a Hermitian matrix with magnitude above tol."""
    a = require_hermitian(a)
    vals = np.linalg.eigvalsh(a)
    return int(np.count_nonzero(np.abs(vals) > tol))
