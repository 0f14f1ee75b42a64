"""Dense real-symmetric matrix core.

All matrices in this package are float64 numpy arrays, symmetric by
construction (they are assembled from outer products).  Composite two-qudit
indices follow the row-major convention (i, j) -> i*d + j, which is exactly
what numpy.kron produces.
"""
from __future__ import annotations

import numpy as np

SYM_TOL = 1e-12


class EigenSolverError(RuntimeError):
    """The underlying symmetric eigensolver failed to converge."""


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product (works for vectors and matrices alike)."""
    return np.kron(a, b)


def symmetry_defect(mat: np.ndarray) -> float:
    """max |M - M^T| entrywise."""
    mat = np.asarray(mat, dtype=float)
    return float(np.max(np.abs(mat - mat.T))) if mat.size else 0.0


def check_symmetric(mat: np.ndarray, tol: float = SYM_TOL) -> np.ndarray:
    mat = np.asarray(mat, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {mat.shape}")
    defect = symmetry_defect(mat)
    if defect > tol:
        raise ValueError(f"matrix is not symmetric: max|M - M^T| = {defect:.3e}")
    return mat


def partial_transpose_first(mat: np.ndarray, d: int) -> np.ndarray:
    """Transpose the first tensor factor of a (d*d) x (d*d) matrix.

    Output[(i,j),(k,l)] = Input[(k,j),(i,l)].
    """
    mat = np.asarray(mat, dtype=float)
    n = d * d
    if mat.shape != (n, n):
        raise ValueError(f"expected shape {(n, n)} for d={d}, got {mat.shape}")
    return np.ascontiguousarray(mat.reshape(d, d, d, d).transpose(2, 1, 0, 3).reshape(n, n))


def sym_eigen(mat: np.ndarray, tol: float = SYM_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and eigenvectors (columns) of a symmetric matrix.

    Eigenvector signs are fixed deterministically: the largest-magnitude
    component of each vector is made positive, ties resolved toward the lowest
    index.  Repeated runs therefore produce identical output.
    """
    mat = check_symmetric(mat, tol)
    try:
        w, v = np.linalg.eigh(mat)
    except np.linalg.LinAlgError as exc:  # pathological input
        raise EigenSolverError(f"eigensolver did not converge: {exc}") from exc
    lead = np.argmax(np.abs(v), axis=0)
    signs = np.sign(v[lead, np.arange(v.shape[1])])
    signs[signs == 0.0] = 1.0
    return w, v * signs


def min_eigenvalue(mat: np.ndarray, tol: float = SYM_TOL) -> float:
    mat = check_symmetric(mat, tol)
    try:
        return float(np.linalg.eigvalsh(mat)[0])
    except np.linalg.LinAlgError as exc:
        raise EigenSolverError(f"eigensolver did not converge: {exc}") from exc
