"""Dense symmetric / Hermitian linear algebra helpers.

Eigendecompositions are delegated to LAPACK (``numpy.linalg.eigh``); the
functions here only add validation, ordering and the tolerance rules the
rest of the package relies on.
"""
from __future__ import annotations

import numpy as np

from .errors import InvalidParameter, NotPSD, NumericError

DEFAULT_RANK_TOL = 1e-6


def _as_symmetric(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidParameter(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NumericError("matrix has non-finite entries")
    return a


def sym_eig(a) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a real symmetric matrix.

    Returns
    -------
    eigenvalues : ndarray, shape (N,)
        Sorted in descending order.
    eigenvectors : ndarray, shape (N, N)
        Orthonormal columns; column ``j`` belongs to ``eigenvalues[j]``.
    """
    a = _as_symmetric(a)
    if a.shape[0] == 0:
        return np.zeros(0), np.zeros((0, 0))
    # only the lower triangle is read; symmetrize so asymmetric noise averages out
    w, v = np.linalg.eigh(0.5 * (a + a.T))
    return w[::-1].copy(), v[:, ::-1].copy()


def gram_decompose(x, rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Factor a PSD matrix as ``V @ V.T`` keeping only the numerically nonzero part.

    Eigenvalues at or below ``rank_tol * lambda_max`` are dropped (and small
    negative ones clamped), so the returned factor has ``r`` columns where
    ``r`` is the numerical rank.
    """
    w, v = sym_eig(x)
    if w.size == 0:
        return np.zeros((0, 0))
    lam_max = max(w[0], 0.0)
    cutoff = rank_tol * lam_max
    if w[-1] < -cutoff and w[-1] < -1e-14:
        raise NotPSD(f"smallest eigenvalue {w[-1]:.3e} below -{cutoff:.3e}")
    keep = w > cutoff
    return v[:, keep] * np.sqrt(w[keep])


def numerical_rank(x, rank_tol: float = DEFAULT_RANK_TOL) -> int:
    w, _ = sym_eig(x)
    if w.size == 0 or w[0] <= 0:
        return 0
    return int(np.count_nonzero(w > rank_tol * w[0]))


def lambda_max_of_sum(vectors) -> float:
    """Largest eigenvalue of ``sum_i |v_i><v_i|`` (complex entries allowed)."""
    vecs = [np.asarray(v) for v in vectors]
    if not vecs:
        return 0.0
    dims = {v.shape for v in vecs}
    if len(dims) != 1 or vecs[0].ndim != 1:
        raise InvalidParameter(f"vectors must share one dimension, got {sorted(dims)}")
    m = np.vstack(vecs)
    # sum of outer products = M^H M
    h = m.conj().T @ m
    return float(np.linalg.eigvalsh(0.5 * (h + h.conj().T))[-1])
