"""Small dense symmetric eigenproblems.

Everything here works on square float arrays of modest order (tens of rows).
Eigenvalues come from a cyclic Jacobi iteration, which is deterministic and
accurate to a few ulps of the spectral radius at these sizes.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ConvergenceError, InvalidInputError

JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100
PSD_SLACK = 1e-8
SPD_FLOOR = 1e-10


def symmetrize(A) -> np.ndarray:
    """Return ``(A + A.T) / 2`` as a fresh float array."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {A.shape}")
    if A.shape[0] < 1:
        raise InvalidInputError("matrix order must be at least 1")
    return 0.5 * (A + A.T)


def jacobi_eigh(A) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors (as columns).

    Cyclic Jacobi sweeps until the off-diagonal Frobenius mass drops below
    ``JACOBI_TOL * ||A||_F``.
    """
    A = symmetrize(A)
    k = A.shape[0]
    V = np.eye(k)
    scale = np.linalg.norm(A)
    if k == 1 or scale == 0.0:
        return np.diag(A).copy(), V
    target = JACOBI_TOL * scale
    upper = np.triu_indices(k, 1)
    for _ in range(JACOBI_MAX_SWEEPS):
        off = math.sqrt(2.0) * np.linalg.norm(A[upper])
        if off < target:
            break
        for p in range(k - 1):
            for q in range(p + 1, k):
                apq = A[p, q]
                if abs(apq) < 1e-300 + 1e-18 * (abs(A[p, p]) + abs(A[q, q])):
                    A[p, q] = A[q, p] = 0.0
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.hypot(t, 1.0)
                s = t * c
                colp, colq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * colp - s * colq
                A[:, q] = s * colp + c * colq
                rowp, rowq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * rowp - s * rowq
                A[q, :] = s * rowp + c * rowq
                A[p, q] = A[q, p] = 0.0
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    else:
        raise ConvergenceError(f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps")
    w = np.diag(A).copy()
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def symmetric_eigenvalues(A) -> np.ndarray:
    return jacobi_eigh(A)[0]


def psd_operator_norm(A) -> float:
    """Largest eigenvalue of a positive semidefinite matrix."""
    w = symmetric_eigenvalues(A)
    if w[0] < -PSD_SLACK:
        raise InvalidInputError(f"matrix is not PSD (eigenvalue {w[0]:.3g})")
    return max(float(w[-1]), 0.0)


def spectral_norm(M) -> float:
    """Largest singular value of an arbitrary square or rectangular matrix."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2:
        raise InvalidInputError("expected a 2-D array")
    small = M.T @ M if M.shape[1] <= M.shape[0] else M @ M.T
    return math.sqrt(max(float(symmetric_eigenvalues(small)[-1]), 0.0))


def two_by_two_gram_norm(a: float, b: float, c: float) -> float:
    """Norm of ``[[a, c], [c, b]]`` for squared norms ``a, b`` and inner product ``c``."""
    if a < 0 or b < 0:
        raise InvalidInputError(f"squared norms must be nonnegative, got {a}, {b}")
    if c * c > a * b * (1 + 1e-9):
        raise InvalidInputError(f"inner product {c} violates Cauchy-Schwarz for {a}, {b}")
    return 0.5 * (a + b + math.sqrt((a - b) ** 2 + 4.0 * c * c))


def psd_sqrt(A) -> np.ndarray:
    w, V = jacobi_eigh(A)
    if w[0] < -PSD_SLACK:
        raise InvalidInputError(f"matrix is not PSD (eigenvalue {w[0]:.3g})")
    return symmetrize((V * np.sqrt(np.clip(w, 0.0, None))) @ V.T)


def spd_inverse_sqrt(A) -> np.ndarray:
    """``A^{-1/2}`` for symmetric positive definite ``A``."""
    w, V = jacobi_eigh(A)
    if w[0] <= SPD_FLOOR:
        raise InvalidInputError(
            f"matrix is singular or nearly so (smallest eigenvalue {w[0]:.3g}); "
            "the vectors do not span the space"
        )
    return symmetrize((V / np.sqrt(w)) @ V.T)
