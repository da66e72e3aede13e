"""Finite frames in R^n: operators, Parseval checks and constructions.

A frame is stored as an ``m x n`` array whose rows are the frame vectors;
that array is also the matrix of the analysis operator ``T``, and a Parseval
frame is exactly one whose columns are orthonormal.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import spectral
from .errors import ConsistencyError, InvalidInputError

PARSEVAL_TOL = 1e-8
MIN_TARGET_NORM = 1e-12
FEASIBILITY_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Frame:
    """``m`` vectors in ``R^n``; row ``i`` is ``f_i``."""

    vectors: np.ndarray
    label: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        V = np.array(self.vectors, dtype=float)
        if V.ndim != 2:
            raise InvalidInputError(f"frame vectors must form a 2-D array, got ndim={V.ndim}")
        m, n = V.shape
        if n < 1 or m < n:
            raise InvalidInputError(f"need m >= n >= 1, got m={m}, n={n}")
        if not np.all(np.isfinite(V)):
            raise InvalidInputError("frame vectors contain non-finite entries")
        w = spectral.symmetric_eigenvalues(V.T @ V)
        if w[0] <= 0.0:
            raise InvalidInputError("vectors do not span R^n (frame operator is singular)")
        V.setflags(write=False)
        object.__setattr__(self, "vectors", V)

    @property
    def m(self) -> int:
        return self.vectors.shape[0]

    @property
    def n(self) -> int:
        return self.vectors.shape[1]

    @property
    def analysis(self) -> np.ndarray:
        """Matrix of ``x -> (<x, f_i>)_i``."""
        return self.vectors

    @property
    def synthesis(self) -> np.ndarray:
        return self.vectors.T

    def gram(self) -> np.ndarray:
        return self.vectors @ self.vectors.T

    def norms_sq(self) -> np.ndarray:
        return np.einsum("ij,ij->i", self.vectors, self.vectors)

    def to_json(self) -> str:
        return json.dumps(frame_to_dict(self))

    @classmethod
    def from_json(cls, text: str) -> "Frame":
        return frame_from_dict(json.loads(text))


def frame_to_dict(f: Frame) -> dict:
    # repr() of a float is the shortest string that round-trips exactly
    return {"n": f.n, "m": f.m, "vectors": [[float(x) for x in row] for row in f.vectors]}


def frame_from_dict(doc) -> Frame:
    if not isinstance(doc, dict) or not {"n", "m", "vectors"} <= doc.keys():
        raise InvalidInputError("frame document needs keys 'n', 'm', 'vectors'")
    V = np.asarray(doc["vectors"], dtype=float)
    if V.ndim != 2 or V.shape != (doc["m"], doc["n"]):
        raise InvalidInputError(
            f"frame document declares m={doc['m']}, n={doc['n']} "
            f"but vectors have shape {V.shape}"
        )
    return Frame(V)


def frame_operator(f: Frame) -> np.ndarray:
    """``S = sum_i f_i f_i^T``."""
    return spectral.symmetrize(f.vectors.T @ f.vectors)


@dataclass(frozen=True)
class ParsevalCertificate:
    residual: float
    is_parseval: bool
    norms_sq: np.ndarray


def certify_parseval(f: Frame, tol: float = PARSEVAL_TOL) -> ParsevalCertificate:
    w = spectral.symmetric_eigenvalues(frame_operator(f) - np.eye(f.n))
    residual = float(max(abs(w[0]), abs(w[-1])))
    return ParsevalCertificate(residual, residual <= tol, f.norms_sq())


def canonical_parseval(f: Frame) -> Frame:
    """The Parseval frame ``g_i = S^{-1/2} f_i``."""
    root = spectral.spd_inverse_sqrt(frame_operator(f))
    return Frame(f.vectors @ root, label=f.label)


def check_parseval_norms(norms_sq, n: int) -> np.ndarray:
    """Validate a squared-norm profile for a Parseval frame in ``R^n``.

    A tight frame with squared norms ``a_i`` exists iff
    ``max a_i <= sum(a) / n``; for frame bound one that means every
    ``a_i <= 1`` and ``sum(a) = n``.
    """
    a = np.asarray(norms_sq, dtype=float)
    if a.ndim != 1 or a.size < 1:
        raise InvalidInputError("squared norms must be a non-empty vector")
    if not isinstance(n, (int, np.integer)) or n < 1 or n > a.size:
        raise InvalidInputError(f"need 1 <= n <= m, got n={n}, m={a.size}")
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("squared norms must be finite")
    k = int(np.argmin(a))
    if a[k] < MIN_TARGET_NORM:
        raise InvalidInputError(f"squared norm a[{k + 1}]={a[k]!r} is not positive")
    k = int(np.argmax(a))
    if a[k] > 1.0 + FEASIBILITY_TOL:
        raise InvalidInputError(
            f"no Parseval frame exists: a[{k + 1}]={a[k]!r} exceeds 1 "
            "(tight-frame existence needs max a_i <= sum(a)/n)"
        )
    total = math.fsum(a)
    if abs(total - n) > FEASIBILITY_TOL:
        raise InvalidInputError(
            f"no Parseval frame exists: squared norms sum to {total!r}, not n={n}"
        )
    return np.minimum(a, 1.0)


def _rotate_rows(T: np.ndarray, i: int, j: int, target: float) -> None:
    """Rotate orthogonal rows ``i`` and ``j`` so ``||T[i]||^2 == target``."""
    vi = T[i] @ T[i]
    vj = T[j] @ T[j]
    cc = min(max((target - vj) / (vi - vj), 0.0), 1.0)
    c, s = math.sqrt(cc), math.sqrt(1.0 - cc)
    ri, rj = T[i].copy(), T[j].copy()
    T[i] = c * ri + s * rj
    T[j] = -s * ri + c * rj


def construct_parseval_with_norms(norms_sq, n: int, label: Optional[str] = None) -> Frame:
    """Parseval frame in ``R^n`` whose ``i``-th vector has squared norm ``norms_sq[i]``.

    Starts from ``n`` standard basis rows placed on the largest targets and
    zero rows elsewhere, then applies at most ``m - 1`` plane rotations in
    ``R^m`` acting on pairs of rows.  Each rotation fixes one row's squared
    norm exactly.  Rotations act on the left, so the columns stay
    orthonormal throughout.  The rows still to be fixed are kept mutually
    orthogonal, and all but one of them have squared norm 0 or 1.
    """
    a = check_parseval_norms(norms_sq, n)
    m = a.size
    by_target = np.argsort(a, kind="stable")
    T = np.zeros((m, n))
    for col, row in enumerate(sorted(np.argsort(-a, kind="stable")[:n])):
        T[row, col] = 1.0
    current = np.einsum("ij,ij->i", T, T)
    pending = [int(i) for i in by_target if not (current[i] == 1.0 and a[i] == 1.0)]
    carry = None
    while len(pending) > 1:
        k = carry if carry is not None else pending[0]
        pending.remove(k)
        v = T[k] @ T[k]
        if abs(v - a[k]) <= 1e-15:
            carry = None
            continue
        # below target: borrow from a full row; above: shed into an empty one
        want = 1.0 if v < a[k] else 0.0
        donors = [j for j in pending if current[j] == want]
        if not donors:
            raise ConsistencyError(f"no rotation partner for row {k + 1}")
        partner = min(donors)
        _rotate_rows(T, k, partner, a[k])
        current[partner] = np.nan
        carry = partner
    return Frame(T, label=label)


def harmonic_frame(m: int, n: int) -> Frame:
    """Real harmonic Parseval frame of ``m`` vectors in ``R^n``.

    Row ``k`` samples cosines and sines at angles ``2 pi j k / m`` for
    ``j = 1 .. floor(n/2)``, with a constant ``1/sqrt(m)`` column when ``n``
    is odd.  For ``n = m`` even the top frequency pair is replaced by the
    constant and alternating columns, which gives the real DFT basis.
    """
    if not (isinstance(m, (int, np.integer)) and isinstance(n, (int, np.integer))):
        raise InvalidInputError("m and n must be integers")
    if not m >= n >= 1:
        raise InvalidInputError(f"need m >= n >= 1, got m={m}, n={n}")
    k = np.arange(m)
    cols = []
    if n % 2 == 1 or n == m:
        cols.append(np.full(m, 1.0 / math.sqrt(m)))
    npairs = n // 2 if n < m else (n - 1) // 2
    for j in range(1, npairs + 1):
        theta = 2.0 * math.pi * j * k / m
        cols.append(math.sqrt(2.0 / m) * np.cos(theta))
        cols.append(math.sqrt(2.0 / m) * np.sin(theta))
    if n == m and m % 2 == 0:
        cols.append((-1.0) ** k / math.sqrt(m))
    return Frame(np.column_stack(cols), label=f"harmonic({m},{n})")
