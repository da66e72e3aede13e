"""Erasure distributions and the optimal one-erasure norm allocation.

Channels fail independently, channel ``i`` with probability ``p_i``.  The
weight ``pt_i = p_i * prod_{k != i} (1 - p_k)`` is the probability that
channel ``i`` is the *only* one lost.  The optimal squared-norm profile of a
Parseval frame minimizes ``max_i pt_i * a_i`` over ``a in [0, 1]^m`` with
``sum(a) = n``; it pins the ``d`` weakest channels at norm one and equalizes
the products ``pt_i * a_i`` on the remaining ones.

All formulas assume ``p`` sorted ascending.  :class:`ErasureDistribution`
sorts on construction and keeps the permutation so results can be mapped
back to the caller's channel order.

Condition (H) and the index scan are decided in exact rational arithmetic
on the floating-point weights, so ties are resolved exactly as the strict
and non-strict inequalities are written rather than by rounding noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import ConsistencyError, InvalidInputError

#: smallest single-loss weight accepted before we call the distribution degenerate
MIN_TILDE_WEIGHT = 1e-300


def _readonly(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class ErasureDistribution:
    """Independent Bernoulli loss probabilities for ``m`` channels.

    ``probs`` is stored sorted ascending; ``permutation[k]`` is the position
    in the caller's input of the k-th smallest probability.
    """

    probs: np.ndarray
    permutation: np.ndarray = field(repr=False)

    def __init__(self, probs: Sequence[float]):
        raw = np.asarray(probs, dtype=float)
        if raw.ndim != 1:
            raise InvalidInputError("probabilities must be a flat sequence")
        if raw.size < 2:
            raise InvalidInputError(f"need at least 2 channels, got m={raw.size}")
        for i, p in enumerate(raw, start=1):
            if not (0.0 < p < 1.0):
                raise InvalidInputError(f"p[{i}]={float(p)!r} outside (0,1)")
        perm = np.argsort(raw, kind="stable")
        object.__setattr__(self, "probs", _readonly(raw[perm]))
        object.__setattr__(self, "permutation", _readonly(perm).astype(int))
        pt = _single_weights(self.probs)
        if pt.min() < MIN_TILDE_WEIGHT:
            k = int(np.argmin(pt))
            raise InvalidInputError(
                f"single-loss weight for channel {int(perm[k]) + 1} underflows "
                f"({pt[k]:.3g} < {MIN_TILDE_WEIGHT:g})"
            )

    @property
    def m(self) -> int:
        return int(self.probs.size)

    @property
    def user_order_probs(self) -> np.ndarray:
        return self.to_user_order(self.probs)

    def to_user_order(self, values) -> np.ndarray:
        """Map a per-channel vector from sorted order back to input order."""
        values = np.asarray(values)
        out = np.empty_like(values)
        out[self.permutation] = values
        return out

    def __eq__(self, other):
        if not isinstance(other, ErasureDistribution):
            return NotImplemented
        return np.array_equal(self.probs, other.probs) and np.array_equal(
            self.permutation, other.permutation
        )

    def __hash__(self):
        return hash((self.probs.tobytes(), self.permutation.tobytes()))


def _single_weights(p: np.ndarray) -> np.ndarray:
    # p/(1-p) times a shared product: monotone in p under rounding, so
    # sorted p gives sorted weights and equal p gives bitwise-equal weights.
    return p / (1.0 - p) * math.prod(1.0 - p)


@dataclass(frozen=True)
class TildeWeights:
    """Single-loss weights and the suffix sums of their reciprocals.

    ``reciprocal_sum_suffixes[j] = sum_{k > j} 1/singles[k]`` with 1-based
    ``k``, for ``j = 0..m``; entry 0 is the full sum and entry ``m`` is 0.
    """

    singles: np.ndarray
    reciprocal_sum_suffixes: np.ndarray

    @property
    def m(self) -> int:
        return int(self.singles.size)

    def exact_singles(self) -> list[Fraction]:
        return [Fraction(float(x)) for x in self.singles]

    def exact_suffixes(self) -> list[Fraction]:
        inv = [1 / x for x in self.exact_singles()]
        out = [Fraction(0)] * (len(inv) + 1)
        for j in range(len(inv) - 1, -1, -1):
            out[j] = out[j + 1] + inv[j]
        return out


def tilde_weights(dist: ErasureDistribution) -> TildeWeights:
    pt = _single_weights(dist.probs)
    inv = 1.0 / pt
    suffix = np.zeros(pt.size + 1)
    # reversed cumulative fsum keeps the suffixes accurate for wide spreads
    for j in range(pt.size - 1, -1, -1):
        suffix[j] = math.fsum(inv[j:])
    return TildeWeights(_readonly(pt), _readonly(suffix))


def pair_tilde_weight(dist: ErasureDistribution, i: int, j: int) -> float:
    """Probability that exactly channels ``i`` and ``j`` (1-based, sorted order) fail."""
    m = dist.m
    if i == j:
        raise InvalidInputError(f"pair weight needs distinct channels, got i=j={i}")
    for k in (i, j):
        if not 1 <= k <= m:
            raise InvalidInputError(f"channel index {k} outside 1..{m}")
    p = dist.probs
    rest = [1.0 - p[k] for k in range(m) if k not in (i - 1, j - 1)]
    return float(p[i - 1] * p[j - 1] * math.prod(rest))


def _check_dimension(n: int, m: int) -> None:
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise InvalidInputError(f"dimension n must be an integer, got {n!r}")
    if n < 1:
        raise InvalidInputError(f"dimension n={n} must be at least 1")
    if n > m:
        raise InvalidInputError(f"dimension n={n} exceeds channel count m={m}")


def check_condition_H(weights: TildeWeights, n: int) -> bool:
    """True iff every weight is at least ``n / sum_k 1/pt_k``."""
    _check_dimension(n, weights.m)
    singles = weights.exact_singles()
    total = weights.exact_suffixes()[0]
    return min(singles) * total >= n


def distribution_index(weights: TildeWeights, n: int) -> int:
    """Number of leading channels pinned at squared norm one.

    Zero when condition (H) holds, otherwise the largest ``j`` with
    ``pt_j * sum_{k>j} 1/pt_k < n - j``.
    """
    if check_condition_H(weights, n):
        return 0
    singles = weights.exact_singles()
    suffixes = weights.exact_suffixes()
    hits = [
        j for j in range(1, weights.m + 1) if singles[j - 1] * suffixes[j] < n - j
    ]
    if not hits:
        raise ConsistencyError("condition (H) fails but no index qualifies")
    d = max(hits)
    if not 1 <= d <= n - 1:
        raise ConsistencyError(f"index d={d} outside 1..{n - 1}")
    return d


def solve_weighted_minimax(alphas, h: float) -> np.ndarray:
    """Minimize ``max_i alphas[i] * t[i]`` over ``t >= 0`` with ``sum(t) = h``.

    The unique minimizer equalizes all products at ``h / sum(1/alphas)``.
    """
    alphas = np.asarray(alphas, dtype=float)
    if alphas.ndim != 1 or alphas.size == 0:
        raise InvalidInputError("alphas must be a non-empty vector")
    if np.any(alphas <= 0) or not np.all(np.isfinite(alphas)):
        raise InvalidInputError("alphas must be positive and finite")
    if not h > 0:
        raise InvalidInputError(f"total h={h} must be positive")
    inv = 1.0 / alphas
    return h / math.fsum(inv) * inv


@dataclass(frozen=True)
class RpmDesign:
    holds_H: bool
    index: int
    e_p1: float
    norms_sq: np.ndarray
    n: int
    weights: TildeWeights = field(repr=False)
    dist: ErasureDistribution = field(repr=False)

    @property
    def m(self) -> int:
        return int(self.norms_sq.size)

    @property
    def norms_sq_user_order(self) -> np.ndarray:
        return self.dist.to_user_order(self.norms_sq)


def rpm_design(dist: ErasureDistribution, n: int) -> RpmDesign:
    """Optimal one-erasure value and squared-norm profile (sorted channel order)."""
    _check_dimension(n, dist.m)
    w = tilde_weights(dist)
    holds = check_condition_H(w, n)
    d = 0 if holds else distribution_index(w, n)
    e_p1 = (n - d) / w.reciprocal_sum_suffixes[d]
    a = np.ones(dist.m)
    # exact arithmetic guarantees a <= 1; clip the last-ulp overshoot
    a[d:] = np.minimum(e_p1 / w.singles[d:], 1.0)
    return RpmDesign(holds, d, float(e_p1), _readonly(a), int(n), w, dist)
