"""Exact and simulated reconstruction error under random erasures.

Row ``i`` of a :class:`~erasure_frames.frames.Frame` is sent over channel
``i`` of the distribution *in the caller's order* (``dist.user_order_probs``).
Channel indices in patterns and reports are 1-based.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import spectral
from .errors import InvalidInputError, StatisticalError
from .frames import Frame, certify_parseval, frame_operator, harmonic_frame
from .probability import ErasureDistribution, rpm_design, tilde_weights

MAX_PATTERNS = 10**6
MC_BLOCK = 8192


@dataclass(frozen=True)
class ErasurePattern:
    lost: tuple

    def __post_init__(self):
        lost = tuple(sorted(int(i) for i in self.lost))
        if not lost:
            raise InvalidInputError("an erasure pattern loses at least one channel")
        if len(set(lost)) != len(lost) or lost[0] < 1:
            raise InvalidInputError(f"invalid channel set {lost}")
        object.__setattr__(self, "lost", lost)

    @property
    def r(self) -> int:
        return len(self.lost)


@dataclass(frozen=True)
class ErasureReport:
    r: int
    d_p_r: float
    argmax_pattern: ErasurePattern
    conditional_expectation: Optional[float]
    prob_N_eq_r: float

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "d_p_r": self.d_p_r,
            "argmax": list(self.argmax_pattern.lost),
            "cond_expectation": self.conditional_expectation,
            "prob_N_eq_r": self.prob_N_eq_r,
        }


def _check_pair(f: Frame, dist: ErasureDistribution) -> None:
    if f.m != dist.m:
        raise InvalidInputError(f"frame has m={f.m} vectors but distribution has m={dist.m}")


def _check_order(r: int, m: int, lo: int = 1) -> None:
    if not isinstance(r, (int, np.integer)) or not lo <= r <= m:
        raise InvalidInputError(f"erasure order r={r} outside {lo}..{m}")


def sub_gram_norm(f: Frame, pattern: ErasurePattern) -> float:
    """Spectral norm of the Gram matrix of ``{f_i : i in pattern}``."""
    idx = [i - 1 for i in pattern.lost]
    if idx[-1] >= f.m:
        raise InvalidInputError(f"channel {idx[-1] + 1} outside 1..{f.m}")
    V = f.vectors[idx]
    if len(idx) == 1:
        return float(V[0] @ V[0])
    # Gram (r x r) and outer form (n x n) share their nonzero spectrum
    small = V @ V.T if len(idx) <= f.n else V.T @ V
    return spectral.psd_operator_norm(small)


def poisson_binomial_pmf(probs: Sequence[float]) -> np.ndarray:
    """``pmf[r] = P(N = r)`` for ``N`` a sum of independent Bernoulli(p_i)."""
    pmf = np.zeros(len(probs) + 1)
    pmf[0] = 1.0
    for k, p in enumerate(probs, start=1):
        pmf[1 : k + 1] = pmf[1 : k + 1] * (1.0 - p) + pmf[:k] * p
        pmf[0] *= 1.0 - p
    return pmf


def prob_N_equals_r(dist: ErasureDistribution, r: int) -> float:
    _check_order(r, dist.m, lo=0)
    return float(poisson_binomial_pmf(dist.probs)[r])


def pattern_probability(probs: np.ndarray, lost_idx) -> float:
    mask = np.zeros(probs.size, dtype=bool)
    mask[list(lost_idx)] = True
    return float(math.prod(np.where(mask, probs, 1.0 - probs)))


def _enumerate(f: Frame, dist: ErasureDistribution, r: int):
    _check_pair(f, dist)
    _check_order(r, dist.m)
    count = math.comb(dist.m, r)
    if count > MAX_PATTERNS:
        raise InvalidInputError(
            f"C({dist.m},{r})={count} patterns exceeds the enumeration cap {MAX_PATTERNS}"
        )
    p = dist.user_order_probs
    for J in itertools.combinations(range(dist.m), r):
        pattern = ErasurePattern(tuple(i + 1 for i in J))
        yield pattern, sub_gram_norm(f, pattern), pattern_probability(p, J)


def d_p_r(f: Frame, dist: ErasureDistribution, r: int) -> ErasureReport:
    """Worst probability-weighted Gram norm over all ``r``-subsets of lost channels.

    Ties go to the lexicographically smallest pattern.  The conditional
    expectation is filled only for Parseval frames.
    """
    best, best_pattern = -math.inf, None
    terms = []
    for pattern, norm, weight in _enumerate(f, dist, r):
        value = norm * weight
        terms.append(value)
        if value > best:
            best, best_pattern = value, pattern
    prob = prob_N_equals_r(dist, r)
    cond = math.fsum(terms) / prob if certify_parseval(f).is_parseval else None
    return ErasureReport(r, best, best_pattern, cond, prob)


def conditional_expected_error(f: Frame, dist: ErasureDistribution, r: int) -> float:
    """``E(||T* D_X T|| | N = r)`` for a Parseval frame, by full enumeration."""
    if not certify_parseval(f).is_parseval:
        raise InvalidInputError("conditional expectation formula needs a Parseval frame")
    total = math.fsum(norm * weight for _, norm, weight in _enumerate(f, dist, r))
    return total / prob_N_equals_r(dist, r)


def d_p_1_formula(f: Frame, dist: ErasureDistribution) -> float:
    """``max_i pt_i ||f_i||^2``."""
    _check_pair(f, dist)
    pt = dist.to_user_order(tilde_weights(dist).singles)
    return float(np.max(pt * f.norms_sq()))


def d_p_2_formula(f: Frame, dist: ErasureDistribution) -> float:
    """Two-erasure risk from the closed-form norm of a 2 x 2 Gram matrix."""
    _check_pair(f, dist)
    p = dist.user_order_probs
    G = f.gram()
    base = math.prod(1.0 - p)
    odds = p / (1.0 - p)
    best = -math.inf
    for i, j in itertools.combinations(range(f.m), 2):
        w = base * odds[i] * odds[j]
        best = max(best, w * spectral.two_by_two_gram_norm(G[i, i], G[j, j], G[i, j]))
    return best


def d_p_2_optimal_closed_form(f: Frame, dist: ErasureDistribution) -> float:
    """Two-erasure risk of a one-erasure-optimal frame when condition (H) holds.

    With ``c = n / sum_k 1/pt_k`` and ``u_i = p_i / (1 - p_i)`` this is
    ``max_{i != j} (c (u_i + u_j) + sqrt(c^2 (u_i - u_j)^2 + 4 (pt_ij <f_i, f_j>)^2)) / 2``.
    Only the inner products of ``f`` enter; its norms are assumed optimal.
    """
    _check_pair(f, dist)
    design = rpm_design(dist, f.n)
    if not design.holds_H:
        raise InvalidInputError("closed form needs condition (H)")
    c = f.n / design.weights.reciprocal_sum_suffixes[0]
    p = dist.user_order_probs
    u = p / (1.0 - p)
    base = math.prod(1.0 - p)
    G = f.gram()
    best = -math.inf
    for i, j in itertools.combinations(range(f.m), 2):
        pij = base * u[i] * u[j]
        val = 0.5 * (c * (u[i] + u[j]) + math.sqrt((c * (u[i] - u[j])) ** 2 + 4.0 * (pij * G[i, j]) ** 2))
        best = max(best, val)
    return best


@dataclass(frozen=True)
class MonteCarloEstimate:
    estimate: float
    std_error: float
    trials: int
    accepted: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "estimate": self.estimate,
            "std_error": self.std_error,
            "trials": self.trials,
            "accepted": self.accepted,
            "seed": self.seed,
        }


def _conditioned_draw(p: np.ndarray, r: int, size: int, rng: np.random.Generator) -> np.ndarray:
    # tail[k, s] = P(X_k + ... + X_m = s); draw channels in turn given the remaining count
    m = p.size
    tail = np.zeros((m + 1, r + 1))
    tail[m, 0] = 1.0
    for k in range(m - 1, -1, -1):
        tail[k] = tail[k + 1] * (1.0 - p[k])
        tail[k, 1:] += tail[k + 1, :-1] * p[k]
    X = np.zeros((size, m), dtype=bool)
    need = np.full(size, r)
    u = rng.random((size, m))
    for k in range(m):
        active = need > 0
        s = need[active]
        prob_one = p[k] * tail[k + 1, s - 1] / tail[k, s]
        take = u[active, k] < prob_one
        X[np.flatnonzero(active)[take], k] = True
        need[active] -= take
    return X


def _block_errors(F, S_inv, p, size, seed_seq, condition_on_r, method):
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    if condition_on_r is not None and method == "direct":
        X = _conditioned_draw(p, condition_on_r, size, rng)
    else:
        X = rng.random((size, p.size)) < p
        if condition_on_r is not None:
            X = X[X.sum(axis=1) == condition_on_r]
    if X.shape[0] == 0:
        return np.empty(0)
    M = np.einsum("bi,ij,ik->bjk", X.astype(float), F, F)
    if S_inv is None:
        return np.linalg.eigvalsh(M)[:, -1]
    return np.linalg.norm(S_inv @ M, ord=2, axis=(1, 2))


def monte_carlo_error(
    f: Frame,
    dist: ErasureDistribution,
    trials: int,
    seed: int = 0,
    condition_on_r: Optional[int] = None,
    method: str = "rejection",
    workers: int = 1,
) -> MonteCarloEstimate:
    """Mean of ``||S^{-1} T* D_X T||`` over seeded Bernoulli erasure draws.

    Trials are cut into blocks of ``MC_BLOCK``; block ``b`` draws from the
    ``b``-th child of ``SeedSequence(seed)`` with a PCG64 generator, so the
    result does not depend on ``workers``.  With ``condition_on_r`` the draws
    are restricted to ``N = r``, by rejection (default) or by sampling the
    conditional law directly (``method="direct"``, every trial accepted).
    """
    _check_pair(f, dist)
    if not isinstance(trials, (int, np.integer)) or trials < 1:
        raise InvalidInputError(f"trials={trials} must be a positive integer")
    if condition_on_r is not None:
        _check_order(condition_on_r, dist.m)
    if method not in ("rejection", "direct"):
        raise InvalidInputError(f"unknown sampling method {method!r}")
    F = f.vectors
    S_inv = None if certify_parseval(f).is_parseval else np.linalg.inv(frame_operator(f))
    p = dist.user_order_probs
    sizes = [MC_BLOCK] * (trials // MC_BLOCK)
    if trials % MC_BLOCK:
        sizes.append(trials % MC_BLOCK)
    children = np.random.SeedSequence(int(seed)).spawn(len(sizes))
    jobs = [(F, S_inv, p, size, ss, condition_on_r, method) for size, ss in zip(sizes, children)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(lambda job: _block_errors(*job), jobs))
    else:
        chunks = [_block_errors(*job) for job in jobs]
    values = np.concatenate(chunks)
    if values.size == 0:
        raise StatisticalError(f"no trial had N={condition_on_r} erasures in {trials} trials")
    mean = float(np.mean(values))
    se = float(np.std(values, ddof=1) / math.sqrt(values.size)) if values.size > 1 else math.nan
    return MonteCarloEstimate(mean, se, int(trials), int(values.size), int(seed))


def unconditional_expected_error(f: Frame, dist: ErasureDistribution) -> float:
    """``E ||T* D_X T||`` summed over every erasure count (``N = 0`` contributes 0)."""
    pmf = poisson_binomial_pmf(dist.probs)
    return math.fsum(
        pmf[r] * conditional_expected_error(f, dist, r) for r in range(1, dist.m + 1)
    )


def harmonic_two_erasure_sweep(p: float, n: int, ms: Sequence[int]) -> list[dict]:
    """``d_{p,2}`` of harmonic frames under a uniform loss rate, one row per ``m``.

    ``reference = n p^2 / (m (1 - p))`` and ``ratio = d_p2 / reference``.
    """
    if not ms:
        raise InvalidInputError("need at least one channel count")
    rows = []
    for m in ms:
        dist = ErasureDistribution([p] * m)
        f = harmonic_frame(int(m), n)
        value = d_p_r(f, dist, 2).d_p_r
        reference = n * p * p / (m * (1.0 - p))
        rows.append({"m": int(m), "d_p2": value, "reference": reference, "ratio": value / reference})
    return rows
