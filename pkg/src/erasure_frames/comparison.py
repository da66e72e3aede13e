"""Expected one-erasure error of the optimal frames of three erasure models.

CM weighs all channels equally, PM uses transformed channel weights, and
RPM is the Bernoulli model of :mod:`erasure_frames.probability`.  Each model
is represented by the squared-norm profile of its optimal Parseval frames;
the figure of merit is ``E(||T* D_X T|| | N = 1) = sum(pt * a) / sum(pt)``.

Norm profiles here are in sorted channel order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .probability import ErasureDistribution, rpm_design, tilde_weights


def norms_cm(m: int, n: int) -> np.ndarray:
    if not 1 <= n <= m:
        raise InvalidInputError(f"need 1 <= n <= m, got n={n}, m={m}")
    return np.full(m, n / m)


def norms_pm(dist: ErasureDistribution, n: int) -> np.ndarray:
    """``n/(m-1) * (1 - p_i / sum(p))``; entries may exceed one for skewed ``p``."""
    m = dist.m
    if not 1 <= n <= m:
        raise InvalidInputError(f"need 1 <= n <= m, got n={n}, m={m}")
    p = dist.probs
    return n / (m - 1) * (1.0 - p / math.fsum(p))


def pm_channel_weights(dist: ErasureDistribution, n: int) -> np.ndarray:
    """PM's weights ``q_i = (m-1)/n * sum(p) / (sum(p) - p_i)``."""
    P = math.fsum(dist.probs)
    return (dist.m - 1) / n * P / (P - dist.probs)


def norms_rpm(dist: ErasureDistribution, n: int) -> np.ndarray:
    return np.array(rpm_design(dist, n).norms_sq)


def expected_one_erasure_error(norms_sq, dist: ErasureDistribution) -> float:
    a = np.asarray(norms_sq, dtype=float)
    if a.shape != (dist.m,):
        raise InvalidInputError(f"expected {dist.m} squared norms, got shape {a.shape}")
    pt = tilde_weights(dist).singles
    return math.fsum(pt * a) / math.fsum(pt)


def e_rpm_closed_form(dist: ErasureDistribution, n: int) -> float:
    """``(sum_{i<=d} pt_i + (m-d)(n-d) / sum_{k>d} 1/pt_k) / sum(pt)``."""
    design = rpm_design(dist, n)
    d, m = design.index, dist.m
    pt = design.weights.singles
    harmonic = design.weights.reciprocal_sum_suffixes[d]
    return (math.fsum(pt[:d]) + (m - d) * (n - d) / harmonic) / math.fsum(pt)


def chebyshev_gap(a, b) -> float:
    """``sum(a*b) - sum(a) sum(b) / m``: >= 0 for similarly sorted inputs, <= 0 for opposite."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise InvalidInputError(f"length mismatch: {a.shape} vs {b.shape}")
    return math.fsum(a * b) - math.fsum(a) * math.fsum(b) / a.size


def _gap_factor(m: int, n: int, d: int) -> float:
    if d == 0 or m == n:
        return 0.0
    return d * (m - n) * (m - n - 1) / (n * (m - d) * (m - d - 1))


def rpm_gap_bounds(dist: ErasureDistribution, n: int, d: int) -> tuple[float, float]:
    """Claimed lower bounds on ``E_PM - E_RPM``: the refined one and its simplification."""
    m = dist.m
    p = dist.probs
    pt = tilde_weights(dist).singles
    total = math.fsum(pt)
    factor = _gap_factor(m, n, d)
    if factor == 0.0:
        return 0.0, 0.0
    tail_p, tail_pt = p[d:], pt[d:]
    refined = factor * (math.fsum(tail_pt) - math.fsum(tail_pt * tail_p) / math.fsum(tail_p)) / total
    i = np.arange(d + 1, m + 1)
    simple = factor * math.fsum(tail_pt * (1.0 - 1.0 / (m - i + 1))) / total
    return refined, simple


@dataclass(frozen=True)
class ComparisonReport:
    e_cm: float
    e_pm: float
    e_rpm: float
    gap_lower_bound: float
    cor_bound: float
    index: int
    norms_cm: np.ndarray
    norms_pm: np.ndarray
    norms_rpm: np.ndarray
    pm_feasible: bool
    # the same two bounds carrying the n/(m-1) factor that the derivation yields
    gap_lower_bound_derived: float
    cor_bound_derived: float

    def to_dict(self) -> dict:
        return {
            "e_cm": self.e_cm,
            "e_pm": self.e_pm,
            "e_rpm": self.e_rpm,
            "gap_lower_bound": self.gap_lower_bound,
            "cor_bound": self.cor_bound,
            "gap_lower_bound_derived": self.gap_lower_bound_derived,
            "cor_bound_derived": self.cor_bound_derived,
            "index": self.index,
            "norms": {
                "cm": [float(x) for x in self.norms_cm],
                "pm": [float(x) for x in self.norms_pm],
                "rpm": [float(x) for x in self.norms_rpm],
            },
            "pm_feasible": self.pm_feasible,
        }


def compare_models(dist: ErasureDistribution, n: int) -> ComparisonReport:
    design = rpm_design(dist, n)
    m, d = dist.m, design.index
    a_cm = norms_cm(m, n)
    a_pm = norms_pm(dist, n)
    a_rpm = np.array(design.norms_sq)
    gap, cor = rpm_gap_bounds(dist, n, d)
    scale = n / (m - 1)
    return ComparisonReport(
        e_cm=expected_one_erasure_error(a_cm, dist),
        e_pm=expected_one_erasure_error(a_pm, dist),
        e_rpm=expected_one_erasure_error(a_rpm, dist),
        gap_lower_bound=gap,
        cor_bound=cor,
        index=d,
        norms_cm=a_cm,
        norms_pm=a_pm,
        norms_rpm=a_rpm,
        pm_feasible=bool(np.all(a_pm <= 1.0 + 1e-9)),
        gap_lower_bound_derived=scale * gap,
        cor_bound_derived=scale * cor,
    )
