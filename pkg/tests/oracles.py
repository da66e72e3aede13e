"""Independent reference computations used by the tests.

Nothing here imports the package under test; formulas are re-derived with
mpmath / fractions / numpy.linalg so agreement is meaningful.
"""

import itertools
import math
from fractions import Fraction

import mpmath as mp
import numpy as np

mp.mp.dps = 50


def tilde_mp(p):
    p = [mp.mpf(x) for x in p]
    return [p[i] * mp.fprod(1 - p[k] for k in range(len(p)) if k != i) for i in range(len(p))]


def tilde_fraction(p):
    p = [Fraction(x) for x in p]
    out = []
    for i in range(len(p)):
        v = p[i]
        for k in range(len(p)):
            if k != i:
                v *= 1 - p[k]
        out.append(v)
    return out


def index_scan(pt, n):
    """Brute-force i(p) from a list of exact weights."""
    m = len(pt)
    total = sum(1 / x for x in pt)
    if all(x * total >= n for x in pt):
        return 0
    hits = [j for j in range(1, m + 1) if pt[j - 1] * sum(1 / x for x in pt[j:]) < n - j]
    return max(hits)


def models_mp(p, n):
    """(E_RPM, E_PM, E_CM) evaluated at 50 digits from the defining formulas."""
    p = sorted(mp.mpf(x) for x in p)
    m = len(p)
    pt = tilde_mp(p)
    d = index_scan(pt, n)
    e = (n - d) / sum(1 / x for x in pt[d:])
    a_rpm = [mp.mpf(1)] * d + [e / x for x in pt[d:]]
    P = sum(p)
    a_pm = [mp.mpf(n) / (m - 1) * (1 - x / P) for x in p]
    Z = sum(pt)
    e_rpm = sum(x * y for x, y in zip(pt, a_rpm)) / Z
    e_pm = sum(x * y for x, y in zip(pt, a_pm)) / Z
    return e_rpm, e_pm, mp.mpf(n) / m


def gram_norm_np(V):
    return float(np.linalg.eigvalsh(V @ V.T)[-1]) if len(V) else 0.0


def enumerate_expectation(F, p, r):
    """(d_{p,r}, sum over r-patterns of norm * weight) by brute force with numpy.linalg."""
    m = len(p)
    best, total = 0.0, 0.0
    for J in itertools.combinations(range(m), r):
        w = 1.0
        for i in range(m):
            w *= p[i] if i in J else 1.0 - p[i]
        val = gram_norm_np(F[list(J)]) * w
        best = max(best, val)
        total += val
    return best, total


def poisson_binomial_brute(p, r):
    m = len(p)
    total = 0.0
    for J in itertools.combinations(range(m), r):
        total += math.prod(p[i] if i in J else 1.0 - p[i] for i in range(m))
    return total


def random_feasible_allocations(rng, m, n, count, center=None):
    """Points of {a in [0,1]^m : sum a = n}.

    Half are convex combinations of random 0/1 vertices with n ones, half
    are feasible line moves from ``center`` (when given).
    """
    # built column-major (m x k) so the per-point reductions run across rows
    k = count if center is None else count // 2
    w = rng.dirichlet(np.ones(4), size=k).T
    pts = np.zeros((m, k))
    for j in range(4):
        u = rng.random((m, k))
        kth = np.sort(u, axis=0)[n - 1]
        pts += w[j] * (u <= kth)
    if center is None:
        return pts.T
    center = np.asarray(center, dtype=float)[:, None]
    z = rng.normal(size=(m, count - k))
    z -= z.mean(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        up = np.where(z > 0, (1.0 - center) / z, np.inf)
        down = np.where(z < 0, -center / z, np.inf)
    tmax = np.minimum(up.min(axis=0), down.min(axis=0))
    local = center + (rng.random(count - k) * tmax) * z
    return np.hstack([pts, local]).T
