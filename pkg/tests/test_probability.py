from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from erasure_frames.errors import InvalidInputError
from erasure_frames.probability import (
    ErasureDistribution,
    check_condition_H,
    distribution_index,
    pair_tilde_weight,
    rpm_design,
    solve_weighted_minimax,
    tilde_weights,
)

from oracles import index_scan, tilde_fraction, tilde_mp

WORKED = (0.01, 0.5, 0.5)


@st.composite
def instances(draw, max_m=8):
    m = draw(st.integers(2, max_m))
    n = draw(st.integers(1, m))
    p = draw(st.lists(st.floats(0.01, 0.99), min_size=m, max_size=m))
    return p, n


# --- distribution -----------------------------------------------------------


def test_distribution_sorts_and_keeps_permutation():
    dist = ErasureDistribution([0.5, 0.1, 0.3])
    assert list(dist.probs) == [0.1, 0.3, 0.5]
    assert list(dist.permutation) == [1, 2, 0]
    np.testing.assert_array_equal(dist.user_order_probs, [0.5, 0.1, 0.3])


@pytest.mark.parametrize(
    "probs, message",
    [
        ([0.2, 1.0, 0.3], r"p\[2\]=1\.0 outside \(0,1\)"),
        ([0.0, 0.5], r"p\[1\]=0\.0"),
        ([0.5], "at least 2"),
        ([0.2, float("nan")], "outside"),
    ],
)
def test_distribution_rejects(probs, message):
    with pytest.raises(InvalidInputError, match=message):
        ErasureDistribution(probs)


def test_distribution_rejects_underflowing_weights():
    with pytest.raises(InvalidInputError, match="underflows"):
        ErasureDistribution([1e-310, 0.5])


# --- tilde weights ------------------------------------------------------------


def test_tilde_uniform():
    w = tilde_weights(ErasureDistribution([0.2] * 4))
    np.testing.assert_allclose(w.singles, 0.1024, atol=1e-15)


def test_tilde_worked_example():
    w = tilde_weights(ErasureDistribution(WORKED))
    expected = [float(x) for x in tilde_mp(WORKED)]
    np.testing.assert_allclose(w.singles, expected, atol=1e-15)
    np.testing.assert_allclose(w.singles, [0.0025, 0.2475, 0.2475], atol=1e-15)


def test_tilde_two_channels():
    np.testing.assert_allclose(tilde_weights(ErasureDistribution([0.5, 0.5])).singles, 0.25)


def test_suffix_sums():
    w = tilde_weights(ErasureDistribution([0.1, 0.2, 0.4, 0.7]))
    s = w.reciprocal_sum_suffixes
    assert s[-1] == 0.0
    assert np.all(np.diff(s) < 0)
    np.testing.assert_allclose(s[1], np.sum(1 / w.singles[1:]), rtol=1e-15)


@given(st.lists(st.floats(0.001, 0.999), min_size=2, max_size=12))
def test_tilde_sorted_when_p_sorted(p):
    w = tilde_weights(ErasureDistribution(p))
    assert np.all(np.diff(w.singles) >= 0)
    assert np.all(w.singles > 0)


@given(st.lists(st.floats(0.01, 0.99), min_size=2, max_size=10))
def test_tilde_matches_exact_product(p):
    dist = ErasureDistribution(p)
    exact = tilde_fraction(list(dist.probs))
    np.testing.assert_allclose(tilde_weights(dist).singles, [float(x) for x in exact], rtol=1e-13)


# --- pair weights ---------------------------------------------------------------


def test_pair_weights():
    assert pair_tilde_weight(ErasureDistribution([0.5, 0.5]), 1, 2) == pytest.approx(0.25, abs=1e-15)
    dist = ErasureDistribution([0.2] * 4)
    assert pair_tilde_weight(dist, 1, 3) == pytest.approx(0.0256, abs=1e-15)
    assert pair_tilde_weight(ErasureDistribution(WORKED), 1, 2) == pytest.approx(0.0025, abs=1e-15)


def test_pair_weight_symmetric_and_rejects_diagonal():
    dist = ErasureDistribution([0.1, 0.3, 0.6, 0.8])
    assert pair_tilde_weight(dist, 2, 4) == pair_tilde_weight(dist, 4, 2)
    with pytest.raises(InvalidInputError):
        pair_tilde_weight(dist, 2, 2)
    with pytest.raises(InvalidInputError):
        pair_tilde_weight(dist, 0, 2)


# --- condition (H) and the index ---------------------------------------------------


@pytest.mark.parametrize("m", [2, 3, 5, 8])
def test_condition_H_uniform(m):
    w = tilde_weights(ErasureDistribution([0.37] * m))
    for n in range(1, m + 1):
        assert check_condition_H(w, n)
        assert distribution_index(w, n) == 0


def test_condition_H_examples():
    assert not check_condition_H(tilde_weights(ErasureDistribution(WORKED)), 2)
    assert check_condition_H(tilde_weights(ErasureDistribution([0.1, 0.1, 0.1, 0.9])), 2)


def test_index_worked_example():
    assert distribution_index(tilde_weights(ErasureDistribution(WORKED)), 2) == 1


@settings(max_examples=300)
@given(instances())
def test_index_matches_brute_force_scan(inst):
    p, n = inst
    dist = ErasureDistribution(p)
    w = tilde_weights(dist)
    exact = [Fraction(float(x)) for x in w.singles]
    d = distribution_index(w, n)
    assert d == index_scan(exact, n)
    assert 0 <= d <= n - 1


@settings(max_examples=300)
@given(instances())
def test_sandwich_when_H_fails(inst):
    p, n = inst
    w = tilde_weights(ErasureDistribution(p))
    if check_condition_H(w, n):
        return
    d = distribution_index(w, n)
    pt = [Fraction(float(x)) for x in w.singles]
    middle = (n - d) / sum(1 / x for x in pt[d:])
    assert pt[d - 1] < middle <= pt[d]


# --- minimax -----------------------------------------------------------------------


def test_minimax_small_cases():
    np.testing.assert_allclose(solve_weighted_minimax([1, 1], 2), [1, 1])
    t = solve_weighted_minimax([1, 2], 3)
    np.testing.assert_allclose(t, [2, 1])
    assert np.max(np.array([1, 2]) * t) == pytest.approx(2)


def test_minimax_against_simplex_grid():
    alphas = np.array([0.0025, 0.2475, 0.2475])
    t = solve_weighted_minimax(alphas, 2)
    value = np.max(alphas * t)
    assert value == pytest.approx(2 / 408.08080808080808, rel=1e-12)
    step = 1e-3
    g = np.arange(0, 2 + step / 2, step)
    t1, t2 = np.meshgrid(g, g, indexing="ij")
    t3 = 2 - t1 - t2
    ok = t3 >= -1e-12
    grid_best = np.max(np.stack([alphas[0] * t1, alphas[1] * t2, alphas[2] * t3]), axis=0)[ok].min()
    assert value <= grid_best + 1e-15
    assert grid_best - value < 1e-3


@given(st.lists(st.floats(0.01, 100), min_size=1, max_size=8), st.floats(0.1, 10))
def test_minimax_equalizes(alphas, h):
    t = solve_weighted_minimax(alphas, h)
    prod = np.asarray(alphas) * t
    assert t.sum() == pytest.approx(h, rel=1e-12)
    np.testing.assert_allclose(prod, prod[0], rtol=1e-12)


def test_minimax_rejects():
    with pytest.raises(InvalidInputError):
        solve_weighted_minimax([1, 0], 1)
    with pytest.raises(InvalidInputError):
        solve_weighted_minimax([1, 2], 0)


# --- design -------------------------------------------------------------------------


def test_design_uniform():
    d = rpm_design(ErasureDistribution([0.2] * 4), 2)
    assert d.holds_H and d.index == 0
    assert d.e_p1 == pytest.approx(2 * 0.1024 / 4, abs=1e-15)
    np.testing.assert_allclose(d.norms_sq, 0.5, atol=1e-15)


def test_design_worked_example_against_grid():
    d = rpm_design(ErasureDistribution(WORKED), 2)
    assert d.index == 1 and not d.holds_H
    assert d.e_p1 == pytest.approx(0.12375, abs=1e-12)
    np.testing.assert_allclose(d.norms_sq, [1, 0.5, 0.5], atol=1e-12)
    # constrained grid search over a in [0,1]^3 with sum 2
    pt = np.array([0.0025, 0.2475, 0.2475])
    g = np.arange(0, 1.0005, 1e-3)
    a1, a2 = np.meshgrid(g, g, indexing="ij")
    a3 = 2 - a1 - a2
    ok = (a3 >= -1e-12) & (a3 <= 1 + 1e-12)
    obj = np.maximum(np.maximum(pt[0] * a1, pt[1] * a2), pt[2] * a3)[ok]
    assert obj.min() == pytest.approx(0.12375, abs=1e-9)


def test_design_square_case():
    d = rpm_design(ErasureDistribution([0.3] * 5), 5)
    np.testing.assert_allclose(d.norms_sq, 1.0)
    d = rpm_design(ErasureDistribution([0.1, 0.2, 0.3, 0.4]), 4)
    np.testing.assert_allclose(d.norms_sq, 1.0, atol=1e-12)
    assert d.index == 3


@pytest.mark.parametrize("n", [0, 4])
def test_design_rejects_bad_dimension(n):
    with pytest.raises(InvalidInputError):
        rpm_design(ErasureDistribution([0.3, 0.3, 0.3]), n)


@settings(max_examples=300)
@given(instances())
def test_design_invariants(inst):
    p, n = inst
    d = rpm_design(ErasureDistribution(p), n)
    a, pt = d.norms_sq, d.weights.singles
    assert np.all(a > 0) and np.all(a <= 1)
    assert a.sum() == pytest.approx(n, abs=1e-10)
    np.testing.assert_array_equal(a[: d.index], 1.0)
    products = pt * a
    assert products.max() == pytest.approx(d.e_p1, abs=1e-12)
    np.testing.assert_allclose(products[d.index :], d.e_p1, rtol=1e-12, atol=1e-14)


@settings(max_examples=200)
@given(instances())
def test_design_reduces_to_minimax_under_H(inst):
    p, n = inst
    d = rpm_design(ErasureDistribution(p), n)
    if d.holds_H:
        np.testing.assert_allclose(d.norms_sq, solve_weighted_minimax(d.weights.singles, n), atol=1e-10)


def test_design_user_order():
    dist = ErasureDistribution([0.5, 0.01, 0.5])
    d = rpm_design(dist, 2)
    np.testing.assert_allclose(d.norms_sq_user_order, [0.5, 1.0, 0.5], atol=1e-12)
