import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spdmeans.barycenter import (
    DiscreteMeasure,
    contractivity_check,
    empirical_expectation,
    iterativity_check,
    karcher_barycenter,
    uniformize,
    wasserstein,
)
from spdmeans.config import SolverConfig
from spdmeans.means import karcher_mean, karcher_residual
from spdmeans.metrics import delta
from spdmeans.sampling import random_tuple


def brute_force_w1(xs, ys):
    """Minimum over all bijections of the mean atom-to-atom distance."""
    n = len(xs)
    return min(
        sum(delta(xs[i], ys[p[i]]) for i in range(n)) / n
        for p in itertools.permutations(range(n))
    )


def test_measure_validation():
    a = np.eye(2)
    with pytest.raises(ValueError):
        DiscreteMeasure((a, a), (0.5, 0.6))
    with pytest.raises(ValueError):
        DiscreteMeasure((a, a), (1.0,))
    with pytest.raises(ValueError):
        DiscreteMeasure((a, a), (1.5, -0.5))
    assert len(DiscreteMeasure.uniform([a, a, a])) == 3


def test_uniformize_examples():
    x1, x2 = random_tuple(np.random.default_rng(0), 2, 2)
    assert len(uniformize(DiscreteMeasure((x1, x2), (0.5, 0.5)))) == 2
    u = uniformize(DiscreteMeasure((x1, x2), (2 / 3, 1 / 3)))
    assert [a is x1 for a in u.atoms] == [True, True, False]
    u = uniformize(DiscreteMeasure((x1, x2), (0.4, 0.6)))
    assert len(u) == 5 and sum(a is x1 for a in u.atoms) == 2
    with pytest.raises(ValueError):
        uniformize(DiscreteMeasure((x1, x2), (1 / np.pi, 1 - 1 / np.pi)))


def test_wasserstein_examples():
    a, b = random_tuple(np.random.default_rng(1), 2, 3)
    mu = DiscreteMeasure.uniform([a, b])
    assert wasserstein(mu, mu) == pytest.approx(0.0, abs=1e-12)
    assert wasserstein(DiscreteMeasure.point_mass(a), DiscreteMeasure.point_mass(b)) == \
        pytest.approx(delta(a, b), rel=1e-12)
    assert wasserstein(mu, DiscreteMeasure.uniform([b, a])) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(ValueError):
        wasserstein(mu, DiscreteMeasure.point_mass(np.eye(2)))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 5))
def test_wasserstein_matches_brute_force(seed, n):
    rng = np.random.default_rng(seed)
    xs, ys = random_tuple(rng, n, 2, 1.0), random_tuple(rng, n, 2, 1.0)
    w, (rows, cols) = wasserstein(DiscreteMeasure.uniform(xs), DiscreteMeasure.uniform(ys),
                                  full_output=True)
    assert w == pytest.approx(brute_force_w1(xs, ys), rel=1e-12, abs=1e-14)
    assert sorted(cols) == list(range(n))


def test_wasserstein_with_unequal_masses():
    a, b, c = random_tuple(np.random.default_rng(2), 3, 2)
    mu = DiscreteMeasure((a, b), (2 / 3, 1 / 3))
    nu = DiscreteMeasure((b, c), (0.5, 0.5))
    expected = brute_force_w1(uniformize(mu, 6).atoms * 2, uniformize(nu).atoms * 3)
    assert wasserstein(mu, nu) == pytest.approx(expected, rel=1e-12)


def test_wasserstein_metric_axioms():
    for i in range(20):
        rng = np.random.default_rng([3, i])
        mu, nu, rho = (DiscreteMeasure.uniform(random_tuple(rng, int(rng.integers(1, 4)), 2))
                       for _ in range(3))
        assert abs(wasserstein(mu, nu) - wasserstein(nu, mu)) <= 1e-12
        assert wasserstein(mu, rho) <= wasserstein(mu, nu) + wasserstein(nu, rho) + 1e-9


def test_barycenter_examples():
    x = random_tuple(np.random.default_rng(4), 1, 3)[0]
    assert karcher_barycenter(DiscreteMeasure.point_mass(x)) is x
    pts = random_tuple(np.random.default_rng(5), 4, 3)
    mu = DiscreteMeasure.uniform(pts)
    assert delta(karcher_barycenter(mu), karcher_mean(pts)) <= 1e-12
    assert karcher_residual(karcher_barycenter(mu), pts) <= 1e-10
    scalar = karcher_barycenter(DiscreteMeasure(([[1.0]], [[4.0]]), (0.5, 0.5)))
    assert scalar.array[0, 0] == pytest.approx(2.0, abs=1e-12)
    assert delta(empirical_expectation(pts), karcher_mean(pts)) <= 1e-12


def test_weighted_mean_equals_barycenter():
    pts = random_tuple(np.random.default_rng(6), 3, 3)
    w = (0.5, 0.25, 0.25)
    np.testing.assert_allclose(
        karcher_barycenter(DiscreteMeasure(pts, w)).array, karcher_mean(pts, w).array, atol=1e-12
    )


def test_contractivity_examples():
    a, b = random_tuple(np.random.default_rng(7), 2, 3)
    mu = DiscreteMeasure.uniform([a, b])
    r = contractivity_check(mu, mu)
    assert r.holds and r.lhs <= 1e-12
    r = contractivity_check(DiscreteMeasure.point_mass(a), DiscreteMeasure.point_mass(b))
    assert r.holds and r.lhs == pytest.approx(r.rhs, rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 5), st.integers(1, 5))
def test_contractivity_holds(seed, n, m):
    rng = np.random.default_rng(seed)
    mu = DiscreteMeasure.uniform(random_tuple(rng, n, 3))
    nu = DiscreteMeasure.uniform(random_tuple(rng, m, 3))
    assert contractivity_check(mu, nu).holds


def test_iterativity():
    cfg = SolverConfig(tol=1e-12)
    x = random_tuple(np.random.default_rng(8), 1, 3)
    assert iterativity_check(x, 4) == 0.0
    a, b = random_tuple(np.random.default_rng(9), 2, 3)
    assert iterativity_check([a, b], 2, cfg) <= 1e-9
    assert iterativity_check([[[1.0]], [[5.0]], [[2.0]]], 3, cfg) <= 1e-12
    with pytest.raises(ValueError):
        iterativity_check(random_tuple(np.random.default_rng(10), 5, 2), 13)
