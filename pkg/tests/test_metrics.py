import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spdmeans.linalg import SpdMatrix, expm
from spdmeans.metrics import (
    MetricTag,
    batch_distances,
    delta,
    distance,
    geodesic,
    npc_check,
    thompson,
    weighted_geometric,
)
from spdmeans.sampling import random_invertible, random_spd, random_symmetric, random_tuple

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(1, 5)


def close(x, y):
    return abs(x - y) <= 1e-9 + 1e-9 * max(abs(x), abs(y))


def test_distance_examples():
    e = np.e
    assert delta(np.eye(2), np.diag([e**2, e**-2])) == pytest.approx(2 * np.sqrt(2), abs=1e-14)
    assert delta(2 * np.eye(2), 8 * np.eye(2)) == pytest.approx(np.sqrt(2) * np.log(4), abs=1e-14)
    assert thompson(np.eye(2), np.diag([e**2, e**-3])) == pytest.approx(3.0, abs=1e-14)
    assert thompson(2 * np.eye(3), 8 * np.eye(3)) == pytest.approx(np.log(4), abs=1e-14)
    a = random_spd(np.random.default_rng(0), 3)
    assert delta(a, a) == pytest.approx(0.0, abs=1e-14)


def test_distance_selector():
    a, b = np.eye(2), np.diag([np.e, 1.0])
    assert distance(a, b, "riemannian") == delta(a, b)
    assert distance(a, b, MetricTag.THOMPSON) == thompson(a, b)
    with pytest.raises(ValueError):
        distance(a, b, "euclid")
    with pytest.raises(ValueError):
        delta(np.eye(2), np.eye(3))


def test_batch_distances_match_single():
    rng = np.random.default_rng(1)
    a, *bs = random_tuple(rng, 5, 3)
    stack = np.stack([b.array for b in bs])
    np.testing.assert_allclose(batch_distances(a, stack), [delta(a, b) for b in bs], rtol=1e-13)
    np.testing.assert_allclose(
        batch_distances(a, stack, MetricTag.THOMPSON), [thompson(a, b) for b in bs], rtol=1e-13
    )


def test_geodesic_examples():
    a, b = np.eye(2), np.diag([np.e, 1.0])
    np.testing.assert_allclose(weighted_geometric(a, b, 0.5).array, np.diag([np.sqrt(np.e), 1.0]))
    np.testing.assert_allclose(weighted_geometric(a, b, 0.25).array, np.diag([np.e**0.25, 1.0]))
    x, y = random_tuple(np.random.default_rng(2), 2, 3)
    assert weighted_geometric(x, y, 0.0) is x
    assert weighted_geometric(x, y, 1.0) is y
    with pytest.raises(ValueError):
        weighted_geometric(x, y, 1.5)


def test_batched_geodesic_matches_single():
    rng = np.random.default_rng(3)
    xs, ys = random_tuple(rng, 4, 3), random_tuple(rng, 4, 3)
    out = geodesic(np.stack([x.array for x in xs]), np.stack([y.array for y in ys]), 0.3)
    for g, x, y in zip(out, xs, ys):
        np.testing.assert_allclose(g, weighted_geometric(x, y, 0.3).array, rtol=1e-12)


@settings(max_examples=40, deadline=None)
@given(seeds, dims, st.floats(0.0, 1.0))
def test_geodesic_splits_distance(seed, dim, t):
    a, b = random_tuple(np.random.default_rng(seed), 2, dim)
    g = weighted_geometric(a, b, t)
    d = delta(a, b)
    assert close(delta(a, g), t * d)
    assert close(delta(g, b), (1 - t) * d)


@settings(max_examples=40, deadline=None)
@given(seeds, dims)
def test_congruence_and_inversion_isometry(seed, dim):
    rng = np.random.default_rng(seed)
    a, b = random_tuple(rng, 2, dim)
    m = random_invertible(rng, dim)
    ma, mb = m @ a.array @ m.T, m @ b.array @ m.T
    assert close(delta(ma, mb), delta(a, b))
    assert close(thompson(ma, mb), thompson(a, b))
    assert close(delta(a.inv(), b.inv()), delta(a, b))
    assert close(thompson(a.inv(), b.inv()), thompson(a, b))


@settings(max_examples=40, deadline=None)
@given(seeds, dims)
def test_triangle_inequality(seed, dim):
    a, b, c = random_tuple(np.random.default_rng(seed), 3, dim, 1.0)
    for d in (delta, thompson):
        assert d(a, c) <= d(a, b) + d(b, c) + 1e-9
        assert close(d(a, b), d(b, a))


@settings(max_examples=40, deadline=None)
@given(seeds, dims)
def test_exponential_is_expansive(seed, dim):
    rng = np.random.default_rng(seed)
    x, y = random_symmetric(rng, dim), random_symmetric(rng, dim)
    assert delta(expm(x), expm(y)) >= np.linalg.norm(y - x) - 1e-9


@settings(max_examples=40, deadline=None)
@given(seeds, dims, st.floats(-2, 2), st.floats(-2, 2))
def test_one_dimensional_isometry(seed, dim, s, t):
    x = random_symmetric(np.random.default_rng(seed), dim)
    assert close(delta(expm(s * x), expm(t * x)), abs(t - s) * np.linalg.norm(x))


def test_midpoint_minimality():
    rng = np.random.default_rng(4)
    a, b = random_tuple(rng, 2, 3, 1.0)
    m = weighted_geometric(a, b, 0.5)
    f_m = delta(m, a) ** 2 + delta(m, b) ** 2
    mh = m.sqrt().array
    for size in np.geomspace(1e-3, 1e-1, 20):
        g = random_symmetric(rng, 3)
        x = SpdMatrix(mh @ expm(size * g / np.linalg.norm(g)).array @ mh)
        assert delta(m, x) == pytest.approx(size, rel=1e-8)
        assert delta(x, a) ** 2 + delta(x, b) ** 2 > f_m


@settings(max_examples=60, deadline=None)
@given(seeds, dims)
def test_npc_law(seed, dim):
    assert npc_check(*random_tuple(np.random.default_rng(seed), 3, dim, 1.0)).holds


def test_npc_equality_on_scalars():
    rng = np.random.default_rng(5)
    for _ in range(100):
        r = npc_check(*([[v]] for v in np.exp(rng.uniform(-3, 3, 3))))
        assert r.lhs == pytest.approx(r.rhs, abs=1e-10)
