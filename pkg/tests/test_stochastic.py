import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spdmeans.linalg import SpdMatrix
from spdmeans.means import WeightedTuple, inductive_mean, karcher_mean
from spdmeans.metrics import delta
from spdmeans.sampling import random_tuple, random_weight
from spdmeans.stochastic import (
    IndexSampler,
    convergence_experiment,
    cyclic_block,
    deterministic_walk,
    monotonicity_experiment,
    rational_counts,
    sturm_walk,
)

SCALARS = [[[1.0]], [[2.0]], [[4.0]]]


def test_sampler_frequencies_follow_weights():
    w = np.array([0.1, 0.6, 0.3])
    draws = IndexSampler(w, 0).draw(100_000)
    assert draws.min() >= 0 and draws.max() <= 2
    np.testing.assert_allclose(np.bincount(draws) / draws.size, w, atol=0.01)


def test_sampler_is_reproducible():
    a = IndexSampler([0.5, 0.5], 123).draw(50)
    b = IndexSampler([0.5, 0.5], 123).draw(50)
    np.testing.assert_array_equal(a, b)


def test_walk_follows_recursion():
    pts = random_tuple(np.random.default_rng(0), 3, 2)
    tr = sturm_walk(pts, 6, seed=4)
    assert tr.indices.min() >= 1 and tr.indices.max() <= 3
    visited = [pts[i - 1] for i in tr.indices]
    for k in range(1, 7):
        assert delta(tr.points[k - 1], inductive_mean(visited[:k])) <= 1e-10
    np.testing.assert_array_equal(tr.points[0], visited[0].array)


def test_constant_walks():
    a = random_tuple(np.random.default_rng(1), 1, 3)[0]
    for tr in (sturm_walk([a, a, a], 50, seed=2), sturm_walk([a], 20, seed=3),
               deterministic_walk([a, a], 20)):
        assert max(delta(p, a) for p in tr.points) <= 1e-12


def test_walk_traces_are_bit_identical():
    pts = random_tuple(np.random.default_rng(5), 3, 3)
    t1 = sturm_walk(pts, 200, seed=9, checkpoints=[10, 200], target=pts[0])
    t2 = sturm_walk(pts, 200, seed=9, checkpoints=[10, 200], target=pts[0])
    assert t1.distances == t2.distances
    np.testing.assert_array_equal(t1.indices, t2.indices)
    np.testing.assert_array_equal(t1.final, t2.final)


def test_trace_rows_and_header():
    pts = random_tuple(np.random.default_rng(6), 2, 2)
    tr = sturm_walk(pts, 5, seed=0, checkpoints=[2, 5])
    assert tr.header() == ["step", "m00", "m01", "m10", "m11"]
    assert [r[0] for r in tr.to_rows()] == [2, 5]
    tr = sturm_walk(pts, 5, seed=0, target=pts[0])
    assert tr.header() == ["step", "distance_to_target"]
    assert len(tr.to_rows()) == 5
    with pytest.raises(ValueError):
        sturm_walk(pts, 5, seed=0, checkpoints=[6])
    with pytest.raises(ValueError):
        sturm_walk(pts, 0, seed=0)


def test_scalar_sturm_walk_converges():
    hits = 0
    for seed in range(50):
        final = sturm_walk(SCALARS, 10_000, seed, checkpoints=[10_000]).final
        hits += abs(np.log(final[0, 0]) - np.log(2.0)) <= 0.05
    assert hits >= 45


def test_scalar_deterministic_walk_converges():
    tr = deterministic_walk(SCALARS, 10_000, checkpoints=[10_000])
    assert abs(np.log(tr.final[0, 0]) - np.log(2.0)) <= 0.05


def test_cyclic_block():
    np.testing.assert_array_equal(cyclic_block([1 / 3] * 3), [0, 1, 2])
    np.testing.assert_array_equal(cyclic_block([0.5, 0.25, 0.25]), [0, 0, 1, 2])
    tr = deterministic_walk(random_tuple(np.random.default_rng(7), 3, 2), 7)
    np.testing.assert_array_equal(tr.indices, [1, 2, 3, 1, 2, 3, 1])
    with pytest.raises(ValueError):
        cyclic_block([1 / np.pi, 1 - 1 / np.pi])


def test_rational_counts():
    assert rational_counts([0.4, 0.6]) == ([2, 3], 5)
    assert rational_counts([2 / 3, 1 / 3]) == ([2, 1], 3)
    with pytest.raises(ValueError):
        rational_counts([1 / 7, 1 / 11, 1 - 1 / 7 - 1 / 11])


def test_monotonicity_examples():
    rng = np.random.default_rng(8)
    lower = random_tuple(rng, 3, 3)
    same = monotonicity_experiment(lower, lower, 100, seed=1)
    assert same.all_passed and max(abs(m) for m in same.margins) <= 1e-12
    upper = [SpdMatrix(p.array + 0.1 * np.eye(3)) for p in lower]
    for seed in range(20):
        assert monotonicity_experiment(lower, upper, 200, seed).all_passed
    with pytest.raises(ValueError):
        monotonicity_experiment(upper, lower, 10, seed=0)


def test_monotonicity_scalar_tuples():
    lower = WeightedTuple((0.2, 0.8), [[[1.0]], [[3.0]]])
    upper = WeightedTuple((0.2, 0.8), [[[1.5]], [[3.0]]])
    rep = monotonicity_experiment(lower, upper, 100, seed=3)
    assert rep.all_passed and min(rep.margins) >= 0


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_weighted_walk_targets_weighted_mean(seed):
    rng = np.random.default_rng(seed)
    pts, w = random_tuple(rng, 3, 2, 0.3), random_weight(rng, 3)
    tr = sturm_walk(pts, 2000, seed, w, checkpoints=[20, 2000], target=karcher_mean(pts, w))
    assert tr.distances[1] <= 0.2


def test_convergence_experiment_shape_and_order():
    pts = random_tuple(np.random.default_rng(9), 3, 2, 0.3)
    out = convergence_experiment(pts, [3, 1], 300, [10, 300])
    assert out.shape == (2, 2)
    again = convergence_experiment(pts, [1], 300, [10, 300])
    np.testing.assert_array_equal(out[1], again[0])
    det = convergence_experiment(pts, [], 300, [10, 300], deterministic=True)
    assert det.shape == (1, 2) and det[0, 1] < det[0, 0]
