from __future__ import annotations

import itertools

import numpy as np
import pytest

from nashinit.clustering import (
    Clustering,
    assign_naive,
    assign_pruned,
    best_of_restarts,
    kmeanspp_seed,
    lloyd,
)


def exhaustive_two_cluster_sse(points: np.ndarray) -> float:
    """Oracle: enumerate every 2-partition and return the optimal SSE."""
    best = np.inf
    n = len(points)
    for bits in itertools.product([0, 1], repeat=n):
        bits = np.array(bits)
        if bits.min() == bits.max():
            continue  # a partition needs both clusters nonempty
        sse = 0.0
        for c in (0, 1):
            members = points[bits == c]
            sse += ((members - members.mean(axis=0)) ** 2).sum()
        best = min(best, sse)
    return best


class TestSeeding:
    def test_single_center_is_uniform_pool_point(self):
        pool = np.random.default_rng(0).random((12, 4))
        centers = kmeanspp_seed(pool, 1, np.random.default_rng(1))
        assert any(np.array_equal(centers[0], p) for p in pool)

    def test_pool_smaller_than_k_rejected(self):
        with pytest.raises(ValueError):
            kmeanspp_seed(np.zeros((2, 3)), 5, np.random.default_rng(0))

    def test_identical_pool_falls_back_to_uniform(self):
        pool = np.ones((6, 3))
        centers = kmeanspp_seed(pool, 3, np.random.default_rng(2))
        assert centers.shape == (3, 3)
        np.testing.assert_array_equal(centers, np.ones((3, 3)))

    def test_outlier_second_pick_frequency_matches_weights(self):
        # One far outlier in a tight cluster.  The analytic probability that
        # the outlier is the second center is the mixture over the uniform
        # first pick f of  w_out / sum_h w_h  with w_h = d(h, f)^2.
        rng = np.random.default_rng(3)
        pool = np.vstack([rng.random((5, 2)) * 0.1, [[5.0, 5.0]]])
        H = len(pool)
        analytic = 0.0
        for f in range(H):
            w = ((pool - pool[f]) ** 2).sum(axis=1)
            total = w.sum()
            if total > 0:
                analytic += (1.0 / H) * (w[-1] / total)
        trials = 100_000
        mc = np.random.default_rng(99)
        hits = 0
        for _ in range(trials):
            centers = kmeanspp_seed(pool, 2, mc)
            hits += np.array_equal(centers[1], pool[-1])
        assert abs(hits / trials - analytic) < 0.01


class TestAssignment:
    def test_pruned_equals_naive_random_start(self):
        rng = np.random.default_rng(7)
        points = rng.random((800, 10))
        centers = rng.random((7, 10))
        start = rng.integers(0, 7, size=800).astype(np.intp)
        naive_idx, naive_sq = assign_naive(points, centers)
        pruned_idx, pruned_sq = assign_pruned(points, centers, start)
        assert np.array_equal(naive_idx, pruned_idx)
        assert abs(naive_sq.sum() - pruned_sq.sum()) < 1e-9

    def test_pruned_equals_naive_separated_clusters(self):
        # Well-separated clusters actually exercise the pruning branch.
        rng = np.random.default_rng(8)
        points = np.vstack([rng.random((300, 6)) + 40.0 * k for k in range(4)])
        centers = points[rng.choice(len(points), size=4, replace=False)]
        start = np.zeros(len(points), dtype=np.intp)
        naive_idx, _ = assign_naive(points, centers)
        pruned_idx, _ = assign_pruned(points, centers, start)
        assert np.array_equal(naive_idx, pruned_idx)


class TestLloyd:
    def test_converges_in_one_iteration_from_true_means(self):
        rng = np.random.default_rng(1)
        a = rng.random((50, 3)) * 0.1
        b = rng.random((50, 3)) * 0.1 + 10.0
        points = np.vstack([a, b])
        seeds = np.vstack([a.mean(axis=0), b.mean(axis=0)])
        result = lloyd(points, seeds)
        assert result.iterations == 1
        assert np.array_equal(result.assignment, np.repeat([0, 1], 50))
        np.testing.assert_allclose(result.centers, seeds, atol=1e-12)

    def test_pruned_and_naive_runs_identical(self):
        rng = np.random.default_rng(5)
        points = rng.random((1000, 8))
        seeds = kmeanspp_seed(points, 6, np.random.default_rng(2))
        pruned = lloyd(points, seeds, prune=True)
        naive = lloyd(points, seeds, prune=False)
        assert np.array_equal(pruned.assignment, naive.assignment)
        assert pruned.sse == pytest.approx(naive.sse, abs=1e-9)

    def test_h_equals_k_gives_zero_sse(self):
        rng = np.random.default_rng(9)
        points = rng.random((4, 5))
        result = lloyd(points, points.copy())
        assert result.sse == pytest.approx(0.0, abs=1e-18)

    def test_empty_cluster_reseeded_to_farthest_point(self):
        # Duplicate seeds force an empty cluster on the first assignment.
        rng = np.random.default_rng(11)
        points = rng.random((40, 2))
        seeds = np.vstack([points[0], points[0]])
        result = lloyd(points, seeds)
        assert set(np.unique(result.assignment)) == {0, 1}
        assert result.sse < ((points - points.mean(axis=0)) ** 2).sum()

    def test_centers_of_simplex_points_stay_on_simplex(self):
        rng = np.random.default_rng(13)
        raw = rng.exponential(size=(200, 6))
        points = raw / raw.sum(axis=1, keepdims=True)
        result = best_of_restarts(points, 4, np.random.default_rng(3))
        np.testing.assert_allclose(result.centers.sum(axis=1), 1.0, atol=1e-9)
        assert np.all(result.centers >= -1e-12)


class TestBestOfRestarts:
    def test_single_restart_equals_single_run(self):
        rng = np.random.default_rng(21)
        points = rng.random((60, 4))
        picked = best_of_restarts(points, 3, np.random.default_rng(77), restarts=1)
        manual_rng = np.random.default_rng(77)
        manual = lloyd(points, kmeanspp_seed(points, 3, manual_rng))
        assert np.array_equal(picked.assignment, manual.assignment)
        assert picked.sse == manual.sse

    def test_returns_minimum_over_restarts(self):
        rng = np.random.default_rng(30)
        points = rng.random((80, 5))
        result = best_of_restarts(points, 4, np.random.default_rng(4), restarts=5)
        manual_rng = np.random.default_rng(4)
        sses = []
        for _ in range(5):
            sses.append(lloyd(points, kmeanspp_seed(points, 4, manual_rng)).sse)
        assert result.sse == min(sses)

    def test_matches_exhaustive_partition_on_tiny_pool(self):
        rng = np.random.default_rng(55)
        points = rng.random((8, 3))
        result = best_of_restarts(points, 2, np.random.default_rng(6))
        assert result.sse == pytest.approx(exhaustive_two_cluster_sse(points), abs=1e-9)

    def test_clustering_fields_consistent(self):
        rng = np.random.default_rng(60)
        points = rng.random((100, 4))
        result = best_of_restarts(points, 5, np.random.default_rng(8))
        assert isinstance(result, Clustering)
        assert result.assignment.shape == (100,)
        assert np.all(result.assignment < 5)
        recomputed = sum(
            ((points[i] - result.centers[result.assignment[i]]) ** 2).sum()
            for i in range(100)
        )
        assert result.sse == pytest.approx(recomputed, abs=1e-9)
        # at convergence every center is the mean of its assigned points
        for c in range(5):
            members = points[result.assignment == c]
            if len(members):
                np.testing.assert_allclose(result.centers[c], members.mean(axis=0), atol=1e-9)
