import math

import numpy as np
import pytest

from edakit.cluster import (
    Linkage,
    agglomerative,
    cut,
    dbscan,
    gmm,
    gmm_predict,
    kmeans,
)


def blobs(seed, centers, n_per=20, spread=0.3):
    rng = np.random.default_rng(seed)
    parts = [rng.normal(c, spread, (n_per, len(c))) for c in centers]
    return np.vstack(parts)


TOY = np.array([[0.0, 0.0], [0.0, 1.0], [10.0, 0.0], [10.0, 1.0]])


class TestKMeans:
    def test_toy_two_clusters(self):
        r = kmeans(TOY, 2, seed=7)
        assert math.isclose(r.inertia, 1.0, abs_tol=1e-12)
        got = sorted(map(tuple, r.centroids.tolist()))
        assert got == [(0.0, 0.5), (10.0, 0.5)]
        assert r.labels[0] == r.labels[1] != r.labels[2] == r.labels[3]

    def test_k_equals_n_zero_inertia(self):
        r = kmeans(TOY, 4, seed=1)
        assert r.inertia == 0.0

    def test_k_one_gives_global_mean(self):
        r = kmeans(TOY, 1, seed=1)
        assert np.allclose(r.centroids[0], TOY.mean(axis=0))

    def test_k_too_large(self):
        with pytest.raises(ValueError, match="outside valid range"):
            kmeans(TOY, 5, seed=1)

    def test_k_exceeds_distinct(self):
        data = np.array([[1.0, 1.0]] * 4 + [[2.0, 2.0]] * 4)
        with pytest.raises(ValueError, match="distinct"):
            kmeans(data, 3, seed=1)

    def test_inertia_history_non_increasing(self):
        for seed in range(10):
            data = blobs(seed, [(0, 0), (5, 5), (-4, 6)])
            r = kmeans(data, 3, seed=seed)
            h = r.inertia_history
            assert all(h[i] >= h[i + 1] - 1e-9 for i in range(len(h) - 1))

    def test_fixed_point(self):
        for seed in range(10):
            data = blobs(seed + 50, [(0, 0), (6, 1)], n_per=15)
            r = kmeans(data, 2, seed=seed)
            d2 = ((data[:, None, :] - r.centroids[None, :, :]) ** 2).sum(axis=2)
            reassigned = tuple(int(v) for v in np.argmin(d2, axis=1))
            assert reassigned == r.labels

    def test_centroids_are_cluster_means(self):
        data = blobs(3, [(0, 0), (8, 8)])
        r = kmeans(data, 2, seed=11)
        labels = np.array(r.labels)
        for j in range(2):
            assert np.allclose(r.centroids[j], data[labels == j].mean(axis=0), atol=1e-9)

    def test_seeded_determinism(self):
        data = blobs(4, [(0, 0), (3, 3), (9, 0)], n_per=25)
        a = kmeans(data, 3, seed=42)
        b = kmeans(data, 3, seed=42)
        assert a.labels == b.labels
        assert a.centroids.tobytes() == b.centroids.tobytes()
        assert a.inertia == b.inertia
        assert a.inertia_history == b.inertia_history

    def test_inertia_recomputable(self):
        data = blobs(5, [(0, 0), (5, 0)])
        r = kmeans(data, 2, seed=9)
        d2 = ((data - r.centroids[np.array(r.labels)]) ** 2).sum()
        assert math.isclose(r.inertia, float(d2), rel_tol=1e-12)


class TestAgglomerative:
    def test_first_merge_nearest_pair(self):
        d = agglomerative(np.array([[0.0], [1.0], [10.0]]), Linkage.SINGLE)
        first = d.merges[0]
        assert (first.cluster_a, first.cluster_b) == (0, 1)
        assert first.distance == 1.0

    def test_merge_count(self):
        data = blobs(1, [(0, 0), (4, 4)], n_per=8)
        d = agglomerative(data, Linkage.AVERAGE)
        assert len(d.merges) == len(data) - 1

    @pytest.mark.parametrize("linkage", list(Linkage))
    def test_merge_distances_non_decreasing(self, linkage):
        for seed in range(5):
            rng = np.random.default_rng(seed)
            data = rng.normal(0, 1, (30, 3))
            d = agglomerative(data, linkage)
            dist = [m.distance for m in d.merges]
            assert all(dist[i] <= dist[i + 1] + 1e-12 for i in range(len(dist) - 1))

    def test_cut_extremes(self):
        data = blobs(2, [(0, 0), (5, 5)], n_per=5)
        d = agglomerative(data, Linkage.COMPLETE)
        n = len(data)
        assert cut(d, n) == tuple(range(n))
        assert cut(d, 1) == tuple([0] * n)

    def test_cut_recovers_separated_blobs(self):
        data = np.vstack([blobs(3, [(0, 0)], n_per=10), blobs(4, [(50, 50)], n_per=10)])
        d = agglomerative(data, Linkage.SINGLE)
        labels = cut(d, 2)
        assert len(set(labels[:10])) == 1
        assert len(set(labels[10:])) == 1
        assert labels[0] != labels[10]

    def test_cut_k_out_of_range(self):
        d = agglomerative(TOY, Linkage.SINGLE)
        with pytest.raises(ValueError):
            cut(d, 0)
        with pytest.raises(ValueError):
            cut(d, 5)

    def test_tie_break_lowest_pair(self):
        # three points with two equal nearest distances: (0,1) and (1,2)
        d = agglomerative(np.array([[0.0], [1.0], [2.0]]), Linkage.SINGLE)
        assert (d.merges[0].cluster_a, d.merges[0].cluster_b) == (0, 1)


class TestDbscan:
    def test_two_blobs_and_noise(self):
        data = np.array(
            [[0.0, 0.0], [0.1, 0.0], [0.0, 0.1],
             [5.0, 5.0], [5.1, 5.0], [5.0, 5.1],
             [50.0, 50.0]]
        )
        r = dbscan(data, eps=0.5, min_pts=2)
        assert r.labels[:3] == (0, 0, 0)
        assert r.labels[3:6] == (1, 1, 1)
        assert r.labels[6] == -1

    def test_min_pts_one_no_noise(self):
        rng = np.random.default_rng(8)
        data = rng.normal(0, 5, (30, 2))
        r = dbscan(data, eps=0.01, min_pts=1)
        assert -1 not in r.labels

    def test_eps_larger_than_diameter_single_cluster(self):
        rng = np.random.default_rng(9)
        data = rng.normal(0, 1, (25, 2))
        r = dbscan(data, eps=100.0, min_pts=3)
        assert set(r.labels) == {0}

    def test_closed_ball_boundary(self):
        data = np.array([[0.0], [1.0], [2.0]])
        r = dbscan(data, eps=1.0, min_pts=3)
        # middle point has neighbors at distance exactly eps on both sides
        assert r.labels == (0, 0, 0)

    def test_partition_invariant_under_permutation(self):
        for seed in range(10):
            rng = np.random.default_rng(seed)
            data = blobs(seed, [(0, 0), (4, 4), (9, 0)], n_per=12, spread=0.4)
            base = dbscan(data, eps=1.0, min_pts=3)
            perm = rng.permutation(len(data))
            permuted = dbscan(data[perm], eps=1.0, min_pts=3)

            def partition(labels):
                groups = {}
                for idx, lab in enumerate(labels):
                    groups.setdefault(lab, set()).add(idx)
                noise = groups.pop(-1, set())
                return set(frozenset(g) for g in groups.values()), noise

            inv = np.empty(len(perm), dtype=int)
            inv[perm] = np.arange(len(perm))
            mapped = tuple(permuted.labels[inv[i]] for i in range(len(data)))
            assert partition(base.labels) == partition(mapped)

    def test_invalid_params(self):
        with pytest.raises(ValueError):
            dbscan(TOY, eps=0.0, min_pts=2)
        with pytest.raises(ValueError):
            dbscan(TOY, eps=1.0, min_pts=0)


class TestGmm:
    def test_single_component_closed_form(self):
        data = blobs(1, [(2, 3)], n_per=40)
        m = gmm(data, 1, seed=5, ridge=1e-6)
        assert np.allclose(m.weights, [1.0])
        assert np.allclose(m.means[0], data.mean(axis=0), atol=1e-9)
        diff = data - data.mean(axis=0)
        mle = diff.T @ diff / len(data)
        assert np.allclose(m.covariances[0], mle + 1e-6 * np.eye(2), atol=1e-9)

    def test_responsibilities_sum_to_one(self):
        data = blobs(2, [(0, 0), (6, 6)])
        m = gmm(data, 2, seed=3)
        _, resp = gmm_predict(m, data)
        assert np.allclose(resp.sum(axis=1), 1.0, atol=1e-12)

    def test_recovers_separated_means(self):
        data = blobs(7, [(0.0, 0.0), (8.0, 8.0)], n_per=500, spread=0.4)
        m = gmm(data, 2, seed=1)
        got = sorted(map(tuple, m.means.tolist()))
        true = [(0.0, 0.0), (8.0, 8.0)]
        for g, t in zip(got, true):
            assert math.hypot(g[0] - t[0], g[1] - t[1]) < 0.1

    def test_log_likelihood_non_decreasing(self):
        for seed in range(6):
            data = blobs(seed + 20, [(0, 0), (4, 2)], n_per=30)
            m = gmm(data, 2, seed=seed)
            h = m.log_likelihood_history
            assert all(h[i + 1] >= h[i] - 1e-10 for i in range(len(h) - 1))

    def test_weights_sum_to_one(self):
        data = blobs(3, [(0, 0), (5, 5), (0, 5)], n_per=25)
        m = gmm(data, 3, seed=2)
        assert math.isclose(float(m.weights.sum()), 1.0, abs_tol=1e-12)

    def test_covariances_symmetric_pd(self):
        data = blobs(4, [(0, 0), (6, 0)], n_per=40)
        m = gmm(data, 2, seed=4, ridge=1e-5)
        for cov in m.covariances:
            assert np.allclose(cov, cov.T, atol=1e-12)
            eigvals = np.linalg.eigvalsh(cov)
            assert eigvals.min() >= 1e-5 - 1e-9

    def test_seeded_determinism(self):
        data = blobs(5, [(0, 0), (7, 3)], n_per=35)
        a = gmm(data, 2, seed=123)
        b = gmm(data, 2, seed=123)
        assert a.log_likelihood == b.log_likelihood
        assert a.means.tobytes() == b.means.tobytes()
        assert a.covariances.tobytes() == b.covariances.tobytes()
        assert a.log_likelihood_history == b.log_likelihood_history

    def test_ridge_handles_degenerate_directions(self):
        # points on a line: MLE covariance is singular without the ridge
        t = np.linspace(0, 1, 50)
        data = np.column_stack([t, 2 * t])
        m = gmm(data, 1, seed=1, ridge=1e-4)
        assert np.isfinite(m.log_likelihood)

    def test_predict_labels_match_training_argmax(self):
        data = blobs(6, [(0, 0), (9, 9)], n_per=30)
        m = gmm(data, 2, seed=8)
        labels, resp = gmm_predict(m, data)
        assert labels == tuple(int(v) for v in np.argmax(resp, axis=1))
