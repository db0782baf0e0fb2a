import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from graphlda import (
    AsymmetricMatrix,
    ClassMeans,
    DimensionMismatch,
    ErdosRenyi,
    GraphSpec,
    InvalidConfig,
    ModelParams,
    gen_graph,
    make_episode,
    sample_class_means,
    sample_signals,
    true_covariance,
)

CHAIN2 = np.array([[0.0, 1.0], [1.0, 0.0]])
PATH3 = np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 1.0], [0.0, 1.0, 0.0]])


class TestModelParams:
    def test_rejects_negative_levels(self):
        with pytest.raises(InvalidConfig):
            ModelParams(alpha=-0.1, beta=1.0, gso=CHAIN2)
        with pytest.raises(InvalidConfig):
            ModelParams(alpha=1.0, beta=-1.0, gso=CHAIN2)

    def test_rejects_asymmetric_operator(self):
        with pytest.raises(AsymmetricMatrix):
            ModelParams(alpha=1.0, beta=1.0, gso=np.array([[0.0, 1.0], [0.5, 0.0]]))

    def test_both_zero_allowed(self):
        params = ModelParams(alpha=0.0, beta=0.0, gso=CHAIN2)
        assert params.dim == 2


class TestClassMeans:
    def test_needs_two_classes(self):
        with pytest.raises(InvalidConfig):
            ClassMeans(np.zeros((1, 4)))

    def test_antipodal_exact_negation(self, rng):
        means = sample_class_means(50, 2, antipodal=True, rng=rng)
        assert_array_equal(means.means[1], -means.means[0])
        assert np.all(np.abs(means.means) <= 1.0)

    def test_antipodal_needs_two_classes(self, rng):
        with pytest.raises(InvalidConfig):
            sample_class_means(10, 3, antipodal=True, rng=rng)

    def test_general_means_shape_and_range(self, rng):
        means = sample_class_means(20, 5, antipodal=False, rng=rng)
        assert means.means.shape == (5, 20)
        assert np.all(np.abs(means.means) <= 1.0)

    def test_deterministic(self):
        a = sample_class_means(10, 2, antipodal=True, rng=np.random.default_rng(3))
        b = sample_class_means(10, 2, antipodal=True, rng=np.random.default_rng(3))
        assert_array_equal(a.means, b.means)


class TestTrueCovariance:
    def test_white_only(self):
        params = ModelParams(alpha=0.0, beta=3.0, gso=np.zeros((4, 4)))
        assert_array_equal(true_covariance(params), 9.0 * np.eye(4))

    def test_chain_both_levels(self):
        # chain squared is the identity, so the covariance is 2 I
        params = ModelParams(alpha=1.0, beta=1.0, gso=CHAIN2)
        assert_allclose(true_covariance(params), 2.0 * np.eye(2))

    def test_general_formula(self, rng):
        m = rng.standard_normal((5, 5))
        s = (m + m.T) / 2.0
        params = ModelParams(alpha=1.5, beta=0.5, gso=s)
        assert_allclose(true_covariance(params), 2.25 * s @ s + 0.25 * np.eye(5))


class TestSampleSignals:
    def test_noiseless_equals_means(self, rng):
        means = ClassMeans(np.array([[1.0, -2.0], [3.0, 4.0]]))
        params = ModelParams(alpha=0.0, beta=0.0, gso=CHAIN2)
        x, y = sample_signals(means, params, 3, rng)
        assert_array_equal(x, np.repeat(means.means, 3, axis=0))
        assert_array_equal(y, [0, 0, 0, 1, 1, 1])

    def test_label_blocks(self, rng):
        means = ClassMeans(np.zeros((3, 2)))
        params = ModelParams(alpha=1.0, beta=1.0, gso=CHAIN2)
        x, y = sample_signals(means, params, 4, rng)
        assert x.shape == (12, 2)
        assert_array_equal(y, np.repeat([0, 1, 2], 4))

    def test_chain_covariance_monte_carlo(self):
        # noise covariance of the chain at alpha = beta = 1 is 2 I
        rng = np.random.default_rng(42)
        means = ClassMeans(np.zeros((2, 2)))
        params = ModelParams(alpha=1.0, beta=1.0, gso=CHAIN2)
        x, _ = sample_signals(means, params, 100000, rng)
        emp = x.T @ x / x.shape[0]
        assert np.max(np.abs(emp - 2.0 * np.eye(2))) <= 0.05

    def test_path_covariance_monte_carlo(self):
        rng = np.random.default_rng(43)
        means = ClassMeans(np.zeros((2, 3)))
        params = ModelParams(alpha=1.0, beta=1.0, gso=PATH3)
        x, _ = sample_signals(means, params, 100000, rng)
        emp = x.T @ x / x.shape[0]
        expected = PATH3 @ PATH3 + np.eye(3)
        assert np.max(np.abs(emp - expected)) <= 0.05

    def test_mean_convergence_on_preset_graph(self):
        graph = gen_graph(
            GraphSpec(ErdosRenyi(100, 0.184)), np.random.default_rng(0)
        )
        rng = np.random.default_rng(44)
        means = sample_class_means(100, 2, antipodal=True, rng=rng)
        params = ModelParams(alpha=1.0, beta=1.0, gso=graph.adjacency)
        x, y = sample_signals(means, params, 50000, rng)
        emp = x[y == 0].mean(axis=0)
        assert np.max(np.abs(emp - means.means[0])) <= 0.1

    def test_scaling_linearity(self):
        # scaling means and both noise levels by t scales every sample by t
        base_means = ClassMeans(np.array([[1.0, 0.0, -1.0], [0.5, 2.0, 0.0]]))
        t = 3.0
        scaled_means = ClassMeans(t * base_means.means)
        x1, _ = sample_signals(
            base_means,
            ModelParams(alpha=1.0, beta=0.5, gso=PATH3),
            200,
            np.random.default_rng(9),
        )
        x2, _ = sample_signals(
            scaled_means,
            ModelParams(alpha=t, beta=t * 0.5, gso=PATH3),
            200,
            np.random.default_rng(9),
        )
        assert_allclose(x2, t * x1, rtol=1e-12, atol=1e-12)

    def test_dimension_mismatch(self, rng):
        means = ClassMeans(np.zeros((2, 3)))
        params = ModelParams(alpha=1.0, beta=1.0, gso=CHAIN2)
        with pytest.raises(DimensionMismatch):
            sample_signals(means, params, 5, rng)

    def test_rejects_zero_samples(self, rng):
        means = ClassMeans(np.zeros((2, 2)))
        params = ModelParams(alpha=1.0, beta=1.0, gso=CHAIN2)
        with pytest.raises(InvalidConfig):
            sample_signals(means, params, 0, rng)


class TestMakeEpisode:
    def test_shapes_and_balance(self, rng):
        means = sample_class_means(10, 2, antipodal=True, rng=rng)
        params = ModelParams(alpha=1.0, beta=1.0, gso=np.zeros((10, 10)))
        episode = make_episode(means, params, 5, 100, rng)
        assert episode.train_x.shape == (10, 10)
        assert episode.query_x.shape == (200, 10)
        assert_array_equal(np.bincount(episode.train_y), [5, 5])
        assert_array_equal(np.bincount(episode.query_y), [100, 100])

    def test_deterministic(self):
        means = ClassMeans(np.array([[1.0, 0.0], [-1.0, 0.0]]))
        params = ModelParams(alpha=1.0, beta=1.0, gso=CHAIN2)
        a = make_episode(means, params, 3, 7, np.random.default_rng(5))
        b = make_episode(means, params, 3, 7, np.random.default_rng(5))
        assert_array_equal(a.train_x, b.train_x)
        assert_array_equal(a.query_x, b.query_x)

    def test_train_and_query_differ(self, rng):
        means = ClassMeans(np.array([[1.0, 0.0], [-1.0, 0.0]]))
        params = ModelParams(alpha=1.0, beta=1.0, gso=CHAIN2)
        episode = make_episode(means, params, 3, 3, rng)
        assert not np.array_equal(episode.train_x, episode.query_x)

    def test_rejects_bad_counts(self, rng):
        means = ClassMeans(np.array([[1.0, 0.0], [-1.0, 0.0]]))
        params = ModelParams(alpha=1.0, beta=1.0, gso=CHAIN2)
        with pytest.raises(InvalidConfig):
            make_episode(means, params, 0, 5, rng)
        with pytest.raises(InvalidConfig):
            make_episode(means, params, 5, 0, rng)
