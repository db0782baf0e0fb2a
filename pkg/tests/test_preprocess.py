import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from graphlda import (
    ClassMeans,
    DimensionMismatch,
    ErdosRenyi,
    FeatureStdScaler,
    GraphSpec,
    GraphWhitening,
    InsufficientData,
    InvalidConfig,
    ModelParams,
    RandomGeometric,
    SampleNormScaler,
    SingularWhitening,
    SpectralBasis,
    SpectralStdScaler,
    StochasticBlockModel,
    eigh_symmetric,
    estimate_gso_from_covariance,
    gen_graph,
    sample_signals,
    true_covariance,
)

CHAIN2 = np.array([[0.0, 1.0], [1.0, 0.0]])
PATH3 = np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 1.0], [0.0, 1.0, 0.0]])


class TestGraphWhitening:
    def test_path_scale_closed_form(self):
        # path eigenvalues are (-sqrt2, 0, sqrt2); with sigma_hat = 1 the
        # scales are (1/sqrt3, 1, 1/sqrt3)
        basis = eigh_symmetric(PATH3)
        w = GraphWhitening(basis, sigma_hat=1.0).fit()
        assert_allclose(w.scale_, [1.0 / np.sqrt(3.0), 1.0, 1.0 / np.sqrt(3.0)], atol=1e-9)

    def test_chain_scale(self):
        basis = eigh_symmetric(CHAIN2)
        w = GraphWhitening(basis, sigma_hat=1.0).fit()
        assert_allclose(w.scale_, [1.0 / np.sqrt(2.0)] * 2, atol=1e-12)

    def test_scale_consistent_with_definition(self, rng):
        m = rng.standard_normal((8, 8))
        basis = eigh_symmetric((m + m.T) / 2.0)
        w = GraphWhitening(basis, sigma_hat=0.7).fit()
        expected = 1.0 / np.sqrt(basis.eigenvalues**2 + 0.49)
        assert np.max(np.abs(w.scale_ - expected)) <= 1e-12

    def test_zero_sigma_with_zero_eigenvalue_raises(self):
        basis = eigh_symmetric(PATH3)
        with pytest.raises(SingularWhitening):
            GraphWhitening(basis, sigma_hat=0.0).fit()

    def test_zero_sigma_without_zero_eigenvalue(self):
        basis = eigh_symmetric(CHAIN2)
        w = GraphWhitening(basis, sigma_hat=0.0).fit()
        assert_allclose(w.scale_, [1.0, 1.0], atol=1e-12)

    def test_negative_sigma_rejected(self):
        basis = eigh_symmetric(CHAIN2)
        with pytest.raises(InvalidConfig):
            GraphWhitening(basis, sigma_hat=-1.0).fit()

    def test_not_fitted(self):
        basis = eigh_symmetric(CHAIN2)
        with pytest.raises(NotFittedError):
            GraphWhitening(basis, 1.0).transform(np.zeros((1, 2)))

    def test_zero_maps_to_zero(self):
        basis = eigh_symmetric(PATH3)
        w = GraphWhitening(basis, 1.0).fit()
        assert_array_equal(w.transform(np.zeros((2, 3))), np.zeros((2, 3)))

    def test_linear(self, rng):
        basis = eigh_symmetric(PATH3)
        w = GraphWhitening(basis, 0.5).fit()
        a = rng.standard_normal((4, 3))
        b = rng.standard_normal((4, 3))
        assert_allclose(
            w.transform(2.0 * a + b),
            2.0 * w.transform(a) + w.transform(b),
            atol=1e-10,
        )

    def test_whitens_model_covariance_monte_carlo(self):
        # whitened samples divided by alpha should have identity covariance
        rng = np.random.default_rng(77)
        alpha, beta = 1.5, 0.75
        basis = eigh_symmetric(PATH3)
        params = ModelParams(alpha=alpha, beta=beta, gso=PATH3)
        means = ClassMeans(np.zeros((2, 3)))
        x, _ = sample_signals(means, params, 100000, rng)
        w = GraphWhitening(basis, sigma_hat=beta / alpha).fit()
        z = w.transform(x) / alpha
        emp = z.T @ z / z.shape[0]
        assert np.max(np.abs(emp - np.eye(3))) <= 0.05

    @pytest.mark.parametrize(
        "family",
        [
            ErdosRenyi(100, 0.184),
            RandomGeometric(100, 0.274),
            StochasticBlockModel((50, 50), 0.35, 0.022),
        ],
        ids=["er", "rgg", "sbm"],
    )
    def test_whitening_identity_analytic(self, family):
        # P Sigma P^T = I exactly (to round-off) when sigma_hat matches
        graph = gen_graph(GraphSpec(family), np.random.default_rng(0))
        basis = eigh_symmetric(graph.adjacency)
        params = ModelParams(alpha=1.0, beta=1.0, gso=graph.adjacency)
        w = GraphWhitening(basis, sigma_hat=1.0).fit()
        proj = w.scale_[:, None] * basis.eigenvectors.T
        white = proj @ true_covariance(params) @ proj.T
        assert np.max(np.abs(white - np.eye(graph.n))) <= 1e-8

    def test_invariant_to_rotation_within_eigenspace(self, rng):
        # two chains stacked give eigenvalues (-1, -1, 1, 1); any rotation
        # inside each eigenspace is an equally valid basis and must yield
        # the same whitened geometry
        s = np.zeros((4, 4))
        s[:2, :2] = CHAIN2
        s[2:, 2:] = CHAIN2
        basis = eigh_symmetric(s)
        theta, phi = 0.3, -1.1
        rot = np.zeros((4, 4))
        rot[:2, :2] = [[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]]
        rot[2:, 2:] = [[np.cos(phi), -np.sin(phi)], [np.sin(phi), np.cos(phi)]]
        rotated = SpectralBasis(
            eigenvalues=basis.eigenvalues, eigenvectors=basis.eigenvectors @ rot
        )
        x = rng.standard_normal((10, 4))
        za = GraphWhitening(basis, 0.8).fit().transform(x)
        zb = GraphWhitening(rotated, 0.8).fit().transform(x)
        da = np.linalg.norm(za[:, None, :] - za[None, :, :], axis=-1)
        db = np.linalg.norm(zb[:, None, :] - zb[None, :, :], axis=-1)
        assert np.max(np.abs(da - db)) <= 1e-8

    def test_dimension_mismatch(self):
        basis = eigh_symmetric(PATH3)
        w = GraphWhitening(basis, 1.0).fit()
        with pytest.raises(DimensionMismatch):
            w.transform(np.zeros((2, 4)))

    def test_clone_keeps_params(self):
        basis = eigh_symmetric(CHAIN2)
        w = clone(GraphWhitening(basis, sigma_hat=0.5))
        assert w.get_params()["sigma_hat"] == 0.5


class TestSampleNormScaler:
    def test_three_four_five(self):
        out = SampleNormScaler().fit().transform(np.array([[3.0, 4.0]]))
        assert_allclose(out, [[0.6, 0.8]])

    def test_zero_row_passes_through(self):
        x = np.array([[0.0, 0.0], [1.0, 1.0]])
        out = SampleNormScaler().transform(x)
        assert_array_equal(out[0], [0.0, 0.0])

    def test_output_norms(self, rng):
        x = rng.standard_normal((20, 5))
        out = SampleNormScaler().transform(x)
        assert_allclose(np.linalg.norm(out, axis=1), np.ones(20), atol=1e-12)


class TestFeatureStdScaler:
    def test_known_stds(self):
        x = np.array([[0.0, 0.0], [2.0, 4.0]])
        scaler = FeatureStdScaler().fit(x)
        assert_allclose(scaler.stds_, [np.sqrt(2.0), np.sqrt(8.0)])

    def test_constant_feature_floor(self):
        x = np.array([[5.0, 1.0], [5.0, 2.0]])
        scaler = FeatureStdScaler().fit(x)
        assert scaler.stds_[0] == 1e-12
        assert np.all(np.isfinite(scaler.transform(x)))

    def test_single_sample_rejected(self):
        with pytest.raises(InsufficientData):
            FeatureStdScaler().fit(np.zeros((1, 3)))

    def test_self_standardization(self, rng):
        x = rng.standard_normal((50, 4)) * np.array([1.0, 10.0, 0.1, 3.0])
        out = FeatureStdScaler().fit(x).transform(x)
        assert_allclose(out.std(axis=0, ddof=1), np.ones(4), atol=1e-10)

    def test_not_fitted(self):
        with pytest.raises(NotFittedError):
            FeatureStdScaler().transform(np.zeros((2, 2)))

    def test_dimension_mismatch(self, rng):
        scaler = FeatureStdScaler().fit(rng.standard_normal((5, 3)))
        with pytest.raises(DimensionMismatch):
            scaler.transform(np.zeros((2, 4)))


class TestSpectralStdScaler:
    def test_identity_basis_matches_feature_std(self, rng):
        # the zero operator has the identity for its eigenbasis, so the
        # spectral scaler degenerates to plain feature standardization
        basis = eigh_symmetric(np.zeros((4, 4)))
        x = rng.standard_normal((30, 4))
        a = SpectralStdScaler(basis).fit(x).transform(x)
        b = FeatureStdScaler().fit(x).transform(x)
        assert_allclose(a, b, atol=1e-12)

    def test_stds_converge_to_model_scale(self):
        # each spectral coefficient has variance alpha^2 lambda^2 + beta^2
        rng = np.random.default_rng(21)
        alpha, beta = 1.5, 0.5
        basis = eigh_symmetric(PATH3)
        params = ModelParams(alpha=alpha, beta=beta, gso=PATH3)
        x, _ = sample_signals(ClassMeans(np.zeros((2, 3))), params, 100000, rng)
        scaler = SpectralStdScaler(basis).fit(x)
        expected = np.sqrt(alpha**2 * basis.eigenvalues**2 + beta**2)
        assert_allclose(scaler.stds_, expected, rtol=0.02)

    def test_single_sample_rejected(self):
        basis = eigh_symmetric(PATH3)
        with pytest.raises(InsufficientData):
            SpectralStdScaler(basis).fit(np.zeros((1, 3)))


class TestEstimateGso:
    def test_scaled_identity(self):
        basis = estimate_gso_from_covariance(4.0 * np.eye(3))
        assert_allclose(basis.eigenvalues, [2.0, 2.0, 2.0], atol=1e-12)

    def test_recovers_eigenvalue_magnitudes(self, rng):
        # covariance S^2 has eigenvalues lambda^2; the square root gives
        # back |lambda| sorted ascending
        m = rng.standard_normal((30, 30))
        s = (m + m.T) / 2.0
        recovered = estimate_gso_from_covariance(s @ s)
        expected = np.sort(np.abs(eigh_symmetric(s).eigenvalues))
        assert np.max(np.abs(recovered.eigenvalues - expected)) <= 1e-8

    def test_diagonalizes_the_covariance(self, rng):
        m = rng.standard_normal((10, 10))
        s = (m + m.T) / 2.0
        cov = s @ s
        basis = estimate_gso_from_covariance(cov)
        diag = basis.eigenvectors.T @ cov @ basis.eigenvectors
        assert_allclose(diag, np.diag(basis.eigenvalues**2), atol=1e-8)

    def test_clamps_negative_eigenvalues(self, rng):
        m = rng.standard_normal((4, 4))
        q = eigh_symmetric((m + m.T) / 2.0).eigenvectors
        cov = q @ np.diag([-1e-12, 1.0, 2.0, 3.0]) @ q.T
        basis = estimate_gso_from_covariance((cov + cov.T) / 2.0)
        assert basis.eigenvalues[0] == 0.0
