"""Feature transforms: spectral whitening and the standardization baselines.

The headline transform is :class:`GraphWhitening`: project signals onto
the shift operator's eigenbasis and divide coefficient i by
sqrt(lambda_i^2 + sigma_hat^2).  When sigma_hat matches the true white/
colored noise ratio beta/alpha this decorrelates the noise exactly (up to
the global alpha factor, which distance-based classifiers ignore).  The
remaining transforms are the baselines it is benchmarked against.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .exceptions import InsufficientData, InvalidConfig, SingularWhitening
from .spectral import SpectralBasis, eigh_symmetric, gft
from .validation import as_samples, check_symmetric

# Relative threshold below which an eigenvalue counts as numerically zero
# when deciding whether a zero-noise whitening would divide by zero.
_EIG_ZERO_RTOL = 1e-12


def _check_fitted(estimator, attribute: str) -> None:
    if not hasattr(estimator, attribute):
        raise NotFittedError(
            f"{type(estimator).__name__} is not fitted; call fit first"
        )


class GraphWhitening(TransformerMixin, BaseEstimator):
    """Whiten signals in the eigenbasis of a shift operator.

    Parameters
    ----------
    basis : SpectralBasis
        Eigenbasis of the shift operator.
    sigma_hat : float
        Assumed ratio of white to colored noise level.  Zero is allowed
        only when the operator has no (numerically) zero eigenvalue.

    After ``fit`` the attribute ``scale_`` holds the per-coefficient
    factors (lambda_i^2 + sigma_hat^2)^{-1/2}.
    """

    def __init__(self, basis: SpectralBasis, sigma_hat: float = 1.0):
        self.basis = basis
        self.sigma_hat = sigma_hat

    def fit(self, X=None, y=None):
        sigma_hat = float(self.sigma_hat)
        if not np.isfinite(sigma_hat) or sigma_hat < 0.0:
            raise InvalidConfig(f"sigma_hat must be finite and >= 0, got {self.sigma_hat}")
        lam = self.basis.eigenvalues
        if sigma_hat == 0.0:
            tol = _EIG_ZERO_RTOL * max(1.0, float(np.max(np.abs(lam))))
            if np.any(np.abs(lam) <= tol):
                raise SingularWhitening(
                    "sigma_hat = 0 with a zero eigenvalue leaves a direction unscaled"
                )
        self.scale_ = 1.0 / np.sqrt(lam**2 + sigma_hat**2)
        return self

    def transform(self, X) -> np.ndarray:
        _check_fitted(self, "scale_")
        x = as_samples(X, dim=self.basis.dim)
        return (x @ self.basis.eigenvectors) * self.scale_


class SampleNormScaler(TransformerMixin, BaseEstimator):
    """Scale each row to unit Euclidean norm; zero rows pass through."""

    def fit(self, X=None, y=None):
        return self

    def transform(self, X) -> np.ndarray:
        x = as_samples(X)
        norms = np.linalg.norm(x, axis=1, keepdims=True)
        return x / np.where(norms == 0.0, 1.0, norms)


class FeatureStdScaler(TransformerMixin, BaseEstimator):
    """Divide each feature by its training standard deviation (ddof=1).

    Constant features get a floor of 1e-12 instead of dividing by zero.
    """

    def fit(self, X, y=None):
        x = as_samples(X)
        if x.shape[0] < 2:
            raise InsufficientData(
                f"need at least 2 samples to estimate stds, got {x.shape[0]}"
            )
        self.stds_ = np.maximum(x.std(axis=0, ddof=1), 1e-12)
        return self

    def transform(self, X) -> np.ndarray:
        _check_fitted(self, "stds_")
        x = as_samples(X, dim=self.stds_.shape[0])
        return x / self.stds_


class SpectralStdScaler(TransformerMixin, BaseEstimator):
    """Project onto the eigenbasis, then standardize each coefficient.

    A data-driven stand-in for whitening: instead of the model scale
    (lambda_i^2 + sigma_hat^2)^{1/2} it divides by the empirical std of
    each spectral coefficient on the training set.
    """

    def __init__(self, basis: SpectralBasis):
        self.basis = basis

    def fit(self, X, y=None):
        x = as_samples(X, dim=self.basis.dim)
        if x.shape[0] < 2:
            raise InsufficientData(
                f"need at least 2 samples to estimate stds, got {x.shape[0]}"
            )
        self.stds_ = np.maximum(gft(self.basis, x).std(axis=0, ddof=1), 1e-12)
        return self

    def transform(self, X) -> np.ndarray:
        _check_fitted(self, "stds_")
        x = as_samples(X, dim=self.basis.dim)
        return gft(self.basis, x) / self.stds_


def estimate_gso_from_covariance(covariance) -> SpectralBasis:
    """Recover a shift-operator eigenbasis from a noise covariance matrix.

    If the covariance is S^2 (colored noise only), its eigenvectors are
    those of S and its eigenvalues are lambda^2, so taking square roots
    recovers the eigenvalue magnitudes.  Estimation noise can push small
    eigenvalues slightly negative; they are clamped to zero before the
    root.  The result is re-sorted ascending.
    """
    cov = check_symmetric(covariance, name="covariance")
    basis = eigh_symmetric(cov)
    lam = np.sqrt(np.clip(basis.eigenvalues, 0.0, None))
    order = np.argsort(lam, kind="stable")
    return SpectralBasis(
        eigenvalues=lam[order], eigenvectors=basis.eigenvectors[:, order]
    )
