"""Classifiers: nearest class mean, shrinkage LDA, softmax regression,
and the whitened-NCM pipeline that is optimal under the two-noise model.

For Gaussian classes sharing one covariance, the Bayes rule is linear:
score_c(x) = w_c . x + w_c0 with w_c = Sigma^{-1} mu_c and
w_c0 = -mu_c . w_c / 2.  :func:`lda_oracle` builds that rule from known
moments; :class:`ShrinkageLda` estimates it from data; :class:`GraphLda`
realizes it as whitening followed by nearest class mean, which is the
same rule expressed in the whitened coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, clone
from sklearn.exceptions import NotFittedError

from .exceptions import (
    DimensionMismatch,
    EmptyClass,
    InsufficientData,
    NonFinite,
    SingularCovariance,
)
from .preprocess import GraphWhitening
from .synth import ClassMeans
from .validation import as_labels, as_samples, check_symmetric


def _check_fitted(estimator, attribute: str) -> None:
    if not hasattr(estimator, attribute):
        raise NotFittedError(
            f"{type(estimator).__name__} is not fitted; call fit first"
        )


def _validate_xy(X, y) -> tuple[np.ndarray, np.ndarray]:
    x = as_samples(X)
    labels = as_labels(y, n_samples=x.shape[0])
    if x.shape[0] == 0:
        raise EmptyClass("no training samples")
    return x, labels


class NearestClassMean(ClassifierMixin, BaseEstimator):
    """Assign each query to the class with the closest training centroid.

    Ties in squared distance break toward the lowest class id.
    """

    def fit(self, X, y):
        x, labels = _validate_xy(X, y)
        self.classes_, idx = np.unique(labels, return_inverse=True)
        centroids = np.zeros((self.classes_.size, x.shape[1]))
        for c in range(self.classes_.size):
            centroids[c] = x[idx == c].mean(axis=0)
        self.centroids_ = centroids
        return self

    def predict(self, X) -> np.ndarray:
        _check_fitted(self, "centroids_")
        x = as_samples(X, dim=self.centroids_.shape[1])
        diff = x[:, None, :] - self.centroids_[None, :, :]
        sq_dist = (diff**2).sum(axis=-1)
        return self.classes_[np.argmin(sq_dist, axis=1)]


def oas_covariance(centered, n_samples: int | None = None) -> np.ndarray:
    """Shrink an empirical covariance toward a scaled identity.

    ``centered`` holds rows that already have zero mean (globally, or per
    class for a pooled within-class estimate).  The shrinkage weight is
    the oracle-approximating rule of Chen et al. (2010):

        num = (1 - 2/d) tr(E^2) + tr(E)^2
        den = (n + 1 - 2/d) (tr(E^2) - tr(E)^2 / d)
        delta = clip(num / den, 0, 1),   delta = 1 when den <= 0,

    applied to E = Z^T Z / n and the target F = (tr(E)/d) I.  ``n_samples``
    defaults to the row count of ``centered``.
    """
    z = as_samples(centered, name="centered")
    n = z.shape[0] if n_samples is None else int(n_samples)
    if n < 2:
        raise InsufficientData(f"need at least 2 samples for shrinkage, got {n}")
    d = z.shape[1]
    emp = z.T @ z / n
    tr = float(np.trace(emp))
    tr_sq = float((emp * emp).sum())
    num = (1.0 - 2.0 / d) * tr_sq + tr**2
    den = (n + 1.0 - 2.0 / d) * (tr_sq - tr**2 / d)
    delta = 1.0 if den <= 0.0 else float(np.clip(num / den, 0.0, 1.0))
    target = (tr / d) * np.eye(d)
    return delta * target + (1.0 - delta) * emp


def lda_discriminants(means, covariance) -> tuple[np.ndarray, np.ndarray]:
    """Linear scores of the equal-covariance Gaussian Bayes rule.

    Returns per-class weights Sigma^{-1} mu_c (rows) and intercepts
    -mu_c . w_c / 2, solved directly against the covariance.
    """
    m = as_samples(means, name="means")
    sigma = check_symmetric(covariance, name="covariance")
    if sigma.shape[0] != m.shape[1]:
        raise DimensionMismatch(
            f"covariance is {sigma.shape}, means have dim {m.shape[1]}"
        )
    try:
        weights = np.linalg.solve(sigma, m.T).T
    except np.linalg.LinAlgError as err:
        raise SingularCovariance(f"covariance solve failed: {err}") from err
    intercepts = -0.5 * np.einsum("cd,cd->c", m, weights)
    return weights, intercepts


@dataclass(frozen=True, eq=False)
class LinearDiscriminants:
    """A fixed linear rule: predict argmax of X w_c + w_c0 over classes."""

    weights: np.ndarray
    intercepts: np.ndarray
    classes: np.ndarray = field(default=None)

    def __post_init__(self):
        w = as_samples(self.weights, name="weights")
        b = np.asarray(self.intercepts, dtype=float)
        if b.shape != (w.shape[0],):
            raise DimensionMismatch(
                f"intercepts must have shape ({w.shape[0]},), got {b.shape}"
            )
        classes = (
            np.arange(w.shape[0])
            if self.classes is None
            else np.asarray(self.classes)
        )
        if classes.shape != (w.shape[0],):
            raise DimensionMismatch(
                f"classes must have shape ({w.shape[0]},), got {classes.shape}"
            )
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "intercepts", b)
        object.__setattr__(self, "classes", classes)

    def scores(self, X) -> np.ndarray:
        x = as_samples(X, dim=self.weights.shape[1])
        return x @ self.weights.T + self.intercepts

    def predict(self, X) -> np.ndarray:
        return self.classes[np.argmax(self.scores(X), axis=1)]


def lda_oracle(means, covariance) -> LinearDiscriminants:
    """Bayes-optimal linear rule from known class means and covariance."""
    m = means.means if isinstance(means, ClassMeans) else means
    weights, intercepts = lda_discriminants(m, covariance)
    return LinearDiscriminants(weights=weights, intercepts=intercepts)


class ShrinkageLda(ClassifierMixin, BaseEstimator):
    """LDA with a pooled within-class covariance, shrunk before solving.

    Each class needs at least 2 samples so the pooled centering leaves
    something to estimate from.
    """

    def fit(self, X, y):
        x, labels = _validate_xy(X, y)
        self.classes_, idx = np.unique(labels, return_inverse=True)
        counts = np.bincount(idx)
        if counts.min() < 2:
            lacking = self.classes_[int(np.argmin(counts))]
            raise InsufficientData(
                f"class {lacking} has {int(counts.min())} samples; need >= 2"
            )
        means = np.zeros((self.classes_.size, x.shape[1]))
        for c in range(self.classes_.size):
            means[c] = x[idx == c].mean(axis=0)
        centered = x - means[idx]
        covariance = oas_covariance(centered, n_samples=x.shape[0])
        self.means_ = means
        self.covariance_ = covariance
        self.coef_, self.intercept_ = lda_discriminants(means, covariance)
        return self

    def predict(self, X) -> np.ndarray:
        _check_fitted(self, "coef_")
        x = as_samples(X, dim=self.coef_.shape[1])
        scores = x @ self.coef_.T + self.intercept_
        return self.classes_[np.argmax(scores, axis=1)]


class SoftmaxRegression(ClassifierMixin, BaseEstimator):
    """Multinomial logistic regression by full-batch gradient descent.

    Minimizes mean cross-entropy plus (l2_strength / 2) ||W||^2 (biases
    unpenalized) with backtracking line search from a deterministic zero
    initialization, stopping when the gradient max-norm drops to ``tol``
    or after ``max_iter`` iterations.  ``loss_curve_`` records the loss at
    the start of each iteration and is non-increasing.
    """

    def __init__(self, l2_strength: float = 1.0, tol: float = 1e-4, max_iter: int = 1000):
        self.l2_strength = l2_strength
        self.tol = tol
        self.max_iter = max_iter

    def fit(self, X, y):
        x, labels = _validate_xy(X, y)
        if self.l2_strength < 0:
            raise ValueError(f"l2_strength must be >= 0, got {self.l2_strength}")
        self.classes_, idx = np.unique(labels, return_inverse=True)
        n, d = x.shape
        c = self.classes_.size
        onehot = np.zeros((n, c))
        onehot[np.arange(n), idx] = 1.0

        def loss_of(w, b):
            z = x @ w.T + b
            zmax = z.max(axis=1, keepdims=True)
            lse = zmax[:, 0] + np.log(np.exp(z - zmax).sum(axis=1))
            data = float(np.mean(lse - z[np.arange(n), idx]))
            return data + 0.5 * self.l2_strength * float((w * w).sum())

        def loss_grad(w, b):
            z = x @ w.T + b
            zmax = z.max(axis=1, keepdims=True)
            ez = np.exp(z - zmax)
            sez = ez.sum(axis=1, keepdims=True)
            lse = zmax[:, 0] + np.log(sez[:, 0])
            data = float(np.mean(lse - z[np.arange(n), idx]))
            loss = data + 0.5 * self.l2_strength * float((w * w).sum())
            resid = (ez / sez - onehot) / n
            grad_w = resid.T @ x + self.l2_strength * w
            grad_b = resid.sum(axis=0)
            return loss, grad_w, grad_b

        weights = np.zeros((c, d))
        biases = np.zeros(c)
        step = 1.0
        losses = []
        for _ in range(self.max_iter):
            loss, grad_w, grad_b = loss_grad(weights, biases)
            if not np.isfinite(loss):
                raise NonFinite("loss diverged during optimization")
            losses.append(loss)
            grad_max = max(
                float(np.abs(grad_w).max()), float(np.abs(grad_b).max())
            )
            if grad_max <= self.tol:
                break
            grad_sq = float((grad_w**2).sum() + (grad_b**2).sum())
            t = step
            accepted = False
            while t >= 1e-20:
                trial_w = weights - t * grad_w
                trial_b = biases - t * grad_b
                if loss_of(trial_w, trial_b) <= loss - 1e-4 * t * grad_sq:
                    accepted = True
                    break
                t *= 0.5
            if not accepted:
                break  # step underflow: no further decrease possible
            weights, biases = trial_w, trial_b
            step = 2.0 * t
        self.coef_ = weights
        self.intercept_ = biases
        self.loss_curve_ = np.asarray(losses)
        self.n_iter_ = len(losses)
        return self

    def decision_function(self, X) -> np.ndarray:
        _check_fitted(self, "coef_")
        x = as_samples(X, dim=self.coef_.shape[1])
        return x @ self.coef_.T + self.intercept_

    def predict(self, X) -> np.ndarray:
        return self.classes_[np.argmax(self.decision_function(X), axis=1)]


class GraphLda(ClassifierMixin, BaseEstimator):
    """Whiten in the shift operator's eigenbasis, then nearest class mean.

    With the true noise ratio as ``sigma_hat`` this is the Bayes rule of
    the two-noise model; the whitening turns the shared covariance into a
    multiple of the identity, where the centroid rule is optimal.
    """

    def __init__(self, whitening: GraphWhitening):
        self.whitening = whitening

    def fit(self, X, y):
        self.whitening_ = clone(self.whitening).fit(X, y)
        self.ncm_ = NearestClassMean().fit(self.whitening_.transform(X), y)
        self.classes_ = self.ncm_.classes_
        return self

    def predict(self, X) -> np.ndarray:
        _check_fitted(self, "ncm_")
        return self.ncm_.predict(self.whitening_.transform(X))
