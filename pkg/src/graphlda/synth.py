"""Synthetic signal model and few-shot episode assembly.

Signals from class c follow

    x = mu_c + alpha * S n1 + beta * n0,

with n0, n1 independent standard normal vectors: white noise at level
``beta`` plus noise colored by one pass through the shift operator at
level ``alpha``.  The class covariance is therefore
alpha^2 S^2 + beta^2 I regardless of the class, which is what makes a
single shared whitening transform optimal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionMismatch, InvalidConfig
from .validation import as_float_array, as_labels, as_samples, check_symmetric


@dataclass(frozen=True, eq=False)
class ModelParams:
    """Noise levels and shift operator of the generative model.

    ``alpha`` scales the graph-colored noise, ``beta`` the white noise.
    Both may be zero (degenerate, noiseless samples equal the means).
    """

    alpha: float
    beta: float
    gso: np.ndarray

    def __post_init__(self):
        for name, val in (("alpha", self.alpha), ("beta", self.beta)):
            v = float(val)
            if not np.isfinite(v) or v < 0.0:
                raise InvalidConfig(f"{name} must be finite and >= 0, got {val}")
            object.__setattr__(self, name, v)
        object.__setattr__(self, "gso", check_symmetric(self.gso, name="gso"))

    @property
    def dim(self) -> int:
        return self.gso.shape[0]

    def __repr__(self) -> str:
        return f"ModelParams(alpha={self.alpha}, beta={self.beta}, dim={self.dim})"


@dataclass(eq=False)
class ClassMeans:
    """Stack of per-class mean signals, one row per class."""

    means: np.ndarray

    def __post_init__(self):
        m = as_samples(self.means, name="means")
        if m.shape[0] < 2:
            raise InvalidConfig(f"need at least 2 classes, got {m.shape[0]}")
        self.means = m

    @property
    def n_classes(self) -> int:
        return self.means.shape[0]

    @property
    def dim(self) -> int:
        return self.means.shape[1]


@dataclass(eq=False)
class Episode:
    """One few-shot problem: balanced support and query sets."""

    train_x: np.ndarray
    train_y: np.ndarray
    query_x: np.ndarray
    query_y: np.ndarray

    def __post_init__(self):
        self.train_x = as_samples(self.train_x, name="train_x")
        self.query_x = as_samples(self.query_x, dim=self.train_x.shape[1], name="query_x")
        self.train_y = as_labels(self.train_y, n_samples=self.train_x.shape[0])
        self.query_y = as_labels(self.query_y, n_samples=self.query_x.shape[0])


def sample_class_means(
    dim: int,
    n_classes: int,
    *,
    antipodal: bool,
    rng: np.random.Generator,
) -> ClassMeans:
    """Draw class means with i.i.d. uniform [-1, 1] coordinates.

    With ``antipodal=True`` (two classes only) the second mean is the exact
    negation of the first, placing the classes symmetrically about the
    origin.
    """
    if dim < 1:
        raise InvalidConfig(f"dim must be >= 1, got {dim}")
    if n_classes < 2:
        raise InvalidConfig(f"n_classes must be >= 2, got {n_classes}")
    if antipodal:
        if n_classes != 2:
            raise InvalidConfig("antipodal means require exactly 2 classes")
        first = rng.uniform(-1.0, 1.0, size=dim)
        return ClassMeans(np.stack([first, -first]))
    return ClassMeans(rng.uniform(-1.0, 1.0, size=(n_classes, dim)))


def sample_signals(
    means: ClassMeans,
    params: ModelParams,
    n_per_class: int,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    """Draw a balanced labeled sample, ``n_per_class`` rows per class.

    Rows come back grouped by class in label order.  The two noise draws
    are consumed per class block so identical seeds yield identical data.
    """
    if n_per_class < 1:
        raise InvalidConfig(f"n_per_class must be >= 1, got {n_per_class}")
    if means.dim != params.dim:
        raise DimensionMismatch(
            f"means have dim {means.dim}, operator has dim {params.dim}"
        )
    blocks = []
    for c in range(means.n_classes):
        colored = rng.standard_normal((n_per_class, params.dim))
        white = rng.standard_normal((n_per_class, params.dim))
        blocks.append(
            means.means[c]
            + params.alpha * (colored @ params.gso)
            + params.beta * white
        )
    x = np.concatenate(blocks, axis=0)
    y = np.repeat(np.arange(means.n_classes), n_per_class)
    return x, y


def true_covariance(params: ModelParams) -> np.ndarray:
    """Population covariance alpha^2 S^2 + beta^2 I of the noise model."""
    s = params.gso
    return params.alpha**2 * (s @ s) + params.beta**2 * np.eye(params.dim)


def make_episode(
    means: ClassMeans,
    params: ModelParams,
    k_shot: int,
    q_query: int,
    rng: np.random.Generator,
) -> Episode:
    """Draw one episode: support then query from the same model and stream."""
    if k_shot < 1:
        raise InvalidConfig(f"k_shot must be >= 1, got {k_shot}")
    if q_query < 1:
        raise InvalidConfig(f"q_query must be >= 1, got {q_query}")
    train_x, train_y = sample_signals(means, params, k_shot, rng)
    query_x, query_y = sample_signals(means, params, q_query, rng)
    return Episode(train_x=train_x, train_y=train_y, query_x=query_x, query_y=query_y)
