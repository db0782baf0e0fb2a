"""Eigendecomposition of symmetric operators and the graph Fourier pair.

A symmetric shift operator S factors as S = U diag(w) U^T with orthonormal
U.  The analysis transform projects signals onto the eigenbasis (x -> U^T x)
and the synthesis transform inverts it.  Everything downstream (whitening,
spectral standardization) is phrased in terms of the :class:`SpectralBasis`
produced here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import ConvergenceFailure, DimensionMismatch, NonFinite
from .validation import as_float_array, check_symmetric

# Components smaller than this are treated as zero when fixing eigenvector
# signs; below it the sign of a component is numerical noise.
_SIGN_EPS = 1e-12


@dataclass(frozen=True, eq=False)
class SpectralBasis:
    """Orthonormal eigenbasis of a symmetric operator.

    ``eigenvalues`` are sorted ascending and ``eigenvectors[:, i]`` is the
    unit eigenvector paired with ``eigenvalues[i]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        w = as_float_array(self.eigenvalues, name="eigenvalues")
        u = as_float_array(self.eigenvectors, name="eigenvectors")
        if w.ndim != 1:
            raise DimensionMismatch(f"eigenvalues must be 1-D, got shape {w.shape}")
        if u.ndim != 2 or u.shape != (w.shape[0], w.shape[0]):
            raise DimensionMismatch(
                f"eigenvectors must be ({w.shape[0]}, {w.shape[0]}), got {u.shape}"
            )
        if np.any(np.diff(w) < 0):
            raise ValueError("eigenvalues must be sorted ascending")
        object.__setattr__(self, "eigenvalues", w)
        object.__setattr__(self, "eigenvectors", u)

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def __repr__(self) -> str:  # full arrays are noise in reprs
        return f"SpectralBasis(dim={self.dim})"


def _fix_gauge(vectors: np.ndarray) -> np.ndarray:
    """Flip eigenvector signs so the first significant component is positive.

    Eigenvectors are only defined up to sign; pinning the gauge makes the
    decomposition reproducible bit-for-bit across calls.
    """
    significant = np.abs(vectors) > _SIGN_EPS
    first = significant.argmax(axis=0)
    lead = vectors[first, np.arange(vectors.shape[1])]
    signs = np.where(significant.any(axis=0), np.sign(lead), 1.0)
    signs = np.where(signs == 0.0, 1.0, signs)
    return vectors * signs


def eigh_symmetric(m) -> SpectralBasis:
    """Full eigendecomposition of a symmetric matrix.

    Input asymmetry beyond the relative tolerance is rejected; smaller
    asymmetry is averaged away before factoring.  Eigenvalues come back
    ascending with a deterministic sign convention on the eigenvectors.
    """
    sym = check_symmetric(m, name="operator")
    try:
        w, u = np.linalg.eigh(sym)
    except np.linalg.LinAlgError as err:
        raise ConvergenceFailure(f"eigendecomposition failed: {err}") from err
    if not (np.all(np.isfinite(w)) and np.all(np.isfinite(u))):
        raise ConvergenceFailure("eigendecomposition produced non-finite output")
    return SpectralBasis(eigenvalues=w, eigenvectors=_fix_gauge(u))


def _check_signal(basis: SpectralBasis, x, *, name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise NonFinite(f"{name} contains NaN or infinite entries")
    if arr.ndim not in (1, 2) or arr.shape[-1] != basis.dim:
        raise DimensionMismatch(
            f"{name} must have last dimension {basis.dim}, got shape {arr.shape}"
        )
    return arr


def gft(basis: SpectralBasis, x) -> np.ndarray:
    """Analysis transform: project signal(s) onto the eigenbasis.

    Accepts a single signal of shape (d,) or a stack of row signals (n, d);
    the output has the same shape.  Orthonormality of the basis makes this
    an isometry.
    """
    arr = _check_signal(basis, x, name="x")
    return arr @ basis.eigenvectors


def igft(basis: SpectralBasis, xhat) -> np.ndarray:
    """Synthesis transform: reconstruct signal(s) from spectral coefficients."""
    arr = _check_signal(basis, xhat, name="xhat")
    return arr @ basis.eigenvectors.T
