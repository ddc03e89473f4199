"""Principal component projection through the covariance eigenproblem."""

from __future__ import annotations

import numpy as np

from ..errors import ConvergenceError, DimensionError
from . import _core
from .kernels import as_matrix


def symmetric_eigen(c, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and orthonormal eigenvectors of a symmetric matrix.

    Uses cyclic Jacobi rotations; eigenvector ``i`` is column ``i``.
    """
    c = as_matrix(c)
    if c.shape[0] != c.shape[1]:
        raise DimensionError(f"expected a square matrix, got {c.shape}")
    a = np.array(0.5 * (c + c.T), order="C")
    v = np.empty_like(a)
    if _core.jacobi_eigh(a, v, max_sweeps) < 0:
        raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")
    w = np.diag(a).copy()
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def pca_project(points, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Project mean-centered samples onto the top-``k`` principal axes.

    Parameters
    ----------
    points : (samples, dims) array
    k : int
        Number of components to keep, at most ``dims``.

    Returns
    -------
    projected : (samples, k) array
    variances : (k,) array
        Covariance eigenvalues of the kept axes, non-increasing. The
        covariance uses the ``1 / samples`` normalization.

    Each axis is signed so that its largest-magnitude loading is positive,
    making the output independent of the eigensolver's sign choice.
    """
    x = as_matrix(points, "points")
    samples, dims = x.shape
    if k > dims or k < 1:
        raise DimensionError(f"k={k} must lie in [1, {dims}]")
    if samples < 2:
        raise DimensionError("PCA needs at least two samples")
    centered = x - x.mean(axis=0)
    cov = centered.T @ centered / samples
    w, v = symmetric_eigen(cov)
    w = np.clip(w[:k], 0.0, None)
    axes = v[:, :k]
    flip = np.sign(axes[np.abs(axes).argmax(axis=0), np.arange(k)])
    flip[flip == 0] = 1.0
    axes = axes * flip
    return centered @ axes, w
