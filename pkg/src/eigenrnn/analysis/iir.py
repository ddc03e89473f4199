"""Eigen-domain view of a linear state-space recurrence.

For ``h_t = W_h h_{t-1} + W_x x_t`` with ``h_0 = 0`` and ``W_h = U diag(lam) U^-1``,
the coordinates ``alpha_t = U^-1 h_t`` evolve independently as first-order
IIR filters ``alpha_t = lam * alpha_{t-1} + a_t`` driven by
``a_t = U^-1 W_x x_t``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DimensionError, NumericError
from ..linalg import eigenbasis
from ..linalg.kernels import as_matrix

IMAG_TOL = 1e-8


@dataclass
class IirDecomposition:
    """Per-eigenvector filter coefficients and the reassembled trajectory."""

    eigenvalues: np.ndarray  # (n,)
    basis: np.ndarray  # (n, n) complex, column i is u_i
    drive: np.ndarray  # (T, B, n) complex a_t
    modes: np.ndarray  # (T, B, n) complex alpha_t
    hidden: np.ndarray  # (T, B, n) real h_t


def _inputs(inputs, d: int) -> np.ndarray:
    x = np.asarray(inputs, dtype=np.float64)
    if x.ndim == 2:
        x = x[:, None, :]
    if x.ndim != 3 or x.shape[2] != d:
        raise DimensionError(f"inputs must be (T, B, {d}) or (T, {d}), got {np.shape(inputs)}")
    return x


def iir_decompose(w_h, w_x, inputs, steps: int | None = None) -> IirDecomposition:
    """Run the recurrence as ``n`` decoupled complex filters and reassemble ``h_t``.

    Raises ``DecompositionError`` if ``w_h`` has no well-conditioned
    eigenbasis, and ``NumericError`` if the reassembled states keep an
    imaginary part above ``1e-8 (1 + max |h|)``.
    """
    w_h = as_matrix(w_h, "W_h")
    w_x = as_matrix(w_x, "W_x")
    n = w_h.shape[0]
    if w_h.shape != (n, n) or w_x.shape[0] != n:
        raise DimensionError(f"W_h {w_h.shape} and W_x {w_x.shape} do not conform")
    x = _inputs(inputs, w_x.shape[1])
    if steps is not None:
        x = x[:steps]
    lams, u = eigenbasis(w_h)
    drive = np.linalg.solve(u, (x @ w_x.T).reshape(-1, n).T).T.reshape(x.shape[0], x.shape[1], n)
    modes = np.empty_like(drive)
    alpha = np.zeros(drive.shape[1:], dtype=complex)
    for t in range(drive.shape[0]):
        alpha = lams * alpha + drive[t]
        modes[t] = alpha
    full = modes @ u.T
    scale = 1.0 + np.abs(full.real).max(initial=0.0)
    residue = np.abs(full.imag).max(initial=0.0)
    if residue > IMAG_TOL * scale:
        raise NumericError(f"reassembled states keep an imaginary part of {residue:.3g}")
    return IirDecomposition(lams, u, drive, modes, full.real.copy())


def iir_reconstruct(w_h, w_x, inputs, steps: int | None = None) -> np.ndarray:
    """Hidden trajectory ``(T, B, n)`` (or ``(T, n)`` for 2-D inputs) via the eigen filters."""
    squeeze = np.ndim(inputs) == 2
    h = iir_decompose(w_h, w_x, inputs, steps).hidden
    return h[:, 0, :] if squeeze else h


def direct_recurrence(w_h, w_x, inputs, steps: int | None = None) -> np.ndarray:
    """Reference ``h_t = W_h h_{t-1} + W_x x_t`` from ``h_0 = 0``, same shapes as ``iir_reconstruct``."""
    w_h = as_matrix(w_h, "W_h")
    w_x = as_matrix(w_x, "W_x")
    squeeze = np.ndim(inputs) == 2
    x = _inputs(inputs, w_x.shape[1])
    if steps is not None:
        x = x[:steps]
    h = np.zeros((x.shape[1], w_h.shape[0]))
    out = np.empty((x.shape[0], x.shape[1], w_h.shape[0]))
    for t in range(x.shape[0]):
        h = h @ w_h.T + x[t] @ w_x.T
        out[t] = h
    return out[:, 0, :] if squeeze else out


def decay_bound(w_h, h_start, steps: int) -> float:
    """Upper bound on ``|W_h^steps h_start|`` from the spectrum: ``rho^steps * cond(U) * |h_start|``."""
    lams, u = eigenbasis(as_matrix(w_h, "W_h"))
    rho = np.abs(lams).max()
    return float(rho ** steps * np.linalg.cond(u) * np.linalg.norm(h_start))
