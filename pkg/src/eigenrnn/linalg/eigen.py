"""Spectra of dense real non-symmetric matrices."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConvergenceError, DecompositionError, DimensionError
from . import _core
from .kernels import as_matrix

RESIDUAL_TOL = 1e-8
PAIR_TOL = 1e-9


@dataclass(frozen=True)
class EigenSpectrum:
    """Eigenvalues of a square matrix, sorted by modulus, largest first.

    Ties in modulus are broken by real part, then imaginary part, both
    descending, so a conjugate pair always lists ``+im`` before ``-im``.
    """

    values: np.ndarray
    source_dim: int

    def __post_init__(self):
        if len(self.values) != self.source_dim:
            raise DimensionError(
                f"spectrum has {len(self.values)} values for dimension {self.source_dim}"
            )

    def __len__(self):
        return self.source_dim

    def __iter__(self):
        return iter(self.values)

    @property
    def moduli(self) -> np.ndarray:
        return np.abs(self.values)

    @property
    def radius(self) -> float:
        return float(self.moduli[0]) if self.source_dim else 0.0


def _sorted(values: np.ndarray) -> np.ndarray:
    order = np.lexsort((-values.imag, -values.real, -np.abs(values)))
    return values[order]


def eigenvalues(m, check: bool = True) -> EigenSpectrum:
    """All eigenvalues of a square real matrix.

    The matrix is balanced, reduced to Hessenberg form, and iterated to real
    Schur form with Francis double-shift QR. With ``check`` set, the largest,
    median and smallest eigenvalues are confirmed by inverse iteration: each
    must admit a unit vector ``v`` with ``|m v - lam v| <= 1e-8 (1 + |m|_F)``.

    Raises
    ------
    DimensionError
        If ``m`` is not square.
    ConvergenceError
        If QR needs more than ``30 n`` sweeps, or a sampled residual fails.
    """
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"eigenvalues need a square matrix, got {a.shape}")
    n = a.shape[0]
    if n == 0:
        return EigenSpectrum(np.zeros(0, dtype=complex), 0)
    if n == 1:
        return EigenSpectrum(np.array([complex(a[0, 0])]), 1)

    h = np.array(a, dtype=np.float64, order="C", copy=True)
    _core.balance(h)
    _core.hessenberg(h)
    wr = np.zeros(n)
    wi = np.zeros(n)
    sweeps = _core.hessenberg_qr(h, wr, wi)
    if sweeps < 0:
        raise ConvergenceError(
            f"QR iteration exceeded {_core.SWEEPS_PER_DIM * n} sweeps for n={n}"
        )
    spectrum = EigenSpectrum(_sorted(wr + 1j * wi), n)

    if check:
        for idx in sorted({0, n // 2, n - 1}):
            lam = spectrum.values[idx]
            res = eigenpair_residual(a, lam)
            if res > RESIDUAL_TOL * (1.0 + np.linalg.norm(a)):
                raise ConvergenceError(
                    f"eigenvalue {lam:.6g} failed the residual check ({res:.3g})"
                )
    return spectrum


def _shift(a: np.ndarray) -> float:
    # keeps (A - lam I) nonsingular without moving the residual above tolerance
    return 1e-13 * (1.0 + np.linalg.norm(a))


def _start_block(n: int, k: int) -> np.ndarray:
    # fixed, generic start vectors so inverse iteration is deterministic
    i = np.arange(1, n + 1)[:, None]
    j = np.arange(1, k + 1)[None, :]
    return np.cos(0.7 * i * j + 0.3 * i) + 1j * np.sin(1.3 * i + 0.5 * j * j)


def inverse_iteration(a, lam: complex, k: int = 1, steps: int = 3) -> np.ndarray:
    """Orthonormal basis (n x k, complex) approximating the eigenspace of ``lam``.

    Solves ``(A - mu I) X = B`` repeatedly from a fixed start block, with
    ``mu`` a tiny perturbation of ``lam``, orthonormalizing between steps.
    For a repeated eigenvalue pass its multiplicity as ``k``.
    """
    a = as_matrix(a)
    n = a.shape[0]
    shifted = a.astype(complex) - (lam + _shift(a)) * np.eye(n)
    x = _start_block(n, k)
    for _ in range(steps):
        try:
            x = np.linalg.solve(shifted, x)
        except np.linalg.LinAlgError:
            # exactly singular: nudge the shift further
            shifted -= _shift(a) * np.eye(n)
            x = np.linalg.solve(shifted, x)
        x, _ = np.linalg.qr(x)
    return x


def eigenpair_residual(a, lam: complex) -> float:
    """``min |A v - lam v|`` over the unit vector found by inverse iteration."""
    a = as_matrix(a)
    v = inverse_iteration(a, lam)[:, 0]
    return float(np.linalg.norm(a @ v - lam * v))


def eigenbasis(a, spectrum: EigenSpectrum | None = None, max_cond: float = 1e8):
    """Eigenvalues and a matching eigenvector matrix ``U`` with ``A U = U diag(lam)``.

    Eigenvalues within ``1e-8 (1 + |A|_F)`` of each other are treated as one
    cluster and their eigenspace is computed as a block. Raises
    ``DecompositionError`` when the basis is ill-conditioned (condition
    number above ``max_cond``) or a column fails its residual check, i.e.
    the matrix is defective or nearly so.
    """
    a = as_matrix(a)
    if spectrum is None:
        spectrum = eigenvalues(a)
    lams = np.asarray(spectrum.values)
    n = len(lams)
    scale = 1.0 + np.linalg.norm(a)
    tol = RESIDUAL_TOL * scale
    u = np.zeros((n, n), dtype=complex)
    done = np.zeros(n, dtype=bool)
    for i in range(n):
        if done[i]:
            continue
        members = np.flatnonzero(~done & (np.abs(lams - lams[i]) <= tol))
        center = lams[members].mean()
        block = inverse_iteration(a, center, k=len(members))
        for col, idx in enumerate(members):
            u[:, idx] = block[:, col]
            done[idx] = True
    residual = np.abs(a @ u - u * lams[None, :]).max(initial=0.0)
    if residual > tol:
        raise DecompositionError(f"eigenvector residual {residual:.3g}; matrix looks defective")
    cond = np.linalg.cond(u)
    if not np.isfinite(cond) or cond > max_cond:
        raise DecompositionError(f"eigenvector matrix condition {cond:.3g} exceeds {max_cond:.0e}")
    return lams, u


def unique_moduli(spectrum: EigenSpectrum, tol: float = PAIR_TOL) -> list[float]:
    """Moduli, largest first, counting each conjugate pair once.

    Two values form a pair when one is the conjugate of the other within
    ``tol`` and they have non-zero imaginary parts. Real eigenvalues each
    contribute an entry.
    """
    values = list(spectrum.values)
    used = [False] * len(values)
    out = []
    for i, z in enumerate(values):
        if used[i]:
            continue
        used[i] = True
        out.append(abs(z))
        if abs(z.imag) <= tol:
            continue
        for j in range(i + 1, len(values)):
            if not used[j] and abs(values[j] - np.conj(z)) <= tol:
                used[j] = True
                break
    return sorted(out, reverse=True)
