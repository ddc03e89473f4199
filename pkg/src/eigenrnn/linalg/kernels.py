"""Dense real matrix kernels with shape and finiteness checks.

Matrices are plain 2-D ``float64`` numpy arrays. Each kernel validates its
operands, computes, and rejects non-finite results.
"""

from __future__ import annotations

import numpy as np

from ..errors import DimensionError, NumericError


def as_matrix(x, name: str = "matrix") -> np.ndarray:
    """Coerce ``x`` to a finite 2-D float64 array."""
    m = np.asarray(x, dtype=np.float64)
    if m.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NumericError(f"{name} contains non-finite entries")
    return m


def _checked(out: np.ndarray, op: str) -> np.ndarray:
    if not np.all(np.isfinite(out)):
        raise NumericError(f"{op} produced non-finite entries")
    return out


def matmul(a, b) -> np.ndarray:
    a = as_matrix(a, "left operand")
    b = as_matrix(b, "right operand")
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"matmul: {a.shape} @ {b.shape}")
    return _checked(a @ b, "matmul")


def transpose(a) -> np.ndarray:
    return as_matrix(a).T.copy()


def _same_shape(a, b, op):
    a = as_matrix(a, "left operand")
    b = as_matrix(b, "right operand")
    if a.shape != b.shape:
        raise DimensionError(f"{op}: {a.shape} vs {b.shape}")
    return a, b


def add(a, b) -> np.ndarray:
    a, b = _same_shape(a, b, "add")
    return _checked(a + b, "add")


def mul(a, b) -> np.ndarray:
    """Elementwise (Hadamard) product."""
    a, b = _same_shape(a, b, "mul")
    return _checked(a * b, "mul")


def tanh(a) -> np.ndarray:
    return np.tanh(as_matrix(a))


def relu(a) -> np.ndarray:
    return np.maximum(as_matrix(a), 0.0)


def sigmoid(a):
    """Logistic function, evaluated without overflow for large ``|a|``.

    Accepts arrays of any rank since the recurrent cells call it on gate
    pre-activations directly.
    """
    a = np.asarray(a, dtype=np.float64)
    out = np.empty_like(a)
    pos = a >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-a[pos]))
    e = np.exp(a[~pos])
    out[~pos] = e / (1.0 + e)
    return out


def softmax_rows(a) -> np.ndarray:
    a = as_matrix(a)
    z = a - a.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def log_softmax_rows(a) -> np.ndarray:
    a = as_matrix(a)
    z = a - a.max(axis=1, keepdims=True)
    return z - np.log(np.exp(z).sum(axis=1, keepdims=True))
