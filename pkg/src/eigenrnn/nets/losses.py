"""Mean squared error and label-smoothed cross-entropy."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigurationError, DimensionError
from ..linalg import log_softmax_rows, softmax_rows


def loss_mse(pred, target) -> float:
    pred = np.asarray(pred, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    if pred.shape != target.shape:
        raise DimensionError(f"MSE shapes differ: {pred.shape} vs {target.shape}")
    return float(np.mean((pred - target) ** 2))


def mse_grad(pred, target) -> np.ndarray:
    pred = np.asarray(pred, dtype=np.float64)
    return 2.0 * (pred - np.asarray(target, dtype=np.float64)) / pred.size


def _smoothed_targets(labels, k: int, smooth_eps: float) -> np.ndarray:
    labels = np.asarray(labels)
    if not 0.0 <= smooth_eps < 1.0:
        raise ConfigurationError(f"label smoothing must lie in [0, 1), got {smooth_eps}")
    if labels.ndim != 1:
        raise DimensionError("labels must be a 1-D integer array")
    if labels.size and (labels.min() < 0 or labels.max() >= k):
        raise ConfigurationError(f"labels must lie in [0, {k}), got range [{labels.min()}, {labels.max()}]")
    q = np.full((labels.size, k), smooth_eps / k)
    q[np.arange(labels.size), labels] += 1.0 - smooth_eps
    return q


def loss_ce_smoothed(logits, labels, smooth_eps: float = 0.0) -> float:
    """Cross-entropy of ``softmax(logits)`` against ``(1 - eps) onehot + eps / K``, batch mean."""
    logits = np.asarray(logits, dtype=np.float64)
    q = _smoothed_targets(labels, logits.shape[1], smooth_eps)
    if q.shape[0] != logits.shape[0]:
        raise DimensionError(f"{logits.shape[0]} logit rows for {q.shape[0]} labels")
    return float(-(q * log_softmax_rows(logits)).sum(axis=1).mean())


def ce_grad(logits, labels, smooth_eps: float = 0.0) -> np.ndarray:
    logits = np.asarray(logits, dtype=np.float64)
    q = _smoothed_targets(labels, logits.shape[1], smooth_eps)
    return (softmax_rows(logits) - q) / logits.shape[0]


@dataclass(frozen=True)
class Loss:
    """Loss selector. ``"mse"`` reads every timestep; ``"ce"`` reads only the last."""

    tag: str = "ce"
    smooth: float = 0.0

    def __post_init__(self):
        if self.tag not in ("mse", "ce"):
            raise ConfigurationError(f"unknown loss {self.tag!r}")
        if not 0.0 <= self.smooth < 1.0:
            raise ConfigurationError(f"label smoothing must lie in [0, 1), got {self.smooth}")

    @property
    def readout(self) -> str:
        return "every" if self.tag == "mse" else "last"

    def value_and_grad(self, pred, target) -> tuple[float, np.ndarray]:
        if self.tag == "mse":
            return loss_mse(pred, target), mse_grad(pred, target)
        return loss_ce_smoothed(pred, target, self.smooth), ce_grad(pred, target, self.smooth)
