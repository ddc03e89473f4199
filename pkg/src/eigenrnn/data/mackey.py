"""Mackey-Glass delay differential equation, integrated with fixed-step RK4."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigurationError, NumericError
from .base import LabeledSequenceSet, Task


@dataclass(frozen=True)
class MackeyGlassParams:
    beta: float = 0.2
    gamma: float = 0.1
    tau: int = 17
    exponent: float = 10.0
    dt: float = 1.0
    x0: float = 1.2


def _rate(x, x_lag, p: MackeyGlassParams) -> float:
    return p.beta * x_lag / (1.0 + x_lag ** p.exponent) - p.gamma * x


def integrate(length: int, params: MackeyGlassParams = MackeyGlassParams(), warmup: int = 0) -> np.ndarray:
    """Raw series ``x(t)`` for ``t = warmup .. warmup + length - 1`` (in steps of ``dt``).

    History before ``t = 0`` is the constant ``x0``. The delayed value at
    the RK4 half step is the mean of its two neighbouring grid values,
    which requires ``tau`` to be a whole number of steps.
    """
    if length < 2:
        raise ConfigurationError("length must be at least 2")
    lag_steps = params.tau / params.dt
    if abs(lag_steps - round(lag_steps)) > 1e-12:
        raise ConfigurationError("tau must be an integer multiple of dt")
    lag = int(round(lag_steps))
    total = warmup + length
    x = np.empty(total + 1)
    x[0] = params.x0
    h = params.dt

    def delayed(i):
        return x[i - lag] if i - lag >= 0 else params.x0

    for i in range(total):
        xl0 = delayed(i)
        xl1 = delayed(i + 1)
        xl_half = 0.5 * (xl0 + xl1)
        k1 = _rate(x[i], xl0, params)
        k2 = _rate(x[i] + 0.5 * h * k1, xl_half, params)
        k3 = _rate(x[i] + 0.5 * h * k2, xl_half, params)
        k4 = _rate(x[i] + h * k3, xl1, params)
        x[i + 1] = x[i] + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.isfinite(x[i + 1]):
            raise NumericError(f"Mackey-Glass integration diverged at step {i + 1}")
    return x[warmup:warmup + length]


def mackey_glass(
    length: int,
    params: MackeyGlassParams = MackeyGlassParams(),
    warmup: int = 500,
    window: int | None = None,
) -> LabeledSequenceSet:
    """One-step-ahead prediction set built from a standardized Mackey-Glass series.

    The series of ``length`` values is standardized to zero mean and unit
    variance; inputs are ``x_0 .. x_{L-2}`` and targets ``x_1 .. x_{L-1}``.
    With ``window`` the pairs are cut into consecutive non-overlapping
    windows of that many steps (a short tail is dropped).
    """
    raw = integrate(length, params, warmup)
    std = raw.std()
    z = (raw - raw.mean()) / (std if std > 0 else 1.0)
    inputs, targets = z[:-1, None], z[1:, None]
    if window is None:
        return LabeledSequenceSet([inputs], [targets], Task.REGRESSION)
    if window < 1:
        raise ConfigurationError("window must be positive")
    count = len(inputs) // window
    if count == 0:
        raise ConfigurationError(f"series of {length} values is shorter than one window of {window}")
    xs = [inputs[k * window:(k + 1) * window] for k in range(count)]
    ys = [targets[k * window:(k + 1) * window] for k in range(count)]
    return LabeledSequenceSet(xs, ys, Task.REGRESSION)
