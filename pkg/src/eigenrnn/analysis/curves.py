"""Averaging learning curves over seeds."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import ConfigurationError, DimensionError


@dataclass
class CurveBundle:
    """Equal-length per-seed series."""

    series: list

    def __post_init__(self):
        if not self.series:
            raise ConfigurationError("a curve bundle needs at least one seed")
        lengths = {len(s) for s in self.series}
        if len(lengths) != 1:
            raise DimensionError(f"ragged curves: lengths {sorted(lengths)}")

    def as_array(self) -> np.ndarray:
        return np.array([np.asarray(s, dtype=np.float64) for s in self.series])


def average_curves(bundle: CurveBundle) -> tuple[np.ndarray, np.ndarray]:
    """Positionwise mean and population standard deviation across seeds."""
    data = bundle.as_array()
    return data.mean(axis=0), data.std(axis=0)


def write_average_csv(mean_loss, std_loss, mean_acc, std_acc, path) -> None:
    with open(Path(path), "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["epoch", "loss_mean", "loss_std", "accuracy_mean", "accuracy_std"])
        for e, row in enumerate(zip(mean_loss, std_loss, mean_acc, std_acc), start=1):
            writer.writerow([e, *(repr(float(v)) for v in row)])


def non_increasing_windows(series, window: int = 10, tol: float = 0.0) -> bool:
    """True when ``series[t + window] <= series[t] + tol`` for every ``t``."""
    s = np.asarray(series, dtype=np.float64)
    if len(s) <= window:
        return bool(s[-1] <= s[0] + tol) if len(s) else True
    return bool(np.all(s[window:] <= s[:-window] + tol))
