"""Mini-batch BPTT training with Adam."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import ConfigurationError, NumericError
from ..linalg import Rng
from .adam import AdamConfig, AdamState, adam_step
from .cells import CellParams, backward_from_outputs, forward
from .losses import Loss


def readout_targets(outputs: np.ndarray, loss: Loss) -> np.ndarray:
    """The readouts a loss is evaluated on: all steps for MSE, the last for CE."""
    return outputs if loss.readout == "every" else outputs[-1]


def backward(params: CellParams, sequence, targets, loss: Loss, h0=None, scale: float = 1.0):
    """Loss value and exact gradients of ``scale * loss`` for every parameter array.

    Returns ``(value, grads, record)``; ``value`` is the unscaled loss and
    ``record`` the forward trajectory.
    """
    record = forward(params, sequence, h0)
    value, d_read = loss.value_and_grad(readout_targets(record.outputs, loss), targets)
    if loss.readout == "every":
        d_outputs = d_read
    else:
        d_outputs = np.zeros_like(record.outputs)
        d_outputs[-1] = d_read
    grads = backward_from_outputs(params, record, scale * d_outputs)
    return value, grads, record


@dataclass(frozen=True)
class TrainConfig:
    adam: AdamConfig = AdamConfig()
    epochs: int = 10
    batch_size: int = 32
    loss: Loss = Loss("ce")
    seed: int = 0
    snapshot_epochs: tuple | None = None

    def __post_init__(self):
        if self.epochs < 0:
            raise ConfigurationError("epochs must be non-negative")
        if self.batch_size < 1:
            raise ConfigurationError("batch size must be positive")

    def snapshots(self) -> list[int]:
        if self.snapshot_epochs is not None:
            return sorted({e for e in self.snapshot_epochs if 0 <= e <= self.epochs})
        return sorted({0, self.epochs // 2, self.epochs})


@dataclass
class EpochRecord:
    epoch: int
    loss: float
    accuracy: float = math.nan
    eval_loss: float = math.nan
    eval_accuracy: float = math.nan


@dataclass
class ExperimentReport:
    config: TrainConfig
    curve: list = field(default_factory=list)
    snapshots: list = field(default_factory=list)
    params: CellParams | None = None
    diverged: str | None = None

    @property
    def losses(self) -> np.ndarray:
        return np.array([r.loss for r in self.curve])

    @property
    def accuracies(self) -> np.ndarray:
        return np.array([r.accuracy for r in self.curve])

    @property
    def eval_accuracies(self) -> np.ndarray:
        return np.array([r.eval_accuracy for r in self.curve])

    def write_curve(self, path, evaluation: bool = False) -> None:
        """``epoch,loss,accuracy`` rows (training, or held-out with ``evaluation``)."""
        with open(Path(path), "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["epoch", "loss", "accuracy"])
            for r in self.curve:
                if evaluation:
                    writer.writerow([r.epoch, repr(float(r.eval_loss)), repr(float(r.eval_accuracy))])
                else:
                    writer.writerow([r.epoch, repr(float(r.loss)), repr(float(r.accuracy))])

    def write_spectra(self, path) -> None:
        from ..analysis.spectra import write_spectrum_csv

        write_spectrum_csv(self.snapshots, path)


class TrainingDiverged(NumericError):
    """A numeric failure during training; ``report`` holds the epochs completed."""

    def __init__(self, message: str, report: ExperimentReport):
        super().__init__(message)
        self.report = report


def _accuracy_count(outputs, targets, loss: Loss) -> int:
    if loss.tag != "ce":
        return 0
    return int(np.sum(np.argmax(outputs[-1], axis=1) == targets))


def evaluate(params: CellParams, dataset, loss: Loss, batch_size: int = 256) -> tuple[float, float]:
    """Mean loss and accuracy (``nan`` for regression) over a whole set."""
    total, correct, seen = 0.0, 0, 0
    for _, x, y in dataset.batches(batch_size):
        record = forward(params, x)
        value, _ = loss.value_and_grad(readout_targets(record.outputs, loss), y)
        b = x.shape[1]
        total += value * b
        correct += _accuracy_count(record.outputs, y, loss)
        seen += b
    acc = correct / seen if loss.tag == "ce" else math.nan
    return total / seen, acc


def train(model: CellParams, dataset, config: TrainConfig, eval_set=None, rng: Rng | None = None) -> ExperimentReport:
    """Train a copy of ``model``; the input parameters are left untouched.

    Each epoch shuffles length buckets with ``rng`` (default: a stream
    derived from ``config.seed``), takes one Adam step per mini-batch, and
    records the batch-size-weighted mean training loss and the running
    accuracy of the pre-update predictions. Spectrum snapshots are taken at
    ``config.snapshots()`` epochs; epoch 0 is the initialization.
    """
    from ..analysis.spectra import recurrent_spectrum

    params = model.copy()
    rng = rng or Rng(config.seed).spawn(1)
    report = ExperimentReport(config=config, params=params)
    wanted = set(config.snapshots())
    if 0 in wanted:
        report.snapshots.append(recurrent_spectrum(params, 0))
    state = AdamState()
    arrays = params.arrays()
    for epoch in range(1, config.epochs + 1):
        total, correct, seen = 0.0, 0, 0
        for step, (_, x, y) in enumerate(dataset.batches(config.batch_size, rng)):
            try:
                value, grads, record = backward(params, x, y, config.loss)
                if not math.isfinite(value):
                    raise NumericError("non-finite loss")
                adam_step(arrays, grads, state, config.adam)
                if not all(np.all(np.isfinite(a)) for a in arrays.values()):
                    raise NumericError("non-finite parameters after update")
            except NumericError as exc:
                report.diverged = f"epoch {epoch}, step {step}: {exc}"
                raise TrainingDiverged(report.diverged, report) from exc
            b = x.shape[1]
            total += value * b
            correct += _accuracy_count(record.outputs, y, config.loss)
            seen += b
        rec = EpochRecord(epoch, total / seen)
        if config.loss.tag == "ce":
            rec.accuracy = correct / seen
        if eval_set is not None:
            rec.eval_loss, rec.eval_accuracy = evaluate(params, eval_set, config.loss)
        report.curve.append(rec)
        if epoch in wanted:
            report.snapshots.append(recurrent_spectrum(params, epoch))
    return report
