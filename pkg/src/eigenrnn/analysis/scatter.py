"""Hidden-state clouds projected onto their first two principal components."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import ConfigurationError
from ..linalg import Rng, pca_project
from ..nets.cells import CellParams, forward

DEFAULT_SAMPLE_CAP = 10_000


@dataclass
class HiddenScatter:
    points: np.ndarray  # (N, 2)
    labels: np.ndarray  # (N,) label of the sequence each state came from (-1 for regression)
    variances: np.ndarray  # (2,)
    states: np.ndarray  # (N, n) raw hidden states

    @property
    def mean_radius(self) -> float:
        """Mean Euclidean distance of the raw states from the origin."""
        return float(np.linalg.norm(self.states, axis=1).mean())

    @property
    def total_variance(self) -> float:
        centered = self.states - self.states.mean(axis=0)
        return float((centered ** 2).sum(axis=1).mean())

    def to_csv(self, path) -> None:
        with open(Path(path), "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["pc1", "pc2", "label"])
            for (a, b), label in zip(self.points, self.labels):
                writer.writerow([repr(float(a)), repr(float(b)), int(label)])


def collect_hidden_states(params: CellParams, dataset, sample_cap: int = DEFAULT_SAMPLE_CAP, seed: int = 0):
    """Every per-step hidden state of up to ``sample_cap`` sequences.

    When the set is larger than the cap, a seed-determined subset of
    sequences is used. For LSTMs this is ``h``, not the cell state.
    """
    if len(dataset) == 0:
        raise ConfigurationError("cannot scatter an empty dataset")
    if len(dataset) > sample_cap:
        chosen = np.sort(Rng(seed).permutation(len(dataset))[:sample_cap])
        dataset = dataset.subset(chosen)
    states, labels = [], []
    classify = dataset.task.num_classes is not None
    for idx, x, _ in dataset.batches(256):
        record = forward(params, x)
        steps, batch, n = record.hidden.shape
        # (B, T, n) so rows stay grouped by sequence
        states.append(record.hidden.transpose(1, 0, 2).reshape(-1, n))
        seq_labels = [dataset.targets[i] if classify else -1 for i in idx]
        labels.append(np.repeat(seq_labels, steps))
    return np.concatenate(states), np.concatenate(labels).astype(np.int64)


def hidden_scatter(params: CellParams, dataset, sample_cap: int = DEFAULT_SAMPLE_CAP, seed: int = 0) -> HiddenScatter:
    states, labels = collect_hidden_states(params, dataset, sample_cap, seed)
    if len(states) < 2:
        points, variances = np.zeros((len(states), 2)), np.zeros(2)
    else:
        points, variances = pca_project(states, min(2, states.shape[1]))
        if points.shape[1] < 2:
            points = np.pad(points, ((0, 0), (0, 2 - points.shape[1])))
            variances = np.pad(variances, (0, 2 - len(variances)))
    return HiddenScatter(points, labels, variances, states)
