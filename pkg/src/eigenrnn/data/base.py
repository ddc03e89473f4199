"""Container for variable-length labelled sequences."""

from __future__ import annotations

import csv
import enum
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import ConfigurationError, DimensionError
from ..linalg import Rng


class Task(enum.Enum):
    BINARY_ACCEPT = "binary"
    REGRESSION = "regression"
    TEN_CLASS = "ten_class"

    @property
    def num_classes(self) -> int | None:
        return {Task.BINARY_ACCEPT: 2, Task.TEN_CLASS: 10}.get(self)


@dataclass
class LabeledSequenceSet:
    """Sequences ``inputs[i]`` of shape ``(T_i, d)`` with a target each.

    Classification targets are integer labels; regression targets are
    ``(T_i, k)`` arrays aligned with the input steps.
    """

    inputs: list
    targets: list
    task: Task

    def __post_init__(self):
        if not self.inputs:
            raise ConfigurationError("a sequence set cannot be empty")
        if len(self.inputs) != len(self.targets):
            raise DimensionError(f"{len(self.inputs)} sequences but {len(self.targets)} targets")
        k = self.task.num_classes
        if k is not None:
            labels = np.asarray(self.targets)
            if labels.min() < 0 or labels.max() >= k:
                raise ConfigurationError(f"labels outside [0, {k})")
        dims = {np.shape(x)[1] for x in self.inputs}
        if len(dims) != 1:
            raise DimensionError(f"inconsistent input widths {sorted(dims)}")

    def __len__(self):
        return len(self.inputs)

    @property
    def input_size(self) -> int:
        return np.shape(self.inputs[0])[1]

    @property
    def output_size(self) -> int:
        k = self.task.num_classes
        return k if k is not None else np.shape(self.targets[0])[1]

    @property
    def lengths(self) -> np.ndarray:
        return np.array([len(x) for x in self.inputs])

    @property
    def labels(self) -> np.ndarray:
        return np.asarray(self.targets, dtype=np.int64)

    def subset(self, indices) -> "LabeledSequenceSet":
        idx = [int(i) for i in indices]
        return LabeledSequenceSet([self.inputs[i] for i in idx], [self.targets[i] for i in idx], self.task)

    def batches(self, batch_size: int, rng: Rng | None = None):
        """Yield ``(indices, X, Y)`` with ``X`` shaped ``(T, B, d)``.

        Sequences are bucketed by length so no padding is needed. With an
        ``rng`` both bucket contents and batch order are shuffled; without
        one the order is deterministic (ascending length, then index).
        """
        if batch_size < 1:
            raise ConfigurationError("batch size must be positive")
        buckets = defaultdict(list)
        for i, x in enumerate(self.inputs):
            buckets[len(x)].append(i)
        chunks = []
        for length in sorted(buckets):
            members = np.array(buckets[length])
            if rng is not None:
                members = members[rng.permutation(len(members))]
            for start in range(0, len(members), batch_size):
                chunks.append(members[start:start + batch_size])
        if rng is not None:
            chunks = [chunks[i] for i in rng.permutation(len(chunks))]
        for idx in chunks:
            x = np.stack([self.inputs[i] for i in idx], axis=1)
            if self.task is Task.REGRESSION:
                y = np.stack([self.targets[i] for i in idx], axis=1)
            else:
                y = np.array([self.targets[i] for i in idx], dtype=np.int64)
            yield idx, x, y

    def to_csv(self, path) -> None:
        """Write the ``index,label,len`` inspection table (label blank for regression)."""
        with open(Path(path), "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["index", "label", "len"])
            for i, (x, y) in enumerate(zip(self.inputs, self.targets)):
                label = "" if self.task is Task.REGRESSION else int(y)
                writer.writerow([i, label, len(x)])
