"""Desk-scale datasets: Tomita strings, Mackey-Glass series, scanline MNIST."""

from .base import LabeledSequenceSet, Task
from .mackey import MackeyGlassParams, integrate, mackey_glass
from .mnist import load_mnist_idx, parse_idx_images, parse_idx_labels, to_idx
from .tomita import decode, encode, tomita_dataset, tomita_membership

__all__ = [
    "LabeledSequenceSet",
    "MackeyGlassParams",
    "Task",
    "decode",
    "encode",
    "integrate",
    "load_mnist_idx",
    "mackey_glass",
    "parse_idx_images",
    "parse_idx_labels",
    "to_idx",
    "tomita_dataset",
    "tomita_membership",
]
