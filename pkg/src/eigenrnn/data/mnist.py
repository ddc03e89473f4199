"""Scanline MNIST from IDX files.

Layout (big-endian): images start with magic ``0x00000803`` and the
dimensions ``count, rows, cols`` as 32-bit integers, then ``count*rows*cols``
unsigned bytes. Labels start with ``0x00000801`` and ``count``, then one
byte per label.
"""

from __future__ import annotations

import gzip
import struct
from pathlib import Path

import numpy as np

from ..errors import FormatError
from .base import LabeledSequenceSet, Task

IMAGE_MAGIC = 0x00000803
LABEL_MAGIC = 0x00000801


def _read_bytes(path) -> bytes:
    path = Path(path)
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "rb") as fh:
        return fh.read()


def parse_idx_images(blob: bytes) -> np.ndarray:
    """``(count, rows, cols)`` uint8 array from an IDX image blob."""
    if len(blob) < 16:
        raise FormatError(f"image header truncated at offset {len(blob)} (need 16 bytes)")
    magic, count, rows, cols = struct.unpack(">IIII", blob[:16])
    if magic != IMAGE_MAGIC:
        raise FormatError(f"bad image magic 0x{magic:08x} at offset 0")
    need = 16 + count * rows * cols
    if len(blob) < need:
        raise FormatError(f"image payload truncated at offset {len(blob)} (expected {need} bytes)")
    if len(blob) > need:
        raise FormatError(f"trailing bytes after offset {need}")
    return np.frombuffer(blob, dtype=np.uint8, offset=16).reshape(count, rows, cols)


def parse_idx_labels(blob: bytes) -> np.ndarray:
    if len(blob) < 8:
        raise FormatError(f"label header truncated at offset {len(blob)} (need 8 bytes)")
    magic, count = struct.unpack(">II", blob[:8])
    if magic != LABEL_MAGIC:
        raise FormatError(f"bad label magic 0x{magic:08x} at offset 0")
    need = 8 + count
    if len(blob) < need:
        raise FormatError(f"label payload truncated at offset {len(blob)} (expected {need} bytes)")
    if len(blob) > need:
        raise FormatError(f"trailing bytes after offset {need}")
    labels = np.frombuffer(blob, dtype=np.uint8, offset=8)
    if labels.size and labels.max() > 9:
        bad = int(np.argmax(labels > 9))
        raise FormatError(f"label {labels[bad]} out of range at offset {8 + bad}")
    return labels


def images_to_idx(images) -> bytes:
    images = np.asarray(images, dtype=np.uint8)
    count, rows, cols = images.shape
    return struct.pack(">IIII", IMAGE_MAGIC, count, rows, cols) + images.tobytes()


def labels_to_idx(labels) -> bytes:
    labels = np.asarray(labels, dtype=np.uint8)
    return struct.pack(">II", LABEL_MAGIC, labels.size) + labels.tobytes()


def load_mnist_idx(images_path, labels_path) -> LabeledSequenceSet:
    """Each image becomes a sequence of its rows, pixels scaled to [0, 1]."""
    images = parse_idx_images(_read_bytes(images_path))
    labels = parse_idx_labels(_read_bytes(labels_path))
    if len(images) != len(labels):
        raise FormatError(
            f"count mismatch: {len(images)} images (offset 4) vs {len(labels)} labels (offset 4)"
        )
    pixels = images.astype(np.float64) / 255.0
    return LabeledSequenceSet(list(pixels), [int(v) for v in labels], Task.TEN_CLASS)


def to_idx(dataset: LabeledSequenceSet) -> tuple[bytes, bytes]:
    """Serialize a scanline set back to IDX image and label blobs."""
    images = np.rint(np.stack(dataset.inputs) * 255.0).astype(np.uint8)
    return images_to_idx(images), labels_to_idx(dataset.labels)
