"""Binary checkpoints of ``CellParams``.

Layout, all integers little-endian::

    magic   8 bytes  b"ERNNCKPT"
    version u32      (FORMAT_VERSION)
    kind    u16 length + UTF-8 cell kind
    epoch   u32
    count   u32      number of blocks
    directory, per block:
        name  u16 length + UTF-8
        ndim  u8, then ndim x u32 dims
        offset u64   byte offset of the block's data from the start of the file
    data    float64 little-endian blocks in directory order
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from ..errors import FormatError
from ..nets import CellParams

MAGIC = b"ERNNCKPT"
FORMAT_VERSION = 1


def _pack_str(s: str) -> bytes:
    raw = s.encode("utf-8")
    return struct.pack("<H", len(raw)) + raw


def dumps(params: CellParams, epoch: int = 0) -> bytes:
    arrays = params.arrays()
    head = MAGIC + struct.pack("<I", FORMAT_VERSION) + _pack_str(params.kind.value)
    head += struct.pack("<II", epoch, len(arrays))
    entries = []
    for name, arr in arrays.items():
        entries.append(_pack_str(name) + struct.pack("<B", arr.ndim) + struct.pack(f"<{arr.ndim}I", *arr.shape))
    dir_size = sum(len(e) + 8 for e in entries)
    offset = len(head) + dir_size
    directory = b""
    blobs = []
    for entry, arr in zip(entries, arrays.values()):
        directory += entry + struct.pack("<Q", offset)
        blob = np.ascontiguousarray(arr, dtype="<f8").tobytes()
        blobs.append(blob)
        offset += len(blob)
    return head + directory + b"".join(blobs)


class _Reader:
    def __init__(self, blob: bytes):
        self.blob = blob
        self.pos = 0

    def take(self, fmt: str):
        size = struct.calcsize(fmt)
        if self.pos + size > len(self.blob):
            raise FormatError(f"checkpoint truncated at offset {self.pos}")
        vals = struct.unpack_from(fmt, self.blob, self.pos)
        self.pos += size
        return vals

    def string(self) -> str:
        (length,) = self.take("<H")
        if self.pos + length > len(self.blob):
            raise FormatError(f"checkpoint truncated at offset {self.pos}")
        raw = self.blob[self.pos:self.pos + length]
        self.pos += length
        return raw.decode("utf-8")


def loads(blob: bytes) -> tuple[CellParams, int]:
    if blob[:8] != MAGIC:
        raise FormatError("not a checkpoint: bad magic at offset 0")
    r = _Reader(blob)
    r.pos = 8
    (version,) = r.take("<I")
    if version != FORMAT_VERSION:
        raise FormatError(f"checkpoint version {version} is not supported (expected {FORMAT_VERSION})")
    kind = r.string()
    epoch, count = r.take("<II")
    arrays = {}
    for _ in range(count):
        name = r.string()
        (ndim,) = r.take("<B")
        shape = r.take(f"<{ndim}I")
        (offset,) = r.take("<Q")
        size = int(np.prod(shape)) * 8
        if offset + size > len(blob):
            raise FormatError(f"block {name!r} runs past the end of the file (offset {offset})")
        arrays[name] = np.frombuffer(blob, dtype="<f8", count=size // 8, offset=offset).reshape(shape).astype(np.float64)
    return CellParams.from_arrays(kind, arrays), epoch


def save(params: CellParams, path, epoch: int = 0) -> None:
    Path(path).write_bytes(dumps(params, epoch))


def load(path) -> tuple[CellParams, int]:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"checkpoint {path} does not exist")
    return loads(path.read_bytes())
