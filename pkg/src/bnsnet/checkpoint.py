"""Flat binary container for named float64 parameter arrays.

Layout (all integers little-endian):

    magic      4 bytes  b"BNSW"
    version    uint32
    mlen       uint64   length of the UTF-8 JSON manifest
    manifest   mlen bytes
    count      uint32   number of arrays
    per array:
        nlen   uint16   name length
        name   nlen bytes, UTF-8
        ndim   uint8
        dims   ndim * uint32
        data   prod(dims) * float64, little-endian, row-major

Round-trips are bit-exact: the float64 payload is written byte-for-byte.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

MAGIC = b"BNSW"
FORMAT_VERSION = 1


class CheckpointError(ValueError):
    """Raised for malformed or truncated checkpoint files."""


def save_checkpoint(path, arrays: dict[str, np.ndarray], manifest: dict) -> None:
    mbytes = json.dumps(manifest, sort_keys=True).encode("utf-8")
    chunks = [MAGIC, struct.pack("<I", FORMAT_VERSION),
              struct.pack("<Q", len(mbytes)), mbytes,
              struct.pack("<I", len(arrays))]
    for name, arr in arrays.items():
        a = np.ascontiguousarray(arr, dtype="<f8")
        nbytes = name.encode("utf-8")
        chunks.append(struct.pack("<H", len(nbytes)))
        chunks.append(nbytes)
        chunks.append(struct.pack("<B", a.ndim))
        chunks.append(struct.pack(f"<{a.ndim}I", *a.shape))
        chunks.append(a.tobytes())
    tmp = Path(str(path) + ".tmp")
    tmp.write_bytes(b"".join(chunks))
    tmp.replace(path)


def load_checkpoint(path) -> tuple[dict[str, np.ndarray], dict]:
    buf = Path(path).read_bytes()
    if buf[:4] != MAGIC:
        raise CheckpointError(f"{path}: not a checkpoint file (bad magic)")
    (version,) = struct.unpack_from("<I", buf, 4)
    if version != FORMAT_VERSION:
        raise CheckpointError(f"{path}: unsupported checkpoint version {version}")
    off = 8
    (mlen,) = struct.unpack_from("<Q", buf, off)
    off += 8
    manifest = json.loads(buf[off:off + mlen].decode("utf-8"))
    off += mlen
    (count,) = struct.unpack_from("<I", buf, off)
    off += 4
    arrays: dict[str, np.ndarray] = {}
    for _ in range(count):
        (nlen,) = struct.unpack_from("<H", buf, off)
        off += 2
        name = buf[off:off + nlen].decode("utf-8")
        off += nlen
        (ndim,) = struct.unpack_from("<B", buf, off)
        off += 1
        dims = struct.unpack_from(f"<{ndim}I", buf, off)
        off += 4 * ndim
        n = int(np.prod(dims)) if ndim else 1
        end = off + 8 * n
        if end > len(buf):
            raise CheckpointError(f"{path}: truncated data for array '{name}'")
        arrays[name] = np.frombuffer(buf[off:end], dtype="<f8").reshape(dims).copy()
        off = end
    return arrays, manifest
