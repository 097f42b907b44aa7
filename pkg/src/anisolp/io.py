"""MNF1 field files.

Layout (little endian, no padding)::

    b"MNF1"                 magic
    u32                     ndim
    ndim x u64              samples per axis
    ndim x f64              period per axis
    prod(samples) x (f64 re, f64 im)   values, axis 1 varying fastest
"""

from __future__ import annotations

import os
import struct
import tempfile
from pathlib import Path

import numpy as np

from .grid import GridError, GridSpec, SampledField

__all__ = [
    "FieldFileError",
    "BadMagicError",
    "TruncatedError",
    "DimensionOverflowError",
    "MAGIC",
    "encode_field",
    "decode_field",
    "write_field",
    "read_field",
    "atomic_write_bytes",
]

MAGIC = b"MNF1"
# generous but finite: refuses headers that would need > 2**40 samples
MAX_SAMPLES = 1 << 40
MAX_NDIM = 64


class FieldFileError(Exception):
    code = "field-file-error"


class BadMagicError(FieldFileError):
    code = "bad-magic"


class TruncatedError(FieldFileError):
    code = "truncated"


class DimensionOverflowError(FieldFileError):
    code = "dimension-overflow"


def encode_field(field: SampledField) -> bytes:
    spec = field.spec
    if not np.all(np.isfinite(field.values)):
        raise GridError("refusing to write non-finite values")
    header = MAGIC + struct.pack(
        f"<I{spec.ndim}Q{spec.ndim}d", spec.ndim, *spec.samples, *spec.periods
    )
    payload = np.asarray(field.values, dtype="<c16").ravel(order="F").tobytes()
    return header + payload


def decode_field(data: bytes) -> SampledField:
    if len(data) < 8:
        if not data.startswith(MAGIC[: len(data)]):
            raise BadMagicError("bad magic")
        raise TruncatedError(f"header truncated: {len(data)} bytes")
    if data[:4] != MAGIC:
        raise BadMagicError(f"bad magic {data[:4]!r}, expected {MAGIC!r}")
    (ndim,) = struct.unpack_from("<I", data, 4)
    if ndim == 0 or ndim > MAX_NDIM:
        raise DimensionOverflowError(f"ndim {ndim} out of range")
    head = 8 + 16 * ndim
    if len(data) < head:
        raise TruncatedError("header truncated")
    dims = struct.unpack_from(f"<{ndim}Q", data, 8)
    periods = struct.unpack_from(f"<{ndim}d", data, 8 + 8 * ndim)
    total = 1
    for d in dims:
        total *= d
        if total > MAX_SAMPLES:
            raise DimensionOverflowError(f"dimensions {dims} overflow the sample limit")
    need = head + 16 * total
    if len(data) < need:
        raise TruncatedError(f"payload truncated: have {len(data)} bytes, need {need}")
    if len(data) > need:
        raise FieldFileError(f"{len(data) - need} trailing bytes after payload")
    values = np.frombuffer(data, dtype="<c16", count=total, offset=head)
    values = values.reshape(dims, order="F")
    try:
        spec = GridSpec(dims, periods)
    except GridError as exc:
        raise FieldFileError(f"invalid grid in header: {exc}") from exc
    return SampledField(spec, values)


def atomic_write_bytes(path: str | os.PathLike, data: bytes) -> None:
    """Write via a temporary file in the target directory, then rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def write_field(field: SampledField, path: str | os.PathLike) -> None:
    atomic_write_bytes(path, encode_field(field))


def read_field(path: str | os.PathLike) -> SampledField:
    return decode_field(Path(path).read_bytes())
