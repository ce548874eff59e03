"""TEN1 binary tensor files.

Layout, all little-endian and unpadded:

    bytes 0..3    magic "TEN1"
    bytes 4..7    element code, uint32 (1 = float64, 2 = uint8 indicator)
    bytes 8..11   order, uint32 (>= 1)
    bytes 12..    order x uint64 extents
    then          payload, elements in mode-1-fastest order
                  (float64 for code 1; single 0/1 bytes for code 2)

Masks are stored as element code 2 and read back as :class:`SamplingMask`.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .completion import SamplingMask
from .core import as_tensor
from .errors import FormatError

MAGIC = b"TEN1"
ELEM_DOUBLE = 1
ELEM_MASK = 2

_HEAD = struct.Struct("<II")


def write_tensor(t, path):
    """Serialize a tensor (float64 payload) or :class:`SamplingMask`
    (indicator-byte payload) to ``path``.

    The encoding is canonical: the same value always produces the same bytes.
    """
    if isinstance(t, SamplingMask):
        code = ELEM_MASK
        arr = t.indicator
        payload = arr.astype(np.uint8).tobytes(order="F")
    else:
        code = ELEM_DOUBLE
        arr = as_tensor(t, min_order=1)
        payload = arr.astype("<f8").tobytes(order="F")
    header = MAGIC + _HEAD.pack(code, arr.ndim)
    header += struct.pack(f"<{arr.ndim}Q", *arr.shape)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload)


def read_tensor(path):
    """Deserialize a TEN1 file into a float64 tensor or a SamplingMask.

    Malformed files raise :class:`FormatError` naming the failing byte offset.
    """
    data = Path(path).read_bytes()
    if len(data) < 4 or data[:4] != MAGIC:
        raise FormatError(f"{path}: bad magic at byte 0")
    if len(data) < 12:
        raise FormatError(f"{path}: truncated header at byte {len(data)}")
    code, order = _HEAD.unpack_from(data, 4)
    if code not in (ELEM_DOUBLE, ELEM_MASK):
        raise FormatError(f"{path}: unknown element code {code} at byte 4")
    if order < 1:
        raise FormatError(f"{path}: order must be >= 1 at byte 8")
    dims_end = 12 + 8 * order
    if len(data) < dims_end:
        raise FormatError(f"{path}: truncated dims at byte {len(data)}")
    dims = struct.unpack_from(f"<{order}Q", data, 12)
    if any(d < 1 for d in dims):
        raise FormatError(f"{path}: zero extent in dims at byte 12")
    count = 1
    for d in dims:
        count *= d
    elem_size = 8 if code == ELEM_DOUBLE else 1
    expected = dims_end + count * elem_size
    if len(data) != expected:
        raise FormatError(
            f"{path}: payload is {len(data) - dims_end} bytes at byte "
            f"{dims_end}, expected {count * elem_size}"
        )
    if code == ELEM_DOUBLE:
        flat = np.frombuffer(data, dtype="<f8", count=count, offset=dims_end)
        bad = np.nonzero(~np.isfinite(flat))[0]
        if bad.size:
            raise FormatError(
                f"{path}: non-finite element at byte {dims_end + 8 * int(bad[0])}"
            )
        return flat.reshape(dims, order="F").astype(np.float64)
    flat = np.frombuffer(data, dtype=np.uint8, count=count, offset=dims_end)
    bad = np.nonzero(flat > 1)[0]
    if bad.size:
        raise FormatError(
            f"{path}: mask byte {flat[bad[0]]} at byte {dims_end + int(bad[0])}"
        )
    try:
        return SamplingMask(flat.reshape(dims, order="F"))
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from exc
