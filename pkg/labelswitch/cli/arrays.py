"""
Array Files
===========

Binary layout (little-endian throughout)::

    6 bytes   magic "LSARR1"
    1 byte    dtype: 0x01 float64, 0x02 int64
    1 byte    ndim (1-3)
    8*ndim    dims, unsigned 64-bit
    payload   row-major values, 8 bytes each

Files ending in ``.csv`` use the text fallback: a ``# dims: a,b,c`` header
line followed by comma-separated values in row-major order.
"""

import struct
from pathlib import Path
from typing import Optional, Union

import numpy as np

from ..utils.errors import ArrayFormatError

MAGIC = b"LSARR1"
FLOAT64 = 0x01
INT64 = 0x02
DTYPES = {FLOAT64: np.dtype("<f8"), INT64: np.dtype("<i8")}
MAX_ELEMENTS = (2 ** 63 - 1) // 8

PathLike = Union[str, Path]


def _kind_name(code: int) -> str:
    return "float" if code == FLOAT64 else "integer"


def _check_expected(code: int, expect: Optional[str], path: PathLike) -> None:
    if expect is None:
        return
    wanted = FLOAT64 if expect == "float" else INT64
    if code != wanted:
        raise ArrayFormatError(f"{path}: expected {_kind_name(wanted)} array, found {_kind_name(code)} data")


def _check_finite(array: np.ndarray, path: PathLike) -> None:
    if array.dtype.kind == "f" and not np.isfinite(array).all():
        index = tuple(int(i) for i in np.argwhere(~np.isfinite(array))[0])
        one_based = tuple(i + 1 for i in index)
        raise ArrayFormatError(f"{path}: non-finite value {array[index]!r} at index {one_based}")


def encode_array(array) -> bytes:
    """Serialize an integer or float array with 1 to 3 dimensions."""
    array = np.asarray(array)
    if array.dtype.kind in "biu":
        code = INT64
    elif array.dtype.kind == "f":
        code = FLOAT64
    else:
        raise ArrayFormatError(f"cannot store arrays of dtype {array.dtype}")
    if not 1 <= array.ndim <= 3:
        raise ArrayFormatError(f"arrays must have 1 to 3 dimensions, got {array.ndim}")
    header = MAGIC + struct.pack("<BB", code, array.ndim) + struct.pack(f"<{array.ndim}Q", *array.shape)
    return header + np.ascontiguousarray(array, dtype=DTYPES[code]).tobytes()


def decode_array(data: bytes, path: PathLike = "<bytes>", expect: Optional[str] = None) -> np.ndarray:
    if len(data) < 8:
        raise ArrayFormatError(f"{path}: truncated header")
    if data[:6] != MAGIC:
        raise ArrayFormatError(f"{path}: bad magic {data[:6]!r}")
    code, ndim = struct.unpack("<BB", data[6:8])
    if code not in DTYPES:
        raise ArrayFormatError(f"{path}: unknown dtype code {code:#04x}")
    if not 1 <= ndim <= 3:
        raise ArrayFormatError(f"{path}: ndim must be 1 to 3, got {ndim}")
    if len(data) < 8 + 8 * ndim:
        raise ArrayFormatError(f"{path}: truncated header")
    dims = struct.unpack(f"<{ndim}Q", data[8:8 + 8 * ndim])

    count = 1
    for dim in dims:
        count *= dim
        if count > MAX_ELEMENTS:
            raise ArrayFormatError(f"{path}: dim overflow, dims {dims} exceed the addressable size")
    payload = data[8 + 8 * ndim:]
    if len(payload) < 8 * count:
        raise ArrayFormatError(f"{path}: truncated payload, expected {8 * count} bytes, found {len(payload)}")
    if len(payload) > 8 * count:
        raise ArrayFormatError(f"{path}: {len(payload) - 8 * count} trailing bytes after payload")

    _check_expected(code, expect, path)
    array = np.frombuffer(payload, dtype=DTYPES[code]).reshape(dims)
    array = array.astype(array.dtype.newbyteorder("="))
    _check_finite(array, path)
    return array


def _parse_csv(text: str, path: PathLike, expect: Optional[str]) -> np.ndarray:
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if not lines or not lines[0].startswith("#"):
        raise ArrayFormatError(f"{path}: missing '# dims:' header")
    header = lines[0].lstrip("#").strip()
    if not header.lower().startswith("dims:"):
        raise ArrayFormatError(f"{path}: missing '# dims:' header")
    try:
        dims = tuple(int(v) for v in header[5:].split(",") if v.strip())
    except ValueError:
        raise ArrayFormatError(f"{path}: malformed dims header '{lines[0]}'") from None
    if not 1 <= len(dims) <= 3 or min(dims) < 0:
        raise ArrayFormatError(f"{path}: dims must be 1 to 3 non-negative integers, got {dims}")

    tokens = [tok.strip() for line in lines[1:] if not line.startswith("#") for tok in line.split(",") if tok.strip()]
    expected = int(np.prod(dims))
    if len(tokens) != expected:
        raise ArrayFormatError(f"{path}: dims {dims} need {expected} values, found {len(tokens)}")

    integral = all(tok.lstrip("+-").isdigit() for tok in tokens)
    if expect == "int" and not integral:
        raise ArrayFormatError(f"{path}: expected integer array, found float data")
    try:
        if integral and expect != "float":
            array = np.array([int(tok) for tok in tokens], dtype=np.int64)
        else:
            array = np.array([float(tok) for tok in tokens], dtype=np.float64)
    except ValueError as e:
        raise ArrayFormatError(f"{path}: {e}") from None
    array = array.reshape(dims)
    _check_finite(array, path)
    return array


def read_array(path: PathLike, expect: Optional[str] = None) -> np.ndarray:
    """
    Read a binary or CSV array file.

    Args:
        path: File path
        expect: "float", "int" or None to accept either

    Raises:
        ArrayFormatError: Bad magic, truncated payload, dim overflow, trailing
            bytes, dtype mismatch or a non-finite value (reported with its
            1-based index)
    """
    path = Path(path)
    data = path.read_bytes()
    if path.suffix.lower() == ".csv" or (data[:1] == b"#" and not data.startswith(MAGIC)):
        return _parse_csv(data.decode("utf-8"), path, expect)
    return decode_array(data, path, expect)


def write_array(array, path: PathLike) -> Path:
    """Write an array; ``.csv`` paths get the text format with 17 significant digits."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    array = np.asarray(array)
    if path.suffix.lower() == ".csv":
        if array.dtype.kind == "f":
            values = [f"{v:.17g}" for v in array.ravel()]
        else:
            values = [str(int(v)) for v in array.ravel()]
        dims = ",".join(str(d) for d in array.shape)
        path.write_text(f"# dims: {dims}\n" + ",".join(values) + "\n", encoding="utf-8")
    else:
        path.write_bytes(encode_array(array))
    return path
