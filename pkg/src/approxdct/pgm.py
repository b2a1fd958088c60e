"""Binary PGM (P5) reading and writing for 8-bit single-plane images."""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np

__all__ = ["PGMError", "read_pgm", "write_pgm"]


class PGMError(ValueError):
    pass


_TOKEN = re.compile(rb"\s*(?:#[^\n]*\n\s*)*(\S+)")


def _header_tokens(data: bytes, count: int):
    pos = 0
    tokens = []
    for _ in range(count):
        m = _TOKEN.match(data, pos)
        if m is None:
            raise PGMError("truncated PGM header")
        tokens.append(m.group(1))
        pos = m.end()
    # exactly one whitespace byte separates the header from the raster
    if pos >= len(data) or not data[pos : pos + 1].isspace():
        raise PGMError("malformed PGM header")
    return tokens, pos + 1


def read_pgm(path) -> np.ndarray:
    data = Path(path).read_bytes()
    tokens, offset = _header_tokens(data, 4)
    if tokens[0] != b"P5":
        raise PGMError(f"{path}: only binary PGM (P5) is supported, found {tokens[0]!r}")
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError:
        raise PGMError(f"{path}: non-numeric PGM header field") from None
    if width <= 0 or height <= 0:
        raise PGMError(f"{path}: invalid dimensions {width}x{height}")
    if maxval != 255:
        raise PGMError(f"{path}: only 8-bit PGM (maxval 255) is supported, found {maxval}")
    raster = data[offset : offset + width * height]
    if len(raster) != width * height:
        raise PGMError(f"{path}: raster is shorter than {width}x{height}")
    return np.frombuffer(raster, dtype=np.uint8).reshape(height, width).copy()


def write_pgm(path, samples: np.ndarray) -> None:
    samples = np.asarray(samples)
    if samples.ndim != 2:
        raise PGMError("PGM holds a single 2-D plane")
    if samples.dtype != np.uint8:
        if samples.min(initial=0) < 0 or samples.max(initial=0) > 255:
            raise PGMError("samples outside 0..255")
        samples = samples.astype(np.uint8)
    height, width = samples.shape
    header = f"P5\n{width} {height}\n255\n".encode("ascii")
    Path(path).write_bytes(header + np.ascontiguousarray(samples).tobytes())
