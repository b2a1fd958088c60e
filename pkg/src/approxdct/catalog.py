"""Name-based lookup of every transform the command line and sweeps accept."""

from __future__ import annotations

from functools import lru_cache

from .jam import jam_scaled
from .orthogonalization import ScaledApproximation, scaled_approximation
from .transforms import TransformKind, baseline_matrix, build_t8, dct_ii_matrix

__all__ = ["PAPER_8POINT", "TRANSFORM_NAMES", "UnknownTransformError", "get_transform"]

TRANSFORM_NAMES = (
    "dct",
    "chen-sign",
    "chen-round",
    "sdct",
    "bas",
    "wht",
    "ht",
    "dct-16",
    "sdct-16",
    "chen-sign-16",
    "chen-round-16",
    "dct-32",
    "sdct-32",
    "chen-sign-32",
    "chen-round-32",
)

# the 8-point line-up compared throughout (tables, coding gain, corpus sweep)
PAPER_8POINT = ("dct", "chen-round", "chen-sign", "sdct", "bas", "wht", "ht")


class UnknownTransformError(ValueError):
    def __init__(self, name: str):
        super().__init__(f"unknown transform {name!r}; valid names: {', '.join(TRANSFORM_NAMES)}")
        self.name = name


@lru_cache(maxsize=None)
def get_transform(name: str) -> ScaledApproximation:
    if name not in TRANSFORM_NAMES:
        raise UnknownTransformError(name)
    base, _, size = name.rpartition("-") if name[-2:].isdigit() else (name, "", "8")
    n = int(size)
    if base == "dct":
        return ScaledApproximation.orthonormal(dct_ii_matrix(n), name=name)
    kind = TransformKind(base)
    if kind in (TransformKind.CHEN_SIGN, TransformKind.CHEN_ROUND):
        if n == 8:
            forward, inverse = build_t8(kind)
            return scaled_approximation(forward.dense(), inverse=inverse.dense(), name=name)
        return jam_scaled(kind, n)
    return baseline_matrix(kind, n)
