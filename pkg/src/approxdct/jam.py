"""Scalable 16/32-point transforms from two copies of an N/2-point one.

``T_N = M_per @ blockdiag(T_{N/2}, T_{N/2}) @ M_add``; the 1/sqrt(2) per
level of the original recursion is left to the diagonal scaling so every
stage stays dyadic.

Stage grouping: the composed factorization keeps ``M_per`` and ``M_add`` as
stages of their own next to the block-diagonal copies of the half-size
stages.  Folding ``M_add`` into the half-size pre-addition stage would
merge two butterfly layers into one dense row pattern and overstate the
addition count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import DyadicMatrix, block_diag
from .orthogonalization import ScaledApproximation, scaled_approximation
from .transforms import FactoredTransform, TransformKind, build_t8

__all__ = [
    "JamRecursion",
    "factored_inverse",
    "jam_add",
    "jam_compose",
    "jam_inverse",
    "jam_per",
    "jam_scaled",
    "jam_transform",
]


def _check_size(n: int):
    if n < 16 or n & (n - 1):
        raise ValueError(f"JAM blocklength must be a power of two >= 16, got {n}")


def interlace(n: int) -> np.ndarray:
    """(n-1) x n/2 identity with a zero row slipped between consecutive rows."""
    half = n // 2
    out = np.zeros((n - 1, half), dtype=np.int64)
    out[2 * np.arange(half), np.arange(half)] = 1
    return out


def jam_per(n: int) -> DyadicMatrix:
    half = n // 2
    p = interlace(n)
    zero_row = np.zeros((1, half), dtype=np.int64)
    left = np.vstack([p, zero_row])
    right = np.vstack([zero_row, p])
    m = DyadicMatrix(np.hstack([left, right]))
    if not m.is_permutation():
        raise AssertionError("interlacing did not produce a permutation")
    return m


def jam_add(n: int) -> DyadicMatrix:
    half = n // 2
    i = np.eye(half, dtype=np.int64)
    j = np.fliplr(i)
    return DyadicMatrix(np.block([[i, j], [j, -i]]))


@dataclass(frozen=True)
class JamRecursion:
    """Base 8-point factorization and the per-level permutation/butterfly pairs."""

    base: FactoredTransform
    levels: int

    @property
    def sizes(self) -> list[int]:
        return [self.base.size << (k + 1) for k in range(self.levels)]

    @property
    def per_level(self) -> list[tuple[DyadicMatrix, DyadicMatrix]]:
        return [(jam_per(n), jam_add(n)) for n in self.sizes]

    def build(self) -> FactoredTransform:
        t = self.base
        for n in self.sizes:
            t = jam_compose(t, n)
        return t


def jam_compose(half: FactoredTransform, n: int) -> FactoredTransform:
    _check_size(n)
    if half.size != n // 2:
        raise ValueError(f"half-size transform has size {half.size}, expected {n // 2}")
    stages = (jam_per(n), *(block_diag(s, s) for s in half.stages), jam_add(n))
    base = half.name.rsplit("-", 1)[0] if half.name else "jam"
    return FactoredTransform(stages, half.global_scale, name=f"{base}-{n}", source=("jam", half))


def factored_inverse(t: FactoredTransform) -> FactoredTransform:
    """Inverse factorization of a Chen 8-point or JAM-composed transform."""
    kind = t.source[0] if t.source else None
    if kind == "chen":
        return build_t8(t.source[1])[1]
    if kind == "jam":
        return jam_inverse(t)
    raise ValueError("no known inverse factorization for this transform")


def jam_inverse(t: FactoredTransform) -> FactoredTransform:
    """``(1/2) M_add^T blockdiag(T^-1, T^-1) M_per^T``; scales compound to 4/N."""
    if not t.source or t.source[0] != "jam":
        raise ValueError("jam_inverse needs a transform built by jam_compose")
    half = t.source[1]
    n = t.size
    half_inv = factored_inverse(half)
    stages = (jam_add(n).T, *(block_diag(s, s) for s in half_inv.stages), jam_per(n).T)
    return FactoredTransform(
        stages,
        half_inv.global_scale / 2,
        name=f"{t.name}-inverse",
        source=("jam-inverse", t),
    )


def jam_transform(kind: TransformKind, n: int) -> FactoredTransform:
    if n == 8:
        return build_t8(kind)[0]
    _check_size(n)
    levels = (n // 8).bit_length() - 1
    return JamRecursion(build_t8(kind)[0], levels).build()


def jam_scaled(kind: TransformKind, n: int) -> ScaledApproximation:
    if n not in (16, 32):
        raise ValueError(f"jam_scaled supports N = 16 and 32, got {n}")
    forward = jam_transform(kind, n)
    inverse = jam_inverse(forward)
    return scaled_approximation(forward.dense(), inverse=inverse.dense(), name=f"{kind.value}-{n}")
