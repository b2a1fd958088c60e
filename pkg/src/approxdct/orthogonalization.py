"""Diagonal row scaling that turns a low-complexity matrix into a DCT
approximation, plus the deviation-from-diagonality measure."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import DyadicMatrix, diag_of, frobenius_norm_sq

__all__ = [
    "ScaledApproximation",
    "deviation_from_diagonality",
    "orthogonality_check",
    "polar_diag_scaling",
    "scaled_approximation",
]


@dataclass(frozen=True, eq=False)
class ScaledApproximation:
    """``approx = scaling @ low_complexity`` together with its inverse."""

    low_complexity: DyadicMatrix | np.ndarray
    scaling: np.ndarray
    approx: np.ndarray
    inverse_approx: np.ndarray
    name: str = ""

    @property
    def size(self) -> int:
        return self.approx.shape[0]

    @classmethod
    def orthonormal(cls, matrix: np.ndarray, name: str = "") -> ScaledApproximation:
        """Wrap an already orthonormal real matrix (exact DCT, KLT)."""
        m = np.asarray(matrix, dtype=np.float64)
        return cls(m, np.eye(m.shape[0]), m, m.T.copy(), name)


def polar_diag_scaling(t) -> np.ndarray:
    """``sqrt(inv(diag(t @ t.T)))``: the diagonal that gives every row unit norm."""
    if isinstance(t, DyadicMatrix):
        if t.shape[0] != t.shape[1] or t.rank() < t.shape[0]:
            raise ValueError("polar_diag_scaling needs a full-rank square matrix")
        gram = (t @ t.T).to_real()
    else:
        t = np.asarray(t, dtype=np.float64)
        if t.shape[0] != t.shape[1]:
            raise ValueError("polar_diag_scaling needs a square matrix")
        if np.linalg.svd(t, compute_uv=False)[-1] <= 1e-12:
            raise ValueError("polar_diag_scaling needs a full-rank matrix")
        gram = t @ t.T
    return np.diag(1.0 / np.sqrt(np.diag(gram)))


def deviation_from_diagonality(m) -> float:
    m = m.to_real() if isinstance(m, DyadicMatrix) else np.asarray(m, dtype=np.float64)
    total = frobenius_norm_sq(m)
    if total == 0.0:
        raise ValueError("deviation from diagonality is undefined for the zero matrix")
    return 1.0 - frobenius_norm_sq(diag_of(m)) / total


def orthogonality_check(t: DyadicMatrix) -> bool:
    """True iff ``t @ t.T`` is exactly diagonal."""
    return (t @ t.T).is_diagonal()


def scaled_approximation(t, inverse: DyadicMatrix | None = None, name: str = "") -> ScaledApproximation:
    """Pair a low-complexity matrix with its diagonal scaling.

    The inverse of the low-complexity part is taken exactly when possible
    (``inverse`` if supplied, else dyadic Gauss-Jordan) and falls back to a
    floating-point inverse for matrices whose inverse is not dyadic.
    """
    s = polar_diag_scaling(t)
    t_real = t.to_real() if isinstance(t, DyadicMatrix) else np.asarray(t, dtype=np.float64)
    if inverse is None and isinstance(t, DyadicMatrix):
        try:
            inverse = t.inverse()
        except ValueError:
            inverse = None
    if inverse is not None:
        t_inv = inverse.to_real() if isinstance(inverse, DyadicMatrix) else np.asarray(inverse, float)
    else:
        t_inv = np.linalg.inv(t_real)
    s_inv = np.diag(1.0 / np.diag(s))
    return ScaledApproximation(t, s, s @ t_real, t_inv @ s_inv, name)
