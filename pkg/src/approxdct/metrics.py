"""Proximity and coding-performance measures under a first-order Markov model."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import jacobi_eigen
from .orthogonalization import ScaledApproximation
from .transforms import dct_ii_matrix

__all__ = [
    "CodingGainReport",
    "MarkovModel",
    "classical_coding_gain",
    "coding_gain_sweep",
    "klt_matrix",
    "markov_covariance",
    "total_error_energy",
    "unified_coding_gain",
]


@dataclass(frozen=True)
class MarkovModel:
    n: int
    rho: float

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("blocklength must be positive")
        if not 0.0 <= self.rho < 1.0:
            raise ValueError(f"correlation must lie in [0, 1), got {self.rho}")


@dataclass(frozen=True)
class CodingGainReport:
    transform: str
    rho: float
    cg: float
    cg_klt: float

    @property
    def relative(self) -> float:
        return self.cg - self.cg_klt


def total_error_energy(c_hat, n: int | None = None) -> float:
    """pi times the squared Frobenius distance to the orthonormal DCT-II."""
    c_hat = np.asarray(c_hat, dtype=np.float64)
    n = c_hat.shape[0] if n is None else n
    if c_hat.shape != (n, n):
        raise ValueError(f"expected a {n}x{n} matrix, got {c_hat.shape}")
    diff = dct_ii_matrix(n) - c_hat
    return math.pi * float(np.sum(diff * diff))


def markov_covariance(m: MarkovModel) -> np.ndarray:
    idx = np.arange(m.n)
    return m.rho ** np.abs(idx[:, None] - idx[None, :]).astype(np.float64)


def klt_matrix(m: MarkovModel) -> np.ndarray:
    """Rows are covariance eigenvectors, largest eigenvalue first.

    With rho = 0 the spectrum is flat and any orthonormal basis works;
    the identity is returned.
    """
    if m.rho == 0.0:
        return np.eye(m.n)
    _, vectors = jacobi_eigen(markov_covariance(m))
    return vectors.T.copy()


def unified_coding_gain(c_hat, c_hat_inv, m: MarkovModel) -> float:
    """Coding gain in dB for a possibly nonorthogonal transform.

    ``A_k = h_k R h_k^T`` is the variance of coefficient k and
    ``B_k = ||g_k||^2`` the energy of the synthesis vector that rebuilds the
    signal from it, i.e. column k of the inverse.
    """
    c_hat = np.asarray(c_hat, dtype=np.float64)
    c_hat_inv = np.asarray(c_hat_inv, dtype=np.float64)
    n = m.n
    if c_hat.shape != (n, n) or c_hat_inv.shape != (n, n):
        raise ValueError("transform size does not match the Markov model")
    if np.linalg.cond(c_hat) > 1e12:
        raise ValueError("transform is singular")
    r = markov_covariance(m)
    a = np.einsum("ki,ij,kj->k", c_hat, r, c_hat)
    b = np.sum(c_hat_inv * c_hat_inv, axis=0)
    return float(-10.0 * np.mean(np.log10(a * b)))


def classical_coding_gain(c, m: MarkovModel) -> float:
    """Arithmetic over geometric mean of coefficient variances, in dB."""
    c = np.asarray(c, dtype=np.float64)
    var = np.diag(c @ markov_covariance(m) @ c.T)
    return float(10.0 * (np.log10(np.mean(var)) - np.mean(np.log10(var))))


def coding_gain_sweep(transforms, rho_grid, n: int = 8) -> list[CodingGainReport]:
    """One report per (rho, transform), in rho-major order.

    ``transforms`` is a mapping of name to ``ScaledApproximation`` (or an
    iterable of them, keyed by their ``name``).
    """
    if isinstance(transforms, dict):
        items = list(transforms.items())
    else:
        items = [(t.name, t) for t in transforms]
    reports = []
    for rho in rho_grid:
        model = MarkovModel(n, float(rho))
        klt = klt_matrix(model)
        cg_klt = unified_coding_gain(klt, klt.T, model)
        for name, t in items:
            if isinstance(t, ScaledApproximation):
                fwd, inv = t.approx, t.inverse_approx
            else:
                fwd = np.asarray(t, dtype=np.float64)
                inv = np.linalg.inv(fwd)
            cg = unified_coding_gain(fwd, inv, model)
            reports.append(CodingGainReport(name, float(rho), cg, cg_klt))
    return reports
