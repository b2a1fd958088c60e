"""Exact dyadic-rational matrices and the handful of dense float routines the
rest of the package leans on.

Every low-complexity matrix in this package has entries of the form
``integer / 2**k``.  ``DyadicMatrix`` stores a shared integer grid plus one
exponent, so products and sums never round.  Real matrices are plain
``numpy.ndarray`` values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

__all__ = [
    "Dyadic",
    "DyadicMatrix",
    "block_diag",
    "diag_of",
    "frobenius_norm_sq",
    "jacobi_eigen",
    "matmul",
]


def _split_power_of_two(value: int) -> tuple[int, int]:
    """Return (odd part, power of two) of a positive integer."""
    power = (value & -value).bit_length() - 1
    return value >> power, power


def _as_fraction(value) -> Fraction:
    if isinstance(value, Dyadic):
        return value.to_fraction()
    if isinstance(value, (float, np.floating)):
        return Fraction(float(value))
    if isinstance(value, (int, np.integer, Rational)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a dyadic rational")


@dataclass(frozen=True, eq=False)
class Dyadic:
    """Scalar ``numerator / 2**exponent``.  Equality is by value."""

    numerator: int
    exponent: int = 0

    def __post_init__(self):
        if self.exponent < 0:
            raise ValueError("exponent must be non-negative")
        object.__setattr__(self, "numerator", int(self.numerator))
        object.__setattr__(self, "exponent", int(self.exponent))

    @classmethod
    def from_value(cls, value) -> Dyadic:
        frac = _as_fraction(value)
        odd, power = _split_power_of_two(frac.denominator)
        if odd != 1:
            raise ValueError(f"{value!r} is not a dyadic rational")
        return cls(frac.numerator, power)

    def normalized(self) -> Dyadic:
        num, exp = self.numerator, self.exponent
        while exp > 0 and num % 2 == 0:
            num //= 2
            exp -= 1
        return Dyadic(num, exp) if num else Dyadic(0, 0)

    def to_fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.exponent)

    def __float__(self) -> float:
        return self.numerator / (1 << self.exponent)

    def _align(self, other: Dyadic) -> tuple[int, int, int]:
        exp = max(self.exponent, other.exponent)
        return (
            self.numerator << (exp - self.exponent),
            other.numerator << (exp - other.exponent),
            exp,
        )

    def _coerce(self, other) -> Dyadic:
        if isinstance(other, Dyadic):
            return other
        return Dyadic.from_value(other)

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        a, b, _ = self._align(other)
        return a == b

    def __hash__(self):
        return hash(self.to_fraction())

    def __lt__(self, other):
        a, b, _ = self._align(self._coerce(other))
        return a < b

    def __neg__(self):
        return Dyadic(-self.numerator, self.exponent)

    def __add__(self, other):
        a, b, exp = self._align(self._coerce(other))
        return Dyadic(a + b, exp).normalized()

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return Dyadic(self.numerator * other.numerator, self.exponent + other.exponent).normalized()

    __rmul__ = __mul__

    def __repr__(self):
        if self.exponent == 0:
            return f"Dyadic({self.numerator})"
        return f"Dyadic({self.numerator}/2^{self.exponent})"


_INT64_HEADROOM = 1 << 62


class DyadicMatrix:
    """Immutable matrix ``numerators / 2**exponent`` with exact arithmetic.

    The numerator grid is kept as ``int64`` while values stay small and
    silently promoted to Python integers (``dtype=object``) otherwise.
    """

    __slots__ = ("_num", "_exp")

    def __init__(self, numerators, exponent: int = 0):
        num = np.array(numerators)
        if num.ndim == 1:
            num = num.reshape(1, -1)
        if num.ndim != 2:
            raise ValueError("DyadicMatrix needs a 2-D grid")
        if exponent < 0:
            raise ValueError("exponent must be non-negative")
        if num.dtype != object and not np.issubdtype(num.dtype, np.integer):
            raise TypeError("numerators must be integers; use DyadicMatrix.from_values")
        num, exponent = _normalize(num, int(exponent))
        num.setflags(write=False)
        self._num = num
        self._exp = exponent

    # construction -----------------------------------------------------

    @classmethod
    def from_values(cls, rows) -> DyadicMatrix:
        """Build from ints, Fractions, Dyadics, or floats that are exactly dyadic."""
        arr = np.asarray(rows, dtype=object)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1)
        fracs = [[_as_fraction(v) for v in row] for row in arr]
        exp = 0
        for row in fracs:
            for f in row:
                odd, power = _split_power_of_two(f.denominator)
                if odd != 1:
                    raise ValueError(f"{f} is not a dyadic rational")
                exp = max(exp, power)
        num = np.array(
            [[f.numerator * ((1 << exp) // f.denominator) for f in row] for row in fracs],
            dtype=object,
        )
        return cls(num, exp)

    @classmethod
    def identity(cls, n: int) -> DyadicMatrix:
        return cls(np.eye(n, dtype=np.int64))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> DyadicMatrix:
        return cls(np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def permutation(cls, targets) -> DyadicMatrix:
        """Row ``i`` picks input ``targets[i]``."""
        n = len(targets)
        num = np.zeros((n, n), dtype=np.int64)
        num[np.arange(n), list(targets)] = 1
        return cls(num)

    # accessors --------------------------------------------------------

    @property
    def numerators(self) -> np.ndarray:
        return self._num

    @property
    def exponent(self) -> int:
        return self._exp

    @property
    def shape(self) -> tuple[int, int]:
        return self._num.shape

    @property
    def T(self) -> DyadicMatrix:
        return DyadicMatrix(self._num.T, self._exp)

    def __getitem__(self, idx) -> Dyadic:
        i, j = idx
        return Dyadic(int(self._num[i, j]), self._exp).normalized()

    def entries(self) -> set[Fraction]:
        return {Fraction(int(v), 1 << self._exp) for v in self._num.ravel()}

    def to_real(self) -> np.ndarray:
        return self._num.astype(np.float64) / float(1 << self._exp)

    def to_fractions(self) -> np.ndarray:
        return np.vectorize(lambda v: Fraction(int(v), 1 << self._exp), otypes=[object])(self._num)

    def is_diagonal(self) -> bool:
        n, m = self.shape
        if n != m:
            return False
        off = self._num.copy()
        off[np.arange(n), np.arange(n)] = 0
        return not np.any(off != 0)

    def is_permutation(self) -> bool:
        return (
            self._exp == 0
            and self.shape[0] == self.shape[1]
            and set(np.unique(self._num).tolist()) <= {0, 1}
            and np.all(self._num.sum(axis=0) == 1)
            and np.all(self._num.sum(axis=1) == 1)
        )

    # arithmetic -------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, DyadicMatrix):
            return NotImplemented
        return (
            self.shape == other.shape
            and self._exp == other._exp
            and bool(np.all(self._num == other._num))
        )

    def __hash__(self):
        return hash((self.shape, self._exp, tuple(int(v) for v in self._num.ravel())))

    def __neg__(self):
        return DyadicMatrix(-self._num, self._exp)

    def __add__(self, other):
        if not isinstance(other, DyadicMatrix):
            return NotImplemented
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        exp = max(self._exp, other._exp)
        a = _widen(self._num, exp - self._exp)
        b = _widen(other._num, exp - other._exp)
        return DyadicMatrix(_safe_add(a, b), exp)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        d = scalar if isinstance(scalar, Dyadic) else Dyadic.from_value(scalar)
        num = _safe_scale(self._num, d.numerator)
        return DyadicMatrix(num, self._exp + d.exponent)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, DyadicMatrix):
            if self.shape[1] != other.shape[0]:
                raise ValueError(f"inner dimensions disagree: {self.shape} @ {other.shape}")
            return DyadicMatrix(_safe_matmul(self._num, other._num), self._exp + other._exp)
        return NotImplemented

    def inverse(self) -> DyadicMatrix:
        """Exact inverse by Gauss-Jordan over the rationals.

        Raises ``ValueError`` for singular input or when the inverse leaves
        the dyadic rationals.
        """
        inv = _fraction_inverse(self.to_fractions())
        return DyadicMatrix.from_values(inv)

    def rank(self) -> int:
        return _fraction_rank(self.to_fractions())

    def __repr__(self):
        scale = f" / 2^{self._exp}" if self._exp else ""
        return f"DyadicMatrix({self._num.tolist()}{scale})"


def _normalize(num: np.ndarray, exp: int) -> tuple[np.ndarray, int]:
    if not num.size or not np.any(num != 0):
        return num.astype(np.int64) if num.dtype != object else _shrink(num), 0
    while exp > 0 and np.all(num % 2 == 0):
        num = num // 2
        exp -= 1
    return _shrink(num), exp


def _shrink(num: np.ndarray) -> np.ndarray:
    if num.dtype == object:
        big = max((abs(int(v)) for v in num.ravel()), default=0)
        if big < _INT64_HEADROOM:
            return num.astype(np.int64)
        return num
    return num.astype(np.int64, copy=True)


def _widen(num: np.ndarray, shift: int) -> np.ndarray:
    if shift == 0:
        return num
    if num.dtype != object and int(np.abs(num).max(initial=0)) < (_INT64_HEADROOM >> shift):
        return num << shift
    return num.astype(object) * (1 << shift)


def _safe_add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.dtype != object and b.dtype != object:
        bound = int(np.abs(a).max(initial=0)) + int(np.abs(b).max(initial=0))
        if bound < _INT64_HEADROOM:
            return a + b
    return a.astype(object) + b.astype(object)


def _safe_scale(a: np.ndarray, k: int) -> np.ndarray:
    if a.dtype != object and int(np.abs(a).max(initial=0)) * abs(k) < _INT64_HEADROOM:
        return a * k
    return a.astype(object) * k


def _safe_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.dtype != object and b.dtype != object:
        bound = int(np.abs(a).max(initial=0)) * int(np.abs(b).max(initial=0)) * a.shape[1]
        if bound < _INT64_HEADROOM:
            return a @ b
    return a.astype(object) @ b.astype(object)


def _fraction_inverse(m: np.ndarray) -> np.ndarray:
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("inverse needs a square matrix")
    a = [[Fraction(v) for v in row] for row in m]
    inv = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise ValueError("matrix is singular")
        a[col], a[pivot] = a[pivot], a[col]
        inv[col], inv[pivot] = inv[pivot], inv[col]
        p = a[col][col]
        a[col] = [v / p for v in a[col]]
        inv[col] = [v / p for v in inv[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
                inv[r] = [x - f * y for x, y in zip(inv[r], inv[col])]
    return np.array(inv, dtype=object)


def _fraction_rank(m: np.ndarray) -> int:
    a = [[Fraction(v) for v in row] for row in m]
    rows, cols = len(a), len(a[0]) if a else 0
    rank = 0
    for col in range(cols):
        pivot = next((r for r in range(rank, rows) if a[r][col] != 0), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        for r in range(rank + 1, rows):
            if a[r][col] != 0:
                f = a[r][col] / a[rank][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[rank])]
        rank += 1
    return rank


def matmul(a, b):
    """Matrix product: exact for two ``DyadicMatrix`` operands, IEEE double otherwise."""
    if isinstance(a, DyadicMatrix) and isinstance(b, DyadicMatrix):
        return a @ b
    a = a.to_real() if isinstance(a, DyadicMatrix) else np.asarray(a, dtype=np.float64)
    b = b.to_real() if isinstance(b, DyadicMatrix) else np.asarray(b, dtype=np.float64)
    if a.shape[-1] != b.shape[0]:
        raise ValueError(f"inner dimensions disagree: {a.shape} @ {b.shape}")
    return a @ b


def block_diag(*blocks):
    """Block-diagonal assembly, kept dyadic when every block is dyadic."""
    if all(isinstance(b, DyadicMatrix) for b in blocks):
        exp = max(b.exponent for b in blocks)
        rows = sum(b.shape[0] for b in blocks)
        cols = sum(b.shape[1] for b in blocks)
        grids = [_widen(b.numerators, exp - b.exponent) for b in blocks]
        dtype = object if any(g.dtype == object for g in grids) else np.int64
        out = np.zeros((rows, cols), dtype=dtype)
        r = c = 0
        for g in grids:
            out[r : r + g.shape[0], c : c + g.shape[1]] = g
            r += g.shape[0]
            c += g.shape[1]
        return DyadicMatrix(out, exp)
    reals = [b.to_real() if isinstance(b, DyadicMatrix) else np.asarray(b, float) for b in blocks]
    rows = sum(b.shape[0] for b in reals)
    cols = sum(b.shape[1] for b in reals)
    out = np.zeros((rows, cols))
    r = c = 0
    for b in reals:
        out[r : r + b.shape[0], c : c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def frobenius_norm_sq(m) -> float:
    m = m.to_real() if isinstance(m, DyadicMatrix) else np.asarray(m, dtype=np.float64)
    return float(np.sum(m * m))


def diag_of(m):
    """Zero every off-diagonal entry of a square matrix."""
    if isinstance(m, DyadicMatrix):
        n, k = m.shape
        if n != k:
            raise ValueError(f"diag_of needs a square matrix, got {m.shape}")
        num = np.zeros_like(m.numerators)
        idx = np.arange(n)
        num[idx, idx] = m.numerators[idx, idx]
        return DyadicMatrix(num, m.exponent)
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"diag_of needs a square matrix, got {m.shape}")
    return np.diag(np.diag(m))


def jacobi_eigen(sym, tol: float = 1e-12, max_sweeps: int = 100):
    """Cyclic Jacobi eigen-decomposition of a real symmetric matrix.

    Returns ``(eigenvalues, vectors)`` with eigenvalues in descending order
    and eigenvectors as the *columns* of ``vectors``.  Each eigenvector is
    sign-normalized so its largest-magnitude component is positive; ties in
    the spectrum keep the order the sweeps leave them in.
    """
    a = sym.to_real() if isinstance(sym, DyadicMatrix) else np.array(sym, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("jacobi_eigen needs a square matrix")
    if np.max(np.abs(a - a.T), initial=0.0) > 1e-12:
        raise ValueError("jacobi_eigen needs a symmetric matrix")
    n = a.shape[0]
    v = np.eye(n)

    off_mask = ~np.eye(n, dtype=bool)

    def off_norm(x):
        # summed directly: ||x||^2 - ||diag x||^2 cancels catastrophically
        return float(np.sqrt(np.sum(x[off_mask] ** 2)))

    for _ in range(max_sweeps):
        if off_norm(a) < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) < 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.copysign(1.0, theta) / (abs(theta) + np.hypot(theta, 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rot_p = c * a[:, p] - s * a[:, q]
                rot_q = s * a[:, p] + c * a[:, q]
                a[:, p], a[:, q] = rot_p, rot_q
                rot_p = c * a[p, :] - s * a[q, :]
                rot_q = s * a[p, :] + c * a[q, :]
                a[p, :], a[q, :] = rot_p, rot_q
                a[p, q] = a[q, p] = 0.0
                vp = c * v[:, p] - s * v[:, q]
                vq = s * v[:, p] + c * v[:, q]
                v[:, p], v[:, q] = vp, vq
    else:
        if off_norm(a) >= tol:
            raise RuntimeError("Jacobi iteration did not converge")

    values = np.diag(a).copy()
    order = np.argsort(-values, kind="stable")
    values = values[order]
    v = v[:, order]
    for k in range(n):
        col = v[:, k]
        if col[np.argmax(np.abs(col))] < 0:
            v[:, k] = -col
    return values, v
