"""DCT kernels, Chen's factorization as a parameterized pipeline, and the
signed/rounded multiplierless 8-point transforms built from it.

A ``FactoredTransform`` lists its stages in matrix-product order, so the dense
matrix is ``global_scale * stages[0] @ stages[1] @ ... @ stages[-1]`` and a
vector flows through ``stages[-1]`` first.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple

import numpy as np
from scipy.linalg import hadamard

from .linalg import Dyadic, DyadicMatrix, block_diag

__all__ = [
    "ChenParams",
    "FactoredTransform",
    "OpCount",
    "TransformKind",
    "apply_fast",
    "baseline_fast",
    "baseline_low_complexity",
    "baseline_matrix",
    "build_t8",
    "chen_stages",
    "dct_ii_matrix",
    "dct_iv_matrix",
    "op_count",
    "round_half_away",
    "signum",
]


class TransformKind(enum.Enum):
    EXACT_DCT = "dct"
    CHEN_SIGN = "chen-sign"
    CHEN_ROUND = "chen-round"
    SDCT = "sdct"
    BAS2008 = "bas"
    WHT = "wht"
    HT = "ht"


def dct_ii_matrix(n: int) -> np.ndarray:
    if n < 1:
        raise ValueError("blocklength must be positive")
    m = np.arange(n)[:, None]
    k = np.arange(n)[None, :]
    c = np.sqrt(2.0 / n) * np.cos(m * (2 * k + 1) * np.pi / (2 * n))
    c[0, :] /= np.sqrt(2.0)
    return c


def dct_iv_matrix(n: int) -> np.ndarray:
    if n < 1:
        raise ValueError("blocklength must be positive")
    m = np.arange(n)[:, None]
    k = np.arange(n)[None, :]
    return np.sqrt(2.0 / n) * np.cos((2 * m + 1) * (2 * k + 1) * np.pi / (4 * n))


def signum(x):
    """Three-valued sign: 1, 0, or -1."""
    return np.sign(x).astype(np.int64) if isinstance(x, np.ndarray) else int(np.sign(x))


def round_half_away(x):
    """``sign(x) * floor(|x| + 1/2)``: halves round away from zero."""
    if isinstance(x, np.ndarray):
        return (np.sign(x) * np.floor(np.abs(x) + 0.5)).astype(np.int64)
    return int(np.sign(x) * math.floor(abs(x) + 0.5))


# ---------------------------------------------------------------------------
# Chen's factorization


@dataclass(frozen=True)
class ChenParams:
    alpha: float
    beta: tuple[float, float, float, float]
    gamma: tuple[float, float]

    @classmethod
    def exact(cls) -> ChenParams:
        return cls(
            alpha=math.cos(math.pi / 4),
            beta=tuple(math.cos((2 * n + 1) * math.pi / 16) for n in range(4)),
            gamma=tuple(math.cos((2 * n + 1) * math.pi / 8) for n in range(2)),
        )

    @classmethod
    def from_vector(cls, v) -> ChenParams:
        v = list(v)
        if len(v) != 7:
            raise ValueError("Chen parameter vector has 7 entries (alpha, beta0..3, gamma0..1)")
        return cls(alpha=v[0], beta=tuple(v[1:5]), gamma=tuple(v[5:7]))

    def as_vector(self) -> tuple:
        return (self.alpha, *self.beta, *self.gamma)

    def signed(self) -> ChenParams:
        return ChenParams.from_vector([signum(v) for v in self.as_vector()])

    def rounded(self) -> ChenParams:
        return ChenParams.from_vector([round_half_away(v) for v in self.as_vector()])

    def is_integral(self) -> bool:
        return all(float(v).is_integer() for v in self.as_vector())


_I2 = np.eye(2, dtype=np.int64)
_J2 = np.fliplr(_I2)
_I4 = np.eye(4, dtype=np.int64)
_J4 = np.fliplr(_I4)

P8 = DyadicMatrix.permutation([0, 7, 1, 6, 2, 5, 3, 4])
P4 = DyadicMatrix.permutation([0, 3, 1, 2])
Q4 = DyadicMatrix.permutation([0, 2, 1, 3])
B8 = DyadicMatrix(np.block([[_I4, _J4], [_J4, -_I4]]))
B4 = DyadicMatrix(np.block([[_I2, _J2], [_J2, -_I2]]))
M1 = block_diag(DyadicMatrix.identity(4), DyadicMatrix(_J4) @ Q4)


def _entry_matrix(rows):
    """Dyadic when every entry has a short binary expansion, float otherwise.

    Any finite double is technically dyadic; irrational parameters such as
    cos(pi/4) would come out with 2**-52 denominators, so those stay real.
    """
    if all(Fraction(float(v)).denominator <= 1 << 8 for row in rows for v in row):
        return DyadicMatrix.from_values([[Fraction(float(v)) for v in row] for row in rows])
    return np.array(rows, dtype=np.float64)


def _m2(beta):
    b0, b1, b2, b3 = beta
    a1 = _entry_matrix([[b0, 0, 0, b3], [0, b2, b1, 0], [0, b1, -b2, 0], [b3, 0, 0, -b0]])
    return block_diag(P4, a1)


def _m3(alpha, gamma):
    a, (g0, g1) = alpha, gamma
    c_tilde = _entry_matrix([[a, a, 0, 0], [a, -a, 0, 0], [0, 0, -g0, g1], [0, 0, g1, g0]])
    a2 = DyadicMatrix([[1, 1, 0, 0], [1, -1, 0, 0], [0, 0, -1, 1], [0, 0, 1, 1]])
    return block_diag(c_tilde, a2)


def _m4(alpha):
    a = alpha
    a3 = _entry_matrix([[0, 0, 0, 1], [0, a, a, 0], [0, -a, a, 0], [1, 0, 0, 0]])
    return block_diag(B4, a3)


class OpCount(NamedTuple):
    multiplications: int
    additions: int
    shifts: int

    @property
    def total(self) -> int:
        return self.multiplications + self.additions + self.shifts

    def __add__(self, other):
        return OpCount(*(a + b for a, b in zip(self, other)))


def _is_power_of_two(frac: Fraction) -> bool:
    num, den = frac.numerator, frac.denominator
    return num > 0 and num & (num - 1) == 0 and den & (den - 1) == 0


def _stage_ops(stage) -> OpCount:
    # Per row: (nonzeros - 1) additions.  Nonzero coefficients are grouped by
    # magnitude (a common factor is applied once after the sum), then each
    # magnitude group costs nothing for 1, one shift for another power of two,
    # and one multiplication otherwise.
    mults = adds = shifts = 0
    if isinstance(stage, DyadicMatrix):
        rows = [[abs(f) for f in row if f != 0] for row in stage.to_fractions()]
    else:
        rows = []
        for row in np.asarray(stage):
            mags = []
            for v in row[row != 0]:
                v = abs(float(v))
                f = Fraction(v)
                # real stages may still carry exact powers of two
                mags.append(f if _is_power_of_two(f) else round(v, 15))
            rows.append(mags)
    for mags in rows:
        if not mags:
            continue
        adds += len(mags) - 1
        for mag in set(mags):
            if isinstance(mag, Fraction) and mag == 1:
                continue
            if isinstance(mag, Fraction) and _is_power_of_two(mag):
                shifts += 1
            else:
                mults += 1
    return OpCount(mults, adds, shifts)


@dataclass(frozen=True)
class FactoredTransform:
    """Sparse-stage factorization of a square transform.

    ``source`` records how the factorization was built (``("chen", kind)`` or
    ``("jam", half)``) so that inverses can be rebuilt from the same recipe.
    """

    stages: tuple
    global_scale: Fraction = Fraction(1)
    name: str = ""
    source: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "stages", tuple(self.stages))
        object.__setattr__(self, "global_scale", Fraction(self.global_scale))
        n = self.stages[0].shape[0]
        for s in self.stages:
            if s.shape != (n, n):
                raise ValueError("all stages must be square and of equal size")

    @property
    def size(self) -> int:
        return self.stages[0].shape[0]

    @property
    def is_dyadic(self) -> bool:
        return all(isinstance(s, DyadicMatrix) for s in self.stages)

    def dense(self):
        """Product of the stages times the global scale.

        Exact (``DyadicMatrix``) when every stage is dyadic and the scale is a
        dyadic rational, float otherwise.
        """
        if self.is_dyadic:
            out = self.stages[0]
            for s in self.stages[1:]:
                out = out @ s
            try:
                return out * Dyadic.from_value(self.global_scale)
            except ValueError:
                return out.to_real() * float(self.global_scale)
        out = np.eye(self.size)
        for s in self.stages:
            out = out @ (s.to_real() if isinstance(s, DyadicMatrix) else s)
        return out * float(self.global_scale)

    def dense_real(self) -> np.ndarray:
        d = self.dense()
        return d.to_real() if isinstance(d, DyadicMatrix) else d

    @cached_property
    def _real_stages(self) -> tuple:
        return tuple(s.to_real() if isinstance(s, DyadicMatrix) else s for s in self.stages)

    @cached_property
    def op_count(self) -> OpCount:
        total = OpCount(0, 0, 0)
        for s in self.stages:
            total = total + _stage_ops(s)
        return total


def op_count(t: FactoredTransform) -> OpCount:
    """Arithmetic cost read off the stage structure.

    The global scale is not counted: it folds into the diagonal scaling (and
    from there into quantization).
    """
    return t.op_count


def apply_fast(t: FactoredTransform, x) -> np.ndarray:
    """Run ``x`` (length-N vector or N x k batch of columns) through the stages.

    Dyadic stages applied to integer input of moderate size (|x| < 2**32)
    produce exact results: every intermediate value is a dyadic rational well
    inside double precision.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape[0] != t.size:
        raise ValueError(f"input length {x.shape[0]} does not match transform size {t.size}")
    y = x
    for s in reversed(t._real_stages):
        y = s @ y
    if t.global_scale != 1:
        y = y * float(t.global_scale)
    return y


def chen_stages(p: ChenParams) -> FactoredTransform:
    """``P8 M1 M2(beta) M3(alpha, gamma) M4(alpha) B8`` without the leading 1/2."""
    stages = (P8, M1, _m2(p.beta), _m3(p.alpha, p.gamma), _m4(p.alpha), B8)
    return FactoredTransform(stages, Fraction(1), name="chen")


# Stage inverses for the two integer parameter sets, entered as printed.
_H = Fraction(1, 2)

_M2_SIGN_INV = DyadicMatrix.from_values(
    np.array(
        [
            [2, 0, 0, 0, 0, 0, 0, 0],
            [0, 0, 2, 0, 0, 0, 0, 0],
            [0, 0, 0, 2, 0, 0, 0, 0],
            [0, 2, 0, 0, 0, 0, 0, 0],
            [0, 0, 0, 0, 1, 0, 0, 1],
            [0, 0, 0, 0, 0, 1, 1, 0],
            [0, 0, 0, 0, 0, 1, -1, 0],
            [0, 0, 0, 0, 1, 0, 0, -1],
        ],
        dtype=object,
    )
    * _H
)
_M2_ROUND_INV = DyadicMatrix.from_values(
    np.array(
        [
            [2, 0, 0, 0, 0, 0, 0, 0],
            [0, 0, 2, 0, 0, 0, 0, 0],
            [0, 0, 0, 2, 0, 0, 0, 0],
            [0, 2, 0, 0, 0, 0, 0, 0],
            [0, 0, 0, 0, 2, 0, 0, 0],
            [0, 0, 0, 0, 0, 1, 1, 0],
            [0, 0, 0, 0, 0, 1, -1, 0],
            [0, 0, 0, 0, 0, 0, 0, -2],
        ],
        dtype=object,
    )
    * _H
)
_M3_ROUND_INV = DyadicMatrix.from_values(
    np.array(
        [
            [1, 1, 0, 0, 0, 0, 0, 0],
            [1, -1, 0, 0, 0, 0, 0, 0],
            [0, 0, -2, 0, 0, 0, 0, 0],
            [0, 0, 0, 2, 0, 0, 0, 0],
            [0, 0, 0, 0, 1, 1, 0, 0],
            [0, 0, 0, 0, 1, -1, 0, 0],
            [0, 0, 0, 0, 0, 0, -1, 1],
            [0, 0, 0, 0, 0, 0, 1, 1],
        ],
        dtype=object,
    )
    * _H
)
_M4_INV = DyadicMatrix.from_values(
    np.array(
        [
            [1, 0, 0, 1, 0, 0, 0, 0],
            [0, 1, 1, 0, 0, 0, 0, 0],
            [0, 1, -1, 0, 0, 0, 0, 0],
            [1, 0, 0, -1, 0, 0, 0, 0],
            [0, 0, 0, 0, 0, 0, 0, 2],
            [0, 0, 0, 0, 0, 1, -1, 0],
            [0, 0, 0, 0, 0, 1, 1, 0],
            [0, 0, 0, 0, 2, 0, 0, 0],
        ],
        dtype=object,
    )
    * _H
)


def build_t8(kind: TransformKind) -> tuple[FactoredTransform, FactoredTransform]:
    """Forward and inverse factorizations of the signed or rounded 8-point transform."""
    exact = ChenParams.exact()
    if kind is TransformKind.CHEN_SIGN:
        params = exact.signed()
        m3_inv = _m3(params.alpha, params.gamma) * _H
        m2_inv = _M2_SIGN_INV
    elif kind is TransformKind.CHEN_ROUND:
        params = exact.rounded()
        m3_inv = _M3_ROUND_INV
        m2_inv = _M2_ROUND_INV
    else:
        raise ValueError(f"build_t8 supports CHEN_SIGN and CHEN_ROUND, not {kind}")
    fwd = chen_stages(params)
    forward = FactoredTransform(fwd.stages, Fraction(1), name=f"{kind.value}-8", source=("chen", kind))
    inverse = FactoredTransform(
        (B8.T, _M4_INV, m3_inv, m2_inv, M1.T, P8.T),
        Fraction(1, 2),
        name=f"{kind.value}-8-inverse",
        source=("chen-inverse", kind),
    )
    return forward, inverse


# ---------------------------------------------------------------------------
# Baselines


_BAS2008 = DyadicMatrix.from_values(
    [
        [1, 1, 1, 1, 1, 1, 1, 1],
        [1, 1, 0, 0, 0, 0, -1, -1],
        [1, _H, -_H, -1, -1, -_H, _H, 1],
        [0, 0, -1, 0, 0, 1, 0, 0],
        [1, -1, -1, 1, 1, -1, -1, 1],
        [1, -1, 0, 0, 0, 0, 1, -1],
        [_H, -1, 1, -_H, -_H, 1, -1, _H],
        [0, 0, 0, -1, 1, 0, 0, 0],
    ]
)


def _sequency(row: np.ndarray) -> int:
    return int(np.count_nonzero(np.diff(np.sign(row))))


def baseline_low_complexity(kind: TransformKind, n: int = 8) -> DyadicMatrix:
    """Multiplierless matrix of a baseline transform, before diagonal scaling.

    SDCT, WHT and HT exist for every power-of-two ``n``; BAS only for 8.
    """
    if n < 2 or n & (n - 1):
        raise ValueError(f"baseline size must be a power of two, got {n}")
    if kind is TransformKind.SDCT:
        return DyadicMatrix(signum(dct_ii_matrix(n)))
    if kind is TransformKind.WHT:
        h = hadamard(n).astype(np.int64)
        return DyadicMatrix(h[np.argsort([_sequency(r) for r in h], kind="stable")])
    if kind is TransformKind.HT:
        # natural (Sylvester) order
        return DyadicMatrix(hadamard(n).astype(np.int64))
    if kind is TransformKind.BAS2008:
        if n != 8:
            raise ValueError(f"BAS-2008 is an 8-point transform, got N = {n}")
        return _BAS2008
    raise ValueError(f"{kind} is not a baseline transform")


def baseline_matrix(kind: TransformKind, n: int = 8):
    """Baseline paired with its diagonal row-normalizing scaling."""
    from .orthogonalization import scaled_approximation

    name = kind.value if n == 8 else f"{kind.value}-{n}"
    return scaled_approximation(baseline_low_complexity(kind, n), name=name)


def _sparse_stage(rows: list[dict[int, object]], n: int = 8) -> DyadicMatrix:
    """Stage from per-output-row ``{input: coefficient}`` maps."""
    m = [[0] * n for _ in range(len(rows))]
    for i, row in enumerate(rows):
        for j, v in row.items():
            m[i][j] = v
    return DyadicMatrix.from_values(m)


# x_i + x_{7-i} into slots 0..3, x_i - x_{7-i} into slots 4..7
_BUTTERFLY8 = DyadicMatrix(np.block([[_I4, _J4], [_I4, -_J4]]))


def _hadamard_stages(n: int) -> tuple[DyadicMatrix, ...]:
    """Sylvester Hadamard as log2(n) butterfly layers of n additions each."""
    stages = []
    span = n // 2
    while span:
        rows = []
        for i in range(n):
            partner = i ^ span
            rows.append({min(i, partner): 1, max(i, partner): 1 if i < partner else -1})
        stages.append(_sparse_stage(rows, n))
        span //= 2
    return tuple(stages)


def _sdct_stages() -> tuple[DyadicMatrix, ...]:
    # slots after the butterfly: s0..s3, d0..d3
    second = _sparse_stage(
        [
            {0: 1, 3: 1},  # a = s0 + s3
            {1: 1, 2: 1},  # b = s1 + s2
            {0: 1, 3: -1},  # c = s0 - s3
            {1: 1, 2: -1},  # e = s1 - s2
            {4: 1, 5: 1},  # q = d0 + d1
            {4: 1, 5: -1},  # p = d0 - d1
            {6: 1, 7: 1},  # u = d2 + d3
            {6: 1, 7: -1},  # t = d2 - d3
        ]
    )
    third = _sparse_stage(
        [
            {0: 1, 1: 1},  # row 0
            {4: 1, 6: 1},  # row 1 = q + u
            {2: 1, 3: 1},  # row 2 = c + e
            {5: 1, 6: -1},  # row 3 = p - u
            {0: 1, 1: -1},  # row 4
            {5: 1, 6: 1},  # row 5 = p + u
            {2: 1, 3: -1},  # row 6 = c - e
            {5: 1, 7: 1},  # row 7 = p + t
        ]
    )
    return third, second, _BUTTERFLY8


def _bas_stages() -> tuple[DyadicMatrix, ...]:
    second = _sparse_stage(
        [
            {0: 1, 3: 1},
            {1: 1, 2: 1},
            {0: 1, 3: -1},
            {1: 1, 2: -1},
            {4: 1},
            {5: 1},
            {6: 1},
            {7: 1},
        ]
    )
    third = _sparse_stage(
        [
            {0: 1, 1: 1},
            {4: 1, 5: 1},
            {2: 1, 3: _H},
            {6: -1},
            {0: 1, 1: -1},
            {4: 1, 5: -1},
            {2: _H, 3: -1},
            {7: -1},
        ]
    )
    return third, second, _BUTTERFLY8


def baseline_fast(kind: TransformKind) -> FactoredTransform:
    """Butterfly factorization of an 8-point baseline, for operation counts.

    The dense product equals ``baseline_low_complexity(kind)`` exactly.
    """
    if kind is TransformKind.SDCT:
        stages = _sdct_stages()
    elif kind is TransformKind.BAS2008:
        stages = _bas_stages()
    elif kind is TransformKind.HT:
        stages = _hadamard_stages(8)
    elif kind is TransformKind.WHT:
        h = hadamard(8)
        order = np.argsort([_sequency(r) for r in h], kind="stable")
        # row k of the result is row order[k] of the natural Hadamard
        stages = (DyadicMatrix.permutation(order.tolist()), *_hadamard_stages(8))
    else:
        raise ValueError(f"{kind} is not a baseline transform")
    t = FactoredTransform(stages, name=kind.value)
    if t.dense() != baseline_low_complexity(kind):
        raise AssertionError(f"{kind.value} factorization does not match its matrix")
    return t
