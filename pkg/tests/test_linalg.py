from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from approxdct.linalg import (
    Dyadic,
    DyadicMatrix,
    block_diag,
    diag_of,
    frobenius_norm_sq,
    jacobi_eigen,
    matmul,
)

dyadics = st.builds(Dyadic, st.integers(-(10**6), 10**6), st.integers(0, 12))


def small_matrix(n, m=None):
    m = n if m is None else m
    entry = st.builds(Fraction, st.integers(-8, 8), st.sampled_from([1, 2, 4]))
    return st.lists(st.lists(entry, min_size=m, max_size=m), min_size=n, max_size=n)


def frac_matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


@given(dyadics, dyadics)
def test_dyadic_arithmetic_matches_fractions(a, b):
    fa, fb = a.to_fraction(), b.to_fraction()
    assert (a + b).to_fraction() == fa + fb
    assert (a - b).to_fraction() == fa - fb
    assert (a * b).to_fraction() == fa * fb
    assert (a == b) == (fa == fb)


@given(dyadics)
def test_normalized_keeps_value_and_has_odd_numerator(a):
    n = a.normalized()
    assert n == a
    assert n.exponent == 0 or n.numerator % 2 == 1


def test_dyadic_from_value():
    assert Dyadic.from_value(0.75) == Dyadic(3, 2)
    assert Dyadic.from_value(Fraction(-5, 8)).to_fraction() == Fraction(-5, 8)
    with pytest.raises(ValueError):
        Dyadic.from_value(Fraction(1, 3))
    with pytest.raises(ValueError):
        Dyadic(1, -1)


@settings(max_examples=50)
@given(small_matrix(3, 4), small_matrix(4, 2))
def test_matmul_matches_fraction_oracle(a, b):
    got = (DyadicMatrix.from_values(a) @ DyadicMatrix.from_values(b)).to_fractions()
    assert got.tolist() == frac_matmul(a, b)


@settings(max_examples=60, deadline=None)
@given(small_matrix(4))
def test_inverse_against_rational_oracle(rows):
    ref = sympy.Matrix(rows)
    m = DyadicMatrix.from_values(rows)
    if ref.det() == 0:
        with pytest.raises(ValueError):
            m.inverse()
        return
    ref_inv = [[Fraction(int(x.p), int(x.q)) for x in ref.inv().row(i)] for i in range(4)]
    if any(f.denominator & (f.denominator - 1) for row in ref_inv for f in row):
        with pytest.raises(ValueError):
            m.inverse()
        return
    assert m.inverse().to_fractions().tolist() == ref_inv


def test_inverse_rejects_non_dyadic_and_singular():
    with pytest.raises(ValueError, match="dyadic"):
        DyadicMatrix.from_values([[3]]).inverse()
    with pytest.raises(ValueError, match="singular"):
        DyadicMatrix.from_values([[1, 2], [2, 4]]).inverse()


def test_butterfly_inverse_is_half_transpose():
    i4, j4 = np.eye(4, dtype=int), np.fliplr(np.eye(4, dtype=int))
    b8 = DyadicMatrix(np.block([[i4, j4], [j4, -i4]]))
    assert b8.inverse() == b8.T * Fraction(1, 2)


def test_large_numerators_stay_exact():
    big = DyadicMatrix.from_values([[2**40, 1], [0, 2**40]])
    sq = big @ big
    assert sq[0, 0] == Dyadic(2**80)
    assert sq[0, 1] == Dyadic(2**41)


def test_read_only_storage():
    m = DyadicMatrix.identity(3)
    with pytest.raises(ValueError):
        m.numerators[0, 0] = 5


def test_permutation_and_structure_predicates():
    p = DyadicMatrix.permutation([2, 0, 1])
    assert p.is_permutation()
    assert (p @ p.T) == DyadicMatrix.identity(3)
    assert not DyadicMatrix.from_values([[1, 1], [0, 1]]).is_permutation()
    assert DyadicMatrix.from_values([[2, 0], [0, Fraction(1, 2)]]).is_diagonal()


def test_block_diag_and_helpers():
    a = DyadicMatrix.from_values([[1, 2], [3, 4]])
    b = DyadicMatrix.from_values([[Fraction(1, 2)]])
    d = block_diag(a, b)
    assert d.shape == (3, 3)
    assert d.to_fractions().tolist() == [[1, 2, 0], [3, 4, 0], [0, 0, Fraction(1, 2)]]
    assert frobenius_norm_sq(a) == 30.0
    assert np.array_equal(np.asarray(diag_of(a).to_real()), np.diag([1.0, 4.0]))
    with pytest.raises(ValueError):
        diag_of(DyadicMatrix.zeros(2, 3))
    assert np.allclose(matmul(a, a).to_real(), a.to_real() @ a.to_real())


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 12), st.integers(0, 2**32 - 1))
def test_jacobi_matches_numpy_eigh(n, seed):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n, n))
    sym = x + x.T
    values, vectors = jacobi_eigen(sym)
    ref = np.linalg.eigvalsh(sym)[::-1]
    assert np.allclose(values, ref, atol=1e-9)
    assert np.all(np.diff(values) <= 1e-12)
    assert np.allclose(vectors.T @ vectors, np.eye(n), atol=1e-10)
    assert np.allclose(sym @ vectors, vectors * values, atol=1e-9)
    # largest-magnitude component of each eigenvector is positive
    idx = np.argmax(np.abs(vectors), axis=0)
    assert np.all(vectors[idx, np.arange(n)] > 0)


def test_jacobi_rejects_asymmetric():
    with pytest.raises(ValueError):
        jacobi_eigen(np.array([[1.0, 2.0], [0.0, 1.0]]))
