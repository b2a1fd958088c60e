import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from approxdct.catalog import get_transform
from approxdct.linalg import DyadicMatrix
from approxdct.orthogonalization import (
    ScaledApproximation,
    deviation_from_diagonality,
    orthogonality_check,
    polar_diag_scaling,
    scaled_approximation,
)
from approxdct.transforms import TransformKind, baseline_low_complexity, build_t8

r = math.sqrt


def test_printed_scaling_matrices():
    t_sign = build_t8(TransformKind.CHEN_SIGN)[0].dense()
    t_round = build_t8(TransformKind.CHEN_ROUND)[0].dense()
    s_sign = [1 / r(8), 1 / r(12)] * 4
    s_round = [1 / r(8), 1 / r(6), 1 / 2, 1 / r(12), 1 / r(8), 1 / r(12), 1 / 2, 1 / r(6)]
    assert np.allclose(np.diag(polar_diag_scaling(t_sign)), s_sign, atol=1e-15)
    assert np.allclose(np.diag(polar_diag_scaling(t_round)), s_round, atol=1e-15)


def test_deviation_from_diagonality_values():
    for kind, expected in ((TransformKind.CHEN_SIGN, 0.0714), (TransformKind.CHEN_ROUND, 0.0579)):
        t = build_t8(kind)[0].dense()
        assert deviation_from_diagonality(t @ t.T) == pytest.approx(expected, abs=5e-4)
    sdct = baseline_low_complexity(TransformKind.SDCT)
    assert deviation_from_diagonality(sdct @ sdct.T) == pytest.approx(0.20, abs=5e-3)


def test_deviation_edge_cases():
    assert deviation_from_diagonality(np.diag([1.0, 2.0])) == 0.0
    with pytest.raises(ValueError):
        deviation_from_diagonality(np.zeros((3, 3)))


def test_orthogonality_check():
    assert orthogonality_check(baseline_low_complexity(TransformKind.WHT))
    assert not orthogonality_check(build_t8(TransformKind.CHEN_ROUND)[0].dense())


@pytest.mark.parametrize("name", ["chen-sign", "chen-round", "sdct", "bas", "wht", "ht", "chen-round-16", "chen-sign-32"])
def test_scaled_rows_have_unit_norm_and_inverse_holds(name):
    t = get_transform(name)
    n = t.size
    assert np.allclose(np.diag(t.approx @ t.approx.T), 1.0, atol=1e-12)
    assert np.allclose(t.inverse_approx @ t.approx, np.eye(n), atol=1e-12)
    assert np.allclose(t.approx, t.scaling @ np.asarray(_real(t.low_complexity)), atol=1e-15)


def _real(m):
    return m.to_real() if isinstance(m, DyadicMatrix) else m


def test_singular_input_is_rejected():
    with pytest.raises(ValueError):
        polar_diag_scaling(DyadicMatrix.from_values([[1, 1], [1, 1]]))
    with pytest.raises(ValueError):
        polar_diag_scaling(np.ones((3, 3)))
    with pytest.raises(ValueError):
        polar_diag_scaling(np.ones((2, 3)))


def test_orthonormal_wrapper():
    q = ScaledApproximation.orthonormal(np.eye(4), "id")
    assert q.size == 4
    assert np.array_equal(q.inverse_approx, np.eye(4))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.lists(st.integers(-2, 2), min_size=5, max_size=5), min_size=5, max_size=5))
def test_scaling_normalizes_any_full_rank_matrix(rows):
    m = np.array(rows, dtype=float)
    if abs(np.linalg.det(m)) < 1e-9:
        return
    s = scaled_approximation(DyadicMatrix.from_values(rows))
    assert np.allclose(np.linalg.norm(s.approx, axis=1), 1.0)
    assert np.allclose(s.approx @ s.inverse_approx, np.eye(5), atol=1e-9)
