import math

import numpy as np
import pytest

from twoframe.errors import InvalidInputError, NotOrthonormalError, SizeError
from twoframe.frames import (
    RowPair,
    default_tol_ortho,
    reorthonormalize,
    row_norm_sq,
    submatrix,
    validate_frame,
)
from twoframe.generators import random_frame, tightness_frame, tightness_params
from twoframe.kernels import Mat2


def test_identity_frame(identity2):
    assert identity2.n == 2
    assert identity2.residuals == (0.0, 0.0, 0.0)


def test_tightness_residuals(tight4):
    assert tight4.max_residual() <= 1e-15


def test_duplicate_rows_rejected():
    with pytest.raises(NotOrthonormalError) as info:
        validate_frame([[1.0, 0.0], [1.0, 0.0]])
    xx, yy, xy = info.value.residuals
    assert xx == 1.0 and yy == 1.0 and xy == 0.0


def test_size_and_shape_errors():
    with pytest.raises(SizeError):
        validate_frame([[1.0, 0.0]])
    with pytest.raises(InvalidInputError):
        validate_frame([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    with pytest.raises(InvalidInputError):
        validate_frame([[math.nan, 0.0], [0.0, 1.0]])


def test_tolerance_scales_with_n():
    assert default_tol_ortho(100) == pytest.approx(1e-9)
    f = random_frame(100, 3)
    arr = np.array(f.array)
    arr[:, 0] *= 1.0 + 4e-10
    validate_frame(arr)
    with pytest.raises(NotOrthonormalError):
        validate_frame(arr, tol_ortho=1e-10)


def test_repair_path():
    f = random_frame(30, 1)
    arr = np.array(f.array)
    arr[:, 1] += 1e-6 * arr[:, 0]
    with pytest.raises(NotOrthonormalError):
        validate_frame(arr)
    g = validate_frame(arr, repair=True)
    assert g.reorthonormalized
    assert g.max_residual() <= 1e-14


def test_reorthonormalize_degenerate():
    with pytest.raises(InvalidInputError):
        reorthonormalize(np.array([[1.0, 2.0], [2.0, 4.0]]))


def test_frame_is_read_only(tight4):
    with pytest.raises(ValueError):
        tight4.array[0, 0] = 1.0


def test_row_norms(identity2, tight4):
    assert row_norm_sq(identity2, 0) == 1.0
    assert row_norm_sq(tight4, 0) == pytest.approx(3 / 8, abs=2.3e-16)
    assert row_norm_sq(tight4, 2) == pytest.approx(5 / 8, abs=2.3e-16)
    with pytest.raises(IndexError):
        row_norm_sq(tight4, 4)


def test_norms_sum_to_two(rand_frame):
    total = sum(row_norm_sq(rand_frame, i) for i in range(rand_frame.n))
    assert abs(total - 2.0) <= 2 * rand_frame.tol_ortho


def test_submatrix(identity2, tight4):
    assert submatrix(identity2, RowPair(0, 1)) == Mat2.identity()
    p = tightness_params(4)
    assert submatrix(tight4, RowPair(2, 3)) == Mat2(p.b, p.c, p.b, -p.c)
    with pytest.raises(IndexError):
        submatrix(tight4, RowPair(1, 9))


def test_submatrix_matches_rows(rand_frame):
    a = rand_frame.array
    n = rand_frame.n
    for i in range(n - 1):
        m = submatrix(rand_frame, (i, n - 1))
        assert m == (a[i, 0], a[i, 1], a[n - 1, 0], a[n - 1, 1])


@pytest.mark.parametrize("i,j", [(1, 1), (2, 1), (-1, 2)])
def test_rowpair_invariant(i, j):
    with pytest.raises(InvalidInputError):
        RowPair(i, j)


def test_frame_equality():
    assert tightness_frame(5) == tightness_frame(5)
    assert tightness_frame(5) != tightness_frame(6)
