"""Small dense kernels: 2x2 singular values, Givens rotations, Gram matrices.

Scalar routines work on plain Python floats; :func:`sigma2_batch` is the
vectorised twin used by the pair scans and performs the identical sequence
of IEEE operations, so both paths agree bit for bit.
"""
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InvalidInputError

__all__ = [
    "Mat2",
    "Rotation2",
    "SingularPair",
    "singular_values_2x2",
    "sigma2",
    "sigma2_batch",
    "givens_zeroing_second",
    "apply_rotation",
    "rotate_rows",
    "gram_2x2",
    "sigma2_submultiplicative_check",
]

ROTATION_TOL = 1e-14
SUBMULT_SLACK = 1e-12


class Mat2(NamedTuple):
    """Row-major 2x2 real matrix ``[[a11, a12], [a21, a22]]``."""

    a11: float
    a12: float
    a21: float
    a22: float

    @classmethod
    def from_rows(cls, r1, r2):
        return cls(float(r1[0]), float(r1[1]), float(r2[0]), float(r2[1]))

    @classmethod
    def from_array(cls, arr):
        arr = np.asarray(arr, dtype=float)
        if arr.shape != (2, 2):
            raise InvalidInputError("expected a 2x2 array, got shape %s" % (arr.shape,))
        return cls(*(float(v) for v in arr.ravel()))

    @classmethod
    def identity(cls):
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def diag(cls, d1, d2):
        return cls(float(d1), 0.0, 0.0, float(d2))

    def det(self):
        return self.a11 * self.a22 - self.a12 * self.a21

    def __matmul__(self, other):
        return Mat2(
            self.a11 * other.a11 + self.a12 * other.a21,
            self.a11 * other.a12 + self.a12 * other.a22,
            self.a21 * other.a11 + self.a22 * other.a21,
            self.a21 * other.a12 + self.a22 * other.a22,
        )

    def to_array(self):
        return np.array([[self.a11, self.a12], [self.a21, self.a22]])


@dataclass(frozen=True)
class Rotation2:
    """Plane rotation ``P = [[c, -s], [s, c]]`` acting on row vectors from the right."""

    c: float
    s: float

    def __post_init__(self):
        if not (math.isfinite(self.c) and math.isfinite(self.s)):
            raise InvalidInputError("rotation entries must be finite")
        if abs(self.c * self.c + self.s * self.s - 1.0) > ROTATION_TOL:
            raise InvalidInputError(
                "c^2 + s^2 = %r is not 1 within %g" % (self.c * self.c + self.s * self.s, ROTATION_TOL)
            )

    @classmethod
    def identity(cls):
        return cls(1.0, 0.0)

    def as_mat2(self):
        return Mat2(self.c, -self.s, self.s, self.c)

    def inverse(self):
        return Rotation2(self.c, -self.s)


class SingularPair(NamedTuple):
    sigma1: float
    sigma2: float


def _as_mat2(m):
    if isinstance(m, Mat2):
        vals = m
    else:
        arr = np.asarray(m, dtype=float)
        if arr.shape != (2, 2):
            raise InvalidInputError("expected a 2x2 matrix, got shape %s" % (arr.shape,))
        vals = Mat2(*(float(v) for v in arr.ravel()))
    if not all(math.isfinite(v) for v in vals):
        raise InvalidInputError("matrix entries must be finite: %r" % (tuple(vals),))
    return vals


def _discriminant(a11, a12, a21, a22):
    # T^2 - 4 D^2 as (T - 2D)(T + 2D); both factors are sums of squares
    dm, sp = a11 - a22, a12 + a21
    ap, sm = a11 + a22, a12 - a21
    return (dm * dm + sp * sp) * (ap * ap + sm * sm)


def singular_values_2x2(m):
    """Singular values of a real 2x2 matrix.

    Parameters
    ----------
    m : Mat2 or array_like, shape (2, 2)

    Returns
    -------
    SingularPair
        ``(sigma1, sigma2)`` with ``sigma1 >= sigma2 >= 0``.

    Notes
    -----
    With ``T = ||m||_F^2`` and ``D = det m`` the larger value is
    ``sqrt((T + sqrt(T^2 - 4 D^2)) / 2)`` and the smaller one is recovered as
    ``|D| / sigma1``, which avoids cancellation when ``sigma2 << sigma1``.
    The discriminant is formed as ``(T - 2D)(T + 2D)`` so that nearly equal
    singular values keep full accuracy.
    """
    a11, a12, a21, a22 = _as_mat2(m)
    t = a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22
    d = a11 * a22 - a12 * a21
    disc = _discriminant(a11, a12, a21, a22)
    if disc < 0.0:
        disc = 0.0
    s1 = math.sqrt((t + math.sqrt(disc)) / 2.0)
    s2 = abs(d) / s1 if s1 > 0.0 else 0.0
    # |d|/s1 can exceed s1 by an ulp when the two values coincide
    if s2 > s1:
        s2 = s1
    return SingularPair(s1, s2)


def sigma2(m):
    """Smallest singular value of a 2x2 matrix."""
    return singular_values_2x2(m).sigma2


def sigma2_batch(a11, a12, a21, a22):
    """Vectorised smallest singular value of many 2x2 matrices.

    Arguments are broadcastable float arrays holding the four entries.
    """
    a11, a12, a21, a22 = np.broadcast_arrays(
        *(np.asarray(v, dtype=float) for v in (a11, a12, a21, a22))
    )
    t = a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22
    d = a11 * a22 - a12 * a21
    disc = _discriminant(a11, a12, a21, a22)
    disc = np.maximum(disc, 0.0)
    s1 = np.sqrt((t + np.sqrt(disc)) / 2.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        s2 = np.where(s1 > 0.0, np.abs(d) / s1, 0.0)
    return np.minimum(s2, s1)


def givens_zeroing_second(row):
    """Rotation ``P`` with ``(x, y) @ P = (r, 0)``, ``r = hypot(x, y) >= 0``.

    A zero row gets the identity rotation.
    """
    x, y = float(row[0]), float(row[1])
    r = math.hypot(x, y)
    if r <= 1e-300:
        return Rotation2.identity()
    c, s = x / r, y / r
    # renormalise so the rotation invariant holds to the last bit we can get
    nrm = math.hypot(c, s)
    return Rotation2(c / nrm, s / nrm)


def apply_rotation(row, rot):
    """Right-multiply a single row ``(x, y)`` by ``rot``."""
    x, y = float(row[0]), float(row[1])
    return (x * rot.c + y * rot.s, -x * rot.s + y * rot.c)


def rotate_rows(arr, rot):
    """Right-multiply every row of an ``(n, 2)`` array by ``rot``."""
    arr = np.asarray(arr, dtype=float)
    out = np.empty_like(arr)
    x, y = arr[:, 0], arr[:, 1]
    out[:, 0] = x * rot.c + y * rot.s
    out[:, 1] = -x * rot.s + y * rot.c
    return out


def gram_2x2(r1, r2):
    """Row Gram matrix ``[[<r1,r1>, <r1,r2>], [<r2,r1>, <r2,r2>]]``."""
    x1, y1 = float(r1[0]), float(r1[1])
    x2, y2 = float(r2[0]), float(r2[1])
    off = x1 * x2 + y1 * y2
    return Mat2(x1 * x1 + y1 * y1, off, off, x2 * x2 + y2 * y2)


def sigma2_submultiplicative_check(y, z):
    """Whether ``sigma2(y @ z) >= sigma2(y) * sigma2(z)`` up to a 1e-12 slack."""
    y, z = _as_mat2(y), _as_mat2(z)
    return sigma2(y @ z) >= sigma2(y) * sigma2(z) - SUBMULT_SLACK
