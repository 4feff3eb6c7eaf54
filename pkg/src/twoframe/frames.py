"""Validated ``n x 2`` matrices with orthonormal columns.

Rows are addressed with 0-based indices; row ``i`` is ``(x_i, y_i)``.
"""
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, NotOrthonormalError, SizeError
from .kernels import Mat2

__all__ = [
    "OrthonormalFrame",
    "RowPair",
    "default_tol_ortho",
    "ortho_residuals",
    "validate_frame",
    "reorthonormalize",
    "row_norm_sq",
    "submatrix",
]


def default_tol_ortho(n):
    return 1e-10 * math.sqrt(n)


def ortho_residuals(arr):
    """``(|sum x^2 - 1|, |sum y^2 - 1|, |sum x*y|)`` for an ``(n, 2)`` array."""
    x, y = arr[:, 0], arr[:, 1]
    return (abs(float(x @ x) - 1.0), abs(float(y @ y) - 1.0), abs(float(x @ y)))


@dataclass(frozen=True)
class RowPair:
    """Ordered row-index pair with ``0 <= i < j``."""

    i: int
    j: int

    def __post_init__(self):
        i, j = int(self.i), int(self.j)
        if not 0 <= i < j:
            raise InvalidInputError("row pair must satisfy 0 <= i < j, got (%d, %d)" % (i, j))
        object.__setattr__(self, "i", i)
        object.__setattr__(self, "j", j)

    def as_list(self):
        return [self.i, self.j]

    def __iter__(self):
        return iter((self.i, self.j))


class OrthonormalFrame:
    """Immutable ``n x 2`` matrix whose columns passed the orthonormality test.

    Construct through :func:`validate_frame`. The underlying array is
    read-only; ``residuals`` keeps the measured column residuals and
    ``reorthonormalized`` records whether the repair path ran.
    """

    __slots__ = ("_a", "residuals", "tol_ortho", "reorthonormalized")

    def __init__(self, arr, residuals, tol_ortho, reorthonormalized=False):
        a = np.array(arr, dtype=float, order="C")
        a.setflags(write=False)
        self._a = a
        self.residuals = tuple(residuals)
        self.tol_ortho = float(tol_ortho)
        self.reorthonormalized = bool(reorthonormalized)

    @property
    def n(self):
        return self._a.shape[0]

    @property
    def array(self):
        return self._a

    @property
    def x(self):
        return self._a[:, 0]

    @property
    def y(self):
        return self._a[:, 1]

    @property
    def rows(self):
        return [(float(a), float(b)) for a, b in self._a]

    def row(self, i):
        _check_index(self, i)
        return (float(self._a[i, 0]), float(self._a[i, 1]))

    def norms_sq(self):
        x, y = self.x, self.y
        return x * x + y * y

    def max_residual(self):
        return max(self.residuals)

    def __len__(self):
        return self.n

    def __eq__(self, other):
        if not isinstance(other, OrthonormalFrame):
            return NotImplemented
        return self._a.shape == other._a.shape and bool(np.array_equal(self._a, other._a))

    def __hash__(self):
        return hash(self._a.tobytes())

    def __repr__(self):
        return "OrthonormalFrame(n=%d, max_residual=%.2e)" % (self.n, self.max_residual())


def _as_raw(raw):
    arr = np.array(raw, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise InvalidInputError("expected an (n, 2) array, got shape %s" % (arr.shape,))
    if arr.shape[0] < 2:
        raise SizeError("a frame needs at least 2 rows, got %d" % arr.shape[0])
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("frame entries must be finite")
    return arr


def validate_frame(raw, tol_ortho=None, repair=False):
    """Check orthonormality of the columns of ``raw`` and wrap it.

    Parameters
    ----------
    raw : array_like, shape (n, 2)
    tol_ortho : float, optional
        Residual tolerance; defaults to ``1e-10 * sqrt(n)``.
    repair : bool
        If the check fails, re-orthonormalise the columns (two-column
        Gram-Schmidt) and validate again instead of raising immediately.

    Raises
    ------
    SizeError
        Fewer than two rows.
    NotOrthonormalError
        A residual exceeds ``tol_ortho``.
    """
    arr = _as_raw(raw)
    n = arr.shape[0]
    tol = default_tol_ortho(n) if tol_ortho is None else float(tol_ortho)
    res = ortho_residuals(arr)
    if max(res) <= tol:
        return OrthonormalFrame(arr, res, tol)
    if repair:
        fixed = reorthonormalize(arr)
        res2 = ortho_residuals(fixed)
        if max(res2) <= tol:
            return OrthonormalFrame(fixed, res2, tol, reorthonormalized=True)
    raise NotOrthonormalError(res, tol)


def reorthonormalize(arr):
    """Two-column Gram-Schmidt: normalise column 1, orthogonalise and normalise column 2.

    The projection is applied twice, which is enough for full working
    accuracy with two columns.
    """
    arr = np.array(arr, dtype=float)
    q1 = arr[:, 0]
    n1 = math.sqrt(float(q1 @ q1))
    if n1 == 0.0:
        raise InvalidInputError("first column is zero")
    q1 = q1 / n1
    v = arr[:, 1]
    for _ in range(2):
        v = v - float(q1 @ v) * q1
    n2 = math.sqrt(float(v @ v))
    if n2 == 0.0:
        raise InvalidInputError("columns are linearly dependent")
    out = np.empty_like(arr)
    out[:, 0] = q1
    out[:, 1] = v / n2
    return out


def _check_index(frame, i):
    if not 0 <= i < frame.n:
        raise IndexError("row index %d out of range for n=%d" % (i, frame.n))


def row_norm_sq(frame, i):
    """``x_i^2 + y_i^2``."""
    _check_index(frame, i)
    x, y = frame.array[i]
    return float(x * x + y * y)


def submatrix(frame, pair):
    """The 2x2 matrix whose rows are rows ``pair.i`` and ``pair.j`` of the frame."""
    if not isinstance(pair, RowPair):
        pair = RowPair(*pair)
    _check_index(frame, pair.i)
    _check_index(frame, pair.j)
    a = frame.array
    return Mat2(float(a[pair.i, 0]), float(a[pair.i, 1]), float(a[pair.j, 0]), float(a[pair.j, 1]))
