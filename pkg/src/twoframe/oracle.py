"""Exhaustive smallest-singular-value evaluation over every row pair.

Ground truth for the selection: nothing here uses the proof machinery.
"""
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import SizeError
from .frames import RowPair
from .kernels import sigma2_batch

__all__ = ["PairTable", "best_pair_bruteforce", "DEFAULT_CAP", "MATERIALIZE_MAX"]

DEFAULT_CAP = 20000
# above this row count the C(n, 2) values are recomputed on demand, not stored
MATERIALIZE_MAX = 4096


def _row_sigma2(arr, i):
    x, y = arr[:, 0], arr[:, 1]
    return sigma2_batch(x[i], y[i], x[i + 1:], y[i + 1:])


def condensed_index(n, i, j):
    """Position of pair ``(i, j)``, ``i < j``, in lexicographic pair order."""
    return i * (2 * n - i - 1) // 2 + (j - i - 1)


@dataclass
class PairTable:
    """All ``C(n, 2)`` pair values with the maximum and its lexicographically first argmax.

    ``values`` is the condensed array in lexicographic ``(i, j)`` order, or
    ``None`` when the table was too large to store; :meth:`entries` works
    in both cases.
    """

    n: int
    max_sigma2: float
    argmax: RowPair
    values: Optional[np.ndarray]
    _arr: np.ndarray

    @property
    def size(self):
        return self.n * (self.n - 1) // 2

    @property
    def materialized(self):
        return self.values is not None

    def _row_values(self, i):
        if self.values is not None:
            start = condensed_index(self.n, i, i + 1)
            return self.values[start:start + self.n - i - 1]
        return _row_sigma2(self._arr, i)

    def value(self, i, j):
        if i > j:
            i, j = j, i
        return float(self._row_values(i)[j - i - 1])

    def entries(self):
        """Yield ``(RowPair, sigma2)`` in lexicographic order."""
        for i in range(self.n - 1):
            for k, s in enumerate(self._row_values(i)):
                yield RowPair(i, i + 1 + k), float(s)

    def maximizers(self, tol=1e-12):
        """Pairs with ``sigma2 >= max_sigma2 - tol``."""
        out = []
        thr = self.max_sigma2 - tol
        for i in range(self.n - 1):
            for k in np.flatnonzero(self._row_values(i) >= thr):
                out.append(RowPair(i, i + 1 + int(k)))
        return out

    def quantiles(self, qs=(0.0, 0.25, 0.5, 0.75, 1.0)):
        if self.values is not None:
            return [float(v) for v in np.quantile(self.values, qs)]
        return None


def best_pair_bruteforce(frame, cap=DEFAULT_CAP, materialize=None):
    """Evaluate ``sigma2`` on every row pair of ``frame``.

    Raises
    ------
    SizeError
        ``frame.n`` exceeds ``cap``.
    """
    arr = np.asarray(frame.array)
    n = arr.shape[0]
    if n > cap:
        raise SizeError("n=%d exceeds the oracle cap %d" % (n, cap))
    if materialize is None:
        materialize = n <= MATERIALIZE_MAX
    values = np.empty(n * (n - 1) // 2) if materialize else None
    best, bi, bj = -math.inf, -1, -1
    pos = 0
    for i in range(n - 1):
        row = _row_sigma2(arr, i)
        if values is not None:
            values[pos:pos + row.size] = row
            pos += row.size
        k = int(np.argmax(row))
        if row[k] > best:
            best, bi, bj = float(row[k]), i, i + 1 + k
    return PairTable(n=n, max_sigma2=best, argmax=RowPair(bi, bj), values=values, _arr=arr)
