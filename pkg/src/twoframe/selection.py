"""Certified selection of a 2x2 row-submatrix with ``sigma2 >= 1/sqrt(n)``.

The search follows the induction on ``n``:

* some row has squared norm ``b^2 <= 1/n``: rotate it onto ``(b, 0)``,
  delete it, rescale the first column by ``1/sqrt(1 - b^2)`` and recurse on
  the resulting ``(n-1) x 2`` frame (a *Case A* step);
* every row is longer: pick the pair minimising
  ``M_ij = <w_i, w_j> - z_i z_j + 2/n^2``; a nonpositive value certifies the
  pair (*Case B*);
* ``n = 2``: the frame is an orthogonal matrix, ``sigma2 = 1``.

Each Case A step can only shrink the bound by the factor ``1/t``, and
``(1 - b^2)/(n - 1) >= 1/n`` closes the induction.
"""
import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .errors import CertificationError, InvalidInputError, WrongCaseError
from .frames import (
    OrthonormalFrame,
    RowPair,
    default_tol_ortho,
    ortho_residuals,
    reorthonormalize,
    submatrix,
)
from .kernels import Rotation2, givens_zeroing_second, rotate_rows, sigma2, sigma2_batch
from .proofaudit import (
    CASE_B_MARGIN_TOL,
    CASE_B_PREMISE_SLACK,
    audit_invariants,
    min_offdiag_margin,
    pair_margin,
)

__all__ = [
    "BASE_CASE",
    "CASE_B_PAIR",
    "FALLBACK_SCAN",
    "CaseAStep",
    "Certificate",
    "Selection",
    "select_pair",
    "case_a_reduce",
    "case_b_pair",
    "verify_selection",
    "certificate_problems",
    "replay_certificate",
    "best_pair_scan",
]

BASE_CASE = "BaseCase"
CASE_B_PAIR = "CaseBPair"
FALLBACK_SCAN = "FallbackScan"
TERMINALS = (BASE_CASE, CASE_B_PAIR, FALLBACK_SCAN)

BOUND_SLACK = 1e-10
SIGMA_MATCH_TOL = 1e-12
CASE_A_SLACK = 1e-12


@dataclass(frozen=True)
class CaseAStep:
    """One deletion: ``removed_row`` indexes the original frame."""

    removed_row: int
    b_sq: float
    t_sq: float
    rotation: Rotation2
    n_level: int
    reorthonormalized: bool = False

    def to_dict(self):
        return {
            "removed_row": self.removed_row,
            "b_sq": self.b_sq,
            "t_sq": self.t_sq,
            "rotation": {"c": self.rotation.c, "s": self.rotation.s},
            "n_level": self.n_level,
            "reorthonormalized": self.reorthonormalized,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            removed_row=int(d["removed_row"]),
            b_sq=float(d["b_sq"]),
            t_sq=float(d["t_sq"]),
            rotation=Rotation2(float(d["rotation"]["c"]), float(d["rotation"]["s"])),
            n_level=int(d["n_level"]),
            reorthonormalized=bool(d["reorthonormalized"]),
        )


@dataclass(frozen=True)
class Certificate:
    steps: List[CaseAStep]
    terminal: str
    final_pair: RowPair
    sigma2: float
    bound: float
    margin: Optional[float] = None

    def __post_init__(self):
        if self.terminal not in TERMINALS:
            raise InvalidInputError("unknown terminal %r" % (self.terminal,))

    @property
    def n_final(self):
        return self.steps[-1].n_level - 1 if self.steps else None


@dataclass(frozen=True)
class Selection:
    pair: RowPair
    sigma2: float
    certificate: Certificate = field(repr=False)

    @property
    def bound(self):
        return self.certificate.bound

    @property
    def terminal(self):
        return self.certificate.terminal

    @property
    def margin(self):
        return self.certificate.margin


def _norms_sq(arr):
    x, y = arr[:, 0], arr[:, 1]
    return x * x + y * y


def _reduce(arr, k, tol, rotation=None, force_reortho=None):
    """Rotate row ``k`` onto the first axis, drop it, rescale column 1.

    Returns ``(reduced, b_sq, t_sq, rotation, reorthonormalized)``.
    """
    x, y = float(arr[k, 0]), float(arr[k, 1])
    b_sq = x * x + y * y
    if b_sq >= 1.0:
        raise InvalidInputError("row %d has squared norm %r >= 1; not a valid frame" % (k, b_sq))
    if rotation is None:
        rotation = givens_zeroing_second((x, y))
    b = rotate_rows(arr, rotation)
    c = np.delete(b, k, axis=0)
    t_sq = 1.0 / (1.0 - b_sq)
    c[:, 0] *= 1.0 / math.sqrt(1.0 - b_sq)
    if force_reortho is None:
        force_reortho = max(ortho_residuals(c)) > tol
    if force_reortho:
        c = reorthonormalize(c)
    return c, b_sq, t_sq, rotation, bool(force_reortho)


def case_a_reduce(frame, i, tol_ortho=None):
    """One reduction step on row ``i`` of ``frame``.

    Returns ``(reduced_frame, step)``; ``step.removed_row`` is ``i``.

    Raises
    ------
    WrongCaseError
        Row ``i`` has squared norm above ``1/n`` (beyond a 1e-12 slack).
    """
    n = frame.n
    if not 0 <= i < n:
        raise IndexError("row index %d out of range for n=%d" % (i, n))
    arr = frame.array
    nsq = float(arr[i, 0] * arr[i, 0] + arr[i, 1] * arr[i, 1])
    if nsq > 1.0 / n + CASE_A_SLACK:
        raise WrongCaseError("row %d has squared norm %r > 1/n = %r" % (i, nsq, 1.0 / n))
    tol = default_tol_ortho(n - 1) if tol_ortho is None else float(tol_ortho)
    c, b_sq, t_sq, rot, reortho = _reduce(arr, i, tol)
    step = CaseAStep(int(i), b_sq, t_sq, rot, n, reortho)
    return OrthonormalFrame(c, ortho_residuals(c), tol, reorthonormalized=reortho), step


def case_b_pair(frame):
    """Off-diagonal pair minimising ``M_ij``; returns ``(RowPair, margin)``.

    A margin ``<= 1e-12`` certifies the pair. Ties go to the
    lexicographically smallest ``(i, j)``.
    """
    arr = frame.array if isinstance(frame, OrthonormalFrame) else np.asarray(frame)
    n = arr.shape[0]
    if float(np.min(_norms_sq(arr))) <= 1.0 / n - CASE_B_PREMISE_SLACK:
        raise WrongCaseError("a row has squared norm <= 1/n; reduce it first")
    margin, i, j = min_offdiag_margin(arr)
    return RowPair(i, j), margin


def best_pair_scan(arr):
    """Pair maximising ``sigma2`` over all rows of ``arr`` (first maximiser wins)."""
    arr = np.asarray(arr)
    n = arr.shape[0]
    x, y = arr[:, 0], arr[:, 1]
    best = (-1.0, -1, -1)
    rows = max(1, (1 << 22) // n)
    for i0 in range(0, n - 1, rows):
        i1 = min(i0 + rows, n - 1)
        s = sigma2_batch(x[i0:i1, None], y[i0:i1, None], x[None, i0:], y[None, i0:])
        s[np.tri(i1 - i0, n - i0, 0, dtype=bool)] = -np.inf
        k = int(np.argmax(s))
        ri, cj = divmod(k, n - i0)
        if s[ri, cj] > best[0]:
            best = (float(s[ri, cj]), i0 + ri, i0 + cj)
    return best


def _tol_for(n, tol_ortho):
    return default_tol_ortho(n) if tol_ortho is None else float(tol_ortho)


def select_pair(frame, tol_ortho=None):
    """Select a row pair whose 2x2 submatrix has ``sigma2 >= 1/sqrt(n)``.

    Parameters
    ----------
    frame : OrthonormalFrame
    tol_ortho : float, optional
        Residual threshold that triggers re-orthonormalisation of reduced
        frames; ``1e-10 * sqrt(n_level)`` by default.

    Returns
    -------
    Selection

    Raises
    ------
    CertificationError
        Neither the proof path nor the exhaustive fallback met the bound
        (within 1e-10).
    """
    n0 = frame.n
    bound = 1.0 / math.sqrt(n0)
    arr = np.array(frame.array)
    idx = np.arange(n0)
    steps = []
    margin = None
    while True:
        n = arr.shape[0]
        if n == 2:
            terminal, li, lj = BASE_CASE, 0, 1
            break
        nsq = _norms_sq(arr)
        k = int(np.argmin(nsq))
        if nsq[k] <= 1.0 / n:
            arr, b_sq, t_sq, rot, reortho = _reduce(arr, k, _tol_for(n - 1, tol_ortho))
            steps.append(CaseAStep(int(idx[k]), b_sq, t_sq, rot, n, reortho))
            idx = np.delete(idx, k)
            continue
        margin, li, lj = min_offdiag_margin(arr)
        if margin <= CASE_B_MARGIN_TOL:
            terminal = CASE_B_PAIR
        else:
            terminal = FALLBACK_SCAN
            _, li, lj = best_pair_scan(arr)
        break

    pair = RowPair(int(idx[li]), int(idx[lj]))
    s2 = sigma2(submatrix(frame, pair))
    if s2 < bound - BOUND_SLACK:
        # proof path lost to rounding; retry on the untouched input
        steps, margin, terminal = [], None, FALLBACK_SCAN
        s2, i, j = best_pair_scan(frame.array)
        pair = RowPair(i, j)
        s2 = sigma2(submatrix(frame, pair))
        if s2 < bound - BOUND_SLACK:
            raise CertificationError(
                "no row pair reaches sigma2 >= 1/sqrt(n) - %g (best %.17g, bound %.17g)"
                % (BOUND_SLACK, s2, bound),
                audit=audit_invariants(frame),
            )
    cert = Certificate(steps, terminal, pair, s2, bound, margin)
    return Selection(pair, s2, cert)


def verify_selection(frame, sel):
    """Recompute ``sigma2`` of the claimed pair from the frame alone.

    True iff it meets ``1/sqrt(n) - 1e-10`` and matches ``sel.sigma2`` to 1e-12.
    The certificate is not consulted.
    """
    try:
        pair = sel.pair if isinstance(sel.pair, RowPair) else RowPair(*sel.pair)
        m = submatrix(frame, pair)
    except (IndexError, InvalidInputError):
        return False
    s2 = sigma2(m)
    return s2 >= 1.0 / math.sqrt(frame.n) - BOUND_SLACK and abs(s2 - float(sel.sigma2)) <= SIGMA_MATCH_TOL


def certificate_problems(frame, cert, tol_ortho=None):
    """Replay ``cert`` against ``frame``; returns a list of problems, empty when it holds.

    Each step is re-applied with its recorded rotation; the recorded
    quantities, the scalar descent inequality and the terminal condition
    are rechecked at the level where they were claimed.
    """
    problems = []
    n0 = frame.n
    arr = np.array(frame.array)
    idx = list(range(n0))
    if abs(cert.bound - 1.0 / math.sqrt(n0)) > 1e-15:
        problems.append("bound %r is not 1/sqrt(%d)" % (cert.bound, n0))
    for s, step in enumerate(cert.steps):
        n = arr.shape[0]
        if step.n_level != n:
            problems.append("step %d: n_level %d, replay level %d" % (s, step.n_level, n))
            return problems
        if step.removed_row not in idx:
            problems.append("step %d: row %d already removed or out of range" % (s, step.removed_row))
            return problems
        k = idx.index(step.removed_row)
        x, y = float(arr[k, 0]), float(arr[k, 1])
        b_sq = x * x + y * y
        if abs(b_sq - step.b_sq) > 1e-15:
            problems.append("step %d: recorded b_sq %r, replayed %r" % (s, step.b_sq, b_sq))
        if b_sq > 1.0 / n + CASE_A_SLACK:
            problems.append("step %d: b_sq %r exceeds 1/n = %r" % (s, b_sq, 1.0 / n))
        if abs(step.t_sq - 1.0 / (1.0 - step.b_sq)) > 1e-13:
            problems.append("step %d: t_sq %r is not 1/(1 - b_sq)" % (s, step.t_sq))
        if (1.0 - b_sq) / (n - 1) < 1.0 / n - 1e-15:
            problems.append("step %d: (1 - b^2)/(n - 1) < 1/n" % s)
        rot = step.rotation
        y_rot = -x * rot.s + y * rot.c
        if abs(y_rot) > 1e-14 * max(math.sqrt(b_sq), 1e-300):
            problems.append("step %d: rotation leaves second entry %r" % (s, y_rot))
        if b_sq >= 1.0:
            return problems
        arr, _, _, _, _ = _reduce(arr, k, _tol_for(n - 1, tol_ortho), rotation=rot,
                                  force_reortho=step.reorthonormalized)
        del idx[k]

    fp = cert.final_pair
    if fp.i not in idx or fp.j not in idx:
        problems.append("final pair %s uses a removed row" % (fp.as_list(),))
        return problems
    li, lj = idx.index(fp.i), idx.index(fp.j)
    n = arr.shape[0]
    if cert.terminal == BASE_CASE:
        if n != 2:
            problems.append("base case claimed at n=%d" % n)
    elif cert.terminal == CASE_B_PAIR:
        m = pair_margin(arr, li, lj)
        if m > CASE_B_MARGIN_TOL:
            problems.append("margin %r of final pair exceeds %g" % (m, CASE_B_MARGIN_TOL))
        if cert.margin is None or abs(m - cert.margin) > 1e-13:
            problems.append("recorded margin %r, replayed %r" % (cert.margin, m))
    else:
        s_level = sigma2(arr[[li, lj]])
        if s_level < 1.0 / math.sqrt(n) - BOUND_SLACK:
            problems.append("fallback pair sigma2 %r below level bound" % s_level)

    s2 = sigma2(submatrix(frame, fp))
    if s2 < cert.bound - BOUND_SLACK:
        problems.append("sigma2 %r below bound %r" % (s2, cert.bound))
    if abs(s2 - cert.sigma2) > SIGMA_MATCH_TOL:
        problems.append("recorded sigma2 %r, recomputed %r" % (cert.sigma2, s2))
    return problems


def replay_certificate(frame, cert, tol_ortho=None):
    return not certificate_problems(frame, cert, tol_ortho)
