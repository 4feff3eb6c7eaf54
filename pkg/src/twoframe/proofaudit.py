"""Proof objects of the all-rows-large case and numerical audits of their identities.

For a frame with rows ``r_i = (x_i, y_i)``::

    w_i  = (x_i^2 - y_i^2, 2 x_i y_i)
    z_i  = ||r_i||^2 - 2/n
    G_ij = <w_i, w_j> - z_i z_j          (G = W W^T - z z^T)
    M_ij = G_ij + 2/n^2

A pair ``i != j`` with ``M_ij <= 0`` has a 2x2 submatrix whose smallest
singular value is at least ``1/sqrt(n)``.
"""
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import WrongCaseError

__all__ = [
    "ProofTensors",
    "SpectralSummary",
    "CheckResult",
    "AuditReport",
    "build_tensors",
    "spectral_summary",
    "jacobi_eigenvalues",
    "pair_margin",
    "min_offdiag_margin",
    "audit_invariants",
    "case_b_existence_check",
    "CASE_B_MARGIN_TOL",
]

CASE_B_MARGIN_TOL = 1e-12
CASE_B_PREMISE_SLACK = 1e-12
JACOBI_TOL = 1e-15
JACOBI_MAX_SWEEPS = 50
RANK_TOL = 1e-13
POLARIZATION_PAIRS = 100
POLARIZATION_SEED = 20240601
# row sums of G are taken entry by entry up to this size, from the factors beyond
DENSE_ROWSUM_MAX = 4096
_BLOCK_ELEMS = 1 << 22


@dataclass
class ProofTensors:
    """``w`` (n, 2), ``z`` (n,), and lazily materialised dense ``G`` and ``M``."""

    w: np.ndarray
    z: np.ndarray

    @property
    def n(self):
        return self.z.shape[0]

    @cached_property
    def G(self):
        w, z = self.w, self.z
        g = np.outer(w[:, 0], w[:, 0]) + np.outer(w[:, 1], w[:, 1]) - np.outer(z, z)
        # exact symmetry: the three outer products are symmetric term by term
        return g

    @cached_property
    def M(self):
        return self.G + 2.0 / (self.n * self.n)

    def stacked(self):
        """``[W | z]`` as an ``(n, 3)`` array."""
        return np.column_stack([self.w, self.z])


@dataclass(frozen=True)
class SpectralSummary:
    lambda1: float
    lambda2: float
    lambda3: float
    trace_G: float
    rank: int = 3


@dataclass(frozen=True)
class CheckResult:
    residual: float
    tolerance: float
    passed: bool

    def to_dict(self):
        return {"residual": self.residual, "tolerance": self.tolerance, "pass": self.passed}


@dataclass
class AuditReport:
    checks: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(c.passed for c in self.checks.values())

    def failed(self):
        return [name for name, c in self.checks.items() if not c.passed]

    def add(self, name, residual, tolerance, passed=None):
        residual = float(residual)
        tolerance = float(tolerance)
        if passed is None:
            passed = residual <= tolerance
        self.checks[name] = CheckResult(residual, tolerance, bool(passed))

    def to_dict(self):
        return {name: c.to_dict() for name, c in self.checks.items()}

    def lines(self):
        for name, c in self.checks.items():
            yield "%-4s %-28s residual=%.3e tol=%.1e" % (
                "PASS" if c.passed else "FAIL", name, c.residual, c.tolerance)


def _wz(arr):
    x, y = arr[:, 0], arr[:, 1]
    n = arr.shape[0]
    w = np.column_stack([x * x - y * y, 2.0 * x * y])
    z = (x * x + y * y) - 2.0 / n
    return w, z


def build_tensors(frame):
    w, z = _wz(np.asarray(frame.array))
    return ProofTensors(w=w, z=z)


def jacobi_eigenvalues(a, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    """Eigenvalues (descending) of a small symmetric matrix by cyclic Jacobi sweeps.

    Iterates until the off-diagonal Frobenius mass is below
    ``tol * ||a||_F`` or ``max_sweeps`` sweeps have run.
    """
    a = np.array(a, dtype=float)
    k = a.shape[0]
    a = 0.5 * (a + a.T)
    scale = math.sqrt(float(np.sum(a * a)))
    for _ in range(max_sweeps):
        off = math.sqrt(float(np.sum(np.triu(a, 1) ** 2)) * 2.0)
        if off <= tol * scale or off == 0.0:
            break
        for p in range(k - 1):
            for q in range(p + 1, k):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rot = np.eye(k)
                rot[p, p] = rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                a = rot.T @ a @ rot
                a[p, q] = a[q, p] = 0.0
    return np.sort(np.diag(a))[::-1]


def _range_basis(v, rank_tol=RANK_TOL):
    """Orthonormal basis of the column span of ``v`` by pivoted Gram-Schmidt."""
    cols = [np.array(v[:, k], dtype=float) for k in range(v.shape[1])]
    ref = max(math.sqrt(float(c @ c)) for c in cols)
    basis = []
    remaining = list(range(len(cols)))
    while remaining and ref > 0.0:
        norms = [math.sqrt(float(cols[k] @ cols[k])) for k in remaining]
        best = int(np.argmax(norms))
        if norms[best] <= rank_tol * ref:
            break
        k = remaining.pop(best)
        q = cols[k] / norms[best]
        for _ in range(2):
            for b in basis:
                q = q - float(b @ q) * b
            q = q / math.sqrt(float(q @ q))
        basis.append(q)
        for m in remaining:
            for _ in range(2):
                cols[m] = cols[m] - float(q @ cols[m]) * q
    if not basis:
        return np.zeros((v.shape[0], 0))
    return np.column_stack(basis)


def spectral_summary(t):
    """Three largest eigenvalues of ``G`` and its trace, in O(n).

    ``G = V diag(1, 1, -1) V^T`` with ``V = [W | z]``; with ``Q`` an
    orthonormal basis of span ``V`` the nonzero spectrum of ``G`` is that of
    ``Q^T G Q = C diag(1, 1, -1) C^T`` where ``C = Q^T V``.
    """
    v = t.stacked()
    q = _range_basis(v)
    r = q.shape[1]
    if r:
        c = q.T @ v
        small = c @ np.diag([1.0, 1.0, -1.0]) @ c.T
        eig = list(jacobi_eigenvalues(small))
    else:
        eig = []
    eig += [0.0] * max(t.n - r, 0)
    eig += [0.0] * max(3 - len(eig), 0)
    eig.sort(reverse=True)
    w, z = t.w, t.z
    trace = float(np.sum(w[:, 0] * w[:, 0] + w[:, 1] * w[:, 1] - z * z))
    return SpectralSummary(float(eig[0]), float(eig[1]), float(eig[2]), trace, r)


def pair_margin(frame_or_arr, i, j):
    """``M_ij`` for a single pair."""
    arr = np.asarray(getattr(frame_or_arr, "array", frame_or_arr))
    n = arr.shape[0]
    xi, yi = float(arr[i, 0]), float(arr[i, 1])
    xj, yj = float(arr[j, 0]), float(arr[j, 1])
    wi = (xi * xi - yi * yi, 2.0 * xi * yi)
    wj = (xj * xj - yj * yj, 2.0 * xj * yj)
    zi = (xi * xi + yi * yi) - 2.0 / n
    zj = (xj * xj + yj * yj) - 2.0 / n
    return (wi[0] * wj[0] + wi[1] * wj[1]) - zi * zj + 2.0 / (n * n)


def min_offdiag_margin(frame_or_arr):
    """Minimum of ``M_ij`` over ``i < j`` with its lexicographically first argmin.

    Returns ``(margin, i, j)``. Row blocks are scanned in order with
    elementwise arithmetic only, so the result is deterministic.
    """
    arr = np.asarray(getattr(frame_or_arr, "array", frame_or_arr))
    n = arr.shape[0]
    w, z = _wz(arr)
    w0, w1 = w[:, 0], w[:, 1]
    shift = 2.0 / (n * n)
    rows = max(1, _BLOCK_ELEMS // n)
    best = (math.inf, -1, -1)
    for i0 in range(0, n - 1, rows):
        i1 = min(i0 + rows, n - 1)
        blk = (w0[i0:i1, None] * w0[None, i0:] + w1[i0:i1, None] * w1[None, i0:]) \
            - z[i0:i1, None] * z[None, i0:] + shift
        blk[np.tri(i1 - i0, n - i0, 0, dtype=bool)] = np.inf
        k = int(np.argmin(blk))
        ri, cj = divmod(k, n - i0)
        val = float(blk[ri, cj])
        if val < best[0]:
            best = (val, i0 + ri, i0 + cj)
    return best


def _g_rowsums(w, z):
    n = z.shape[0]
    if n > DENSE_ROWSUM_MAX:
        sw = w.sum(axis=0)
        return w @ sw - z * z.sum()
    g = np.outer(w[:, 0], w[:, 0]) + np.outer(w[:, 1], w[:, 1]) - np.outer(z, z)
    return g.sum(axis=1)


def audit_invariants(frame, seed=POLARIZATION_SEED):
    """Evaluate the eleven proof identities on ``frame``; failures become report entries."""
    arr = np.asarray(frame.array)
    n = arr.shape[0]
    x, y = arr[:, 0], arr[:, 1]
    nsq = x * x + y * y
    t = build_tensors(frame)
    w, z = t.w, t.z
    rep = AuditReport()

    rep.add("row_norms_sum", abs(float(nsq.sum()) - 2.0), 1e-12 * n)
    wn = w[:, 0] * w[:, 0] + w[:, 1] * w[:, 1]
    rep.add("w_norm_identity", float(np.max(np.abs(wn - nsq * nsq))), 1e-13)
    rep.add("w_sum_zero", float(np.max(np.abs(w.sum(axis=0)))), 1e-12)
    rep.add("z_sum_zero", abs(float(z.sum())), 1e-12)

    g1 = _g_rowsums(w, z)
    rep.add("G_annihilates_ones", float(np.max(np.abs(g1))), 1e-11 * n)
    m1 = g1 + n * (2.0 / (n * n))
    rep.add("M_ones_eigenvalue", float(np.max(np.abs(m1 - 2.0 / n))), 1e-11 * n)

    spec = spectral_summary(t)
    rep.add("trace_G", abs(spec.trace_G - 4.0 / n), 1e-12 * n)
    rep.add("lambda3_nonpositive", max(spec.lambda3, 0.0), 1e-12)
    rep.add("lambda1_lower_bound", max(2.0 / n - spec.lambda1, 0.0), 1e-12)

    rng = np.random.Generator(np.random.PCG64(seed))
    ii = rng.integers(0, n, size=POLARIZATION_PAIRS)
    jj = rng.integers(0, n, size=POLARIZATION_PAIRS)
    dots = x[ii] * x[jj] + y[ii] * y[jj]
    rhs = 0.5 * nsq[ii] * nsq[jj] + 0.5 * (w[ii, 0] * w[jj, 0] + w[ii, 1] * w[jj, 1])
    rep.add("polarization_identity", float(np.max(np.abs(dots * dots - rhs))), 1e-13)

    m_diag = wn - z * z + 2.0 / (n * n)
    rep.add("M_diagonal_formula",
            float(np.max(np.abs(m_diag - ((4.0 / n) * nsq - 2.0 / (n * n))))), 1e-13)
    return rep


def case_b_premise(frame):
    """Whether every squared row norm exceeds ``1/n`` (with a 1e-12 slack)."""
    return bool(np.min(frame.norms_sq()) > 1.0 / frame.n - CASE_B_PREMISE_SLACK)


def case_b_existence_check(frame):
    """True iff some off-diagonal ``M_ij <= 1e-12``; requires the all-rows-large premise."""
    if not case_b_premise(frame):
        raise WrongCaseError(
            "some row has squared norm <= 1/n (min %.6g, 1/n = %.6g)"
            % (float(np.min(frame.norms_sq())), 1.0 / frame.n))
    margin, _, _ = min_offdiag_margin(frame)
    return margin <= CASE_B_MARGIN_TOL
