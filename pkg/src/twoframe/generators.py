"""Deterministic test-frame constructors.

Random frames draw standard normals from numpy's ``Generator`` on a
``PCG64`` bit generator seeded with the caller's 64-bit integer (normals
via numpy's 256-layer ziggurat). The pair ``(GENERATOR_NAME,
GENERATOR_VERSION)`` is embedded in every report built from generated
input so runs can be replayed.
"""
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .frames import OrthonormalFrame, ortho_residuals, validate_frame, default_tol_ortho

__all__ = [
    "GENERATOR_NAME",
    "GENERATOR_VERSION",
    "TightnessParams",
    "tightness_params",
    "tightness_frame",
    "tightness_roles",
    "random_frame",
    "small_row_frame",
    "make_rng",
]

GENERATOR_NAME = "numpy.PCG64/standard_normal"
GENERATOR_VERSION = "1"
MAX_SEED = 2**64 - 1
SMALL_ROW_RETRIES = 100


@dataclass(frozen=True)
class TightnessParams:
    n: int
    a: float
    b: float
    c: float


def tightness_params(n):
    n = int(n)
    if n < 4:
        raise DomainError("the extremal family is defined for n >= 4, got n=%d" % n)
    return TightnessParams(
        n=n,
        a=math.sqrt((n - 1) / (n * (n - 2))),
        b=1.0 / math.sqrt(2.0 * n),
        c=1.0 / math.sqrt(2.0),
    )


def tightness_frame(n):
    """Extremal frame: ``n - 2`` rows ``(a, 0)`` then ``(b, c)`` and ``(b, -c)``.

    Every 2x2 submatrix has smallest singular value at most ``1/sqrt(n)``,
    with equality on the (X, Y), (X, Z) and (Y, Z) pairs.
    """
    p = tightness_params(n)
    arr = np.zeros((p.n, 2))
    arr[: p.n - 2, 0] = p.a
    arr[p.n - 2] = (p.b, p.c)
    arr[p.n - 1] = (p.b, -p.c)
    return validate_frame(arr)


def tightness_roles(n):
    """Row indices ``(x_rows, y_row, z_row)`` of :func:`tightness_frame`."""
    return list(range(n - 2)), n - 2, n - 1


def make_rng(seed):
    seed = int(seed)
    if not 0 <= seed <= MAX_SEED:
        raise DomainError("seed must be an unsigned 64-bit integer, got %d" % seed)
    return np.random.Generator(np.random.PCG64(seed))


def _orthonormal_columns(rng, n):
    while True:
        g = rng.standard_normal((n, 2))
        g1 = g[:, 0]
        n1 = math.sqrt(float(g1 @ g1))
        if n1 == 0.0:
            continue
        q1 = g1 / n1
        v = g[:, 1]
        g2n = math.sqrt(float(v @ v))
        for _ in range(2):
            v = v - float(q1 @ v) * q1
        n2 = math.sqrt(float(v @ v))
        if n2 <= 1e-8 * g2n or n2 == 0.0:
            continue
        out = np.empty((n, 2))
        out[:, 0] = q1
        out[:, 1] = v / n2
        return out


def random_frame(n, seed):
    """Random ``n x 2`` frame: Gaussian matrix with Gram-Schmidt on its columns.

    Same ``(n, seed)`` gives a bit-identical frame on the same build.
    """
    n = int(n)
    if n < 2:
        raise DomainError("random_frame needs n >= 2, got %d" % n)
    return validate_frame(_orthonormal_columns(make_rng(seed), n))


def small_row_frame(n, rho_sq, seed):
    """Random frame whose first row has squared norm ``rho_sq <= 1/n``.

    The first row ``r`` points in a random direction; the remaining rows are
    a random ``(n-1) x 2`` frame ``C`` right-multiplied by the symmetric
    square root of ``I - r^T r``, which makes the columns orthonormal.
    """
    n = int(n)
    rho_sq = float(rho_sq)
    if n < 3:
        raise DomainError("small_row_frame needs n >= 3, got %d" % n)
    if not 0.0 <= rho_sq <= 1.0 / n:
        raise DomainError("rho_sq must lie in [0, 1/n] = [0, %r], got %r" % (1.0 / n, rho_sq))
    rng = make_rng(seed)
    tol = default_tol_ortho(n)
    shrink = math.nextafter(1.0, 0.0)
    for _ in range(SMALL_ROW_RETRIES):
        theta = rng.uniform(0.0, 2.0 * math.pi)
        rho = math.sqrt(rho_sq)
        r = np.array([rho * math.cos(theta), rho * math.sin(theta)])
        # keep the realised norm on the requested side of rho_sq
        while r[0] * r[0] + r[1] * r[1] > rho_sq:
            r *= shrink
        rr = float(r[0] * r[0] + r[1] * r[1])
        c = _orthonormal_columns(rng, n - 1)
        if rr > 0.0:
            u = r / math.sqrt(rr)
            s = np.eye(2) + (math.sqrt(1.0 - rr) - 1.0) * np.outer(u, u)
            c = c @ s
        arr = np.vstack([r, c])
        res = ortho_residuals(arr)
        if max(res) <= tol and abs(rr - rho_sq) <= 1e-13:
            return OrthonormalFrame(arr, res, tol)
    raise RuntimeError("small_row_frame: no admissible draw after %d attempts" % SMALL_ROW_RETRIES)
