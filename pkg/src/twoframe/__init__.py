"""Certified selection of well-conditioned 2x2 submatrices of orthonormal n x 2 frames.

Every real ``n x 2`` matrix with orthonormal columns has two rows forming a
2x2 matrix with smallest singular value at least ``1/sqrt(n)``. This package
finds such a pair constructively, records how it was found, and checks the
intermediate identities numerically.
"""
__version__ = "0.1.0"

from .errors import (  # noqa: F401
    CertificationError,
    DomainError,
    InvalidInputError,
    NotOrthonormalError,
    ParseError,
    SizeError,
    TwoFrameError,
    WrongCaseError,
)
from .frames import OrthonormalFrame, RowPair, row_norm_sq, submatrix, validate_frame  # noqa: F401
from .generators import random_frame, small_row_frame, tightness_frame  # noqa: F401
from .kernels import Mat2, Rotation2, singular_values_2x2  # noqa: F401
from .oracle import best_pair_bruteforce  # noqa: F401
from .proofaudit import audit_invariants, build_tensors, case_b_existence_check, spectral_summary  # noqa: F401
from .selection import case_a_reduce, case_b_pair, select_pair, verify_selection  # noqa: F401
