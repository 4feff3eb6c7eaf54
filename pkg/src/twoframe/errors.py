"""Exception hierarchy shared across the package."""


class TwoFrameError(Exception):
    """Base class for every error raised by :mod:`twoframe`."""


class InvalidInputError(TwoFrameError, ValueError):
    """Non-finite or malformed numeric input."""


class SizeError(TwoFrameError, ValueError):
    """Matrix has an unsupported number of rows."""


class NotOrthonormalError(TwoFrameError, ValueError):
    """Columns fail the orthonormality test.

    ``residuals`` holds ``(|sum x^2 - 1|, |sum y^2 - 1|, |sum x*y|)``.
    """

    def __init__(self, residuals, tol):
        self.residuals = tuple(float(r) for r in residuals)
        self.tol = float(tol)
        super().__init__(
            "columns are not orthonormal: residuals "
            "(xx=%.3e, yy=%.3e, xy=%.3e) exceed tol_ortho=%.3e"
            % (*self.residuals, self.tol)
        )


class WrongCaseError(TwoFrameError, ValueError):
    """A case-specific routine was called on a frame outside its case."""


class DomainError(TwoFrameError, ValueError):
    """Generator parameters outside the supported domain."""


class ParseError(TwoFrameError, ValueError):
    """Malformed frame file; ``lineno`` is 1-based."""

    def __init__(self, lineno, message):
        self.lineno = lineno
        super().__init__("line %d: %s" % (lineno, message))


class CertificationError(TwoFrameError, RuntimeError):
    """No branch produced a pair meeting the bound.

    ``audit`` carries the diagnostic :class:`~twoframe.proofaudit.AuditReport`.
    """

    def __init__(self, message, audit=None):
        self.audit = audit
        super().__init__(message)
