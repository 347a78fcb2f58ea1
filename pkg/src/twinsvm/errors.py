"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: validation/parse/format problems are
data errors (exit 3), solver and linear-algebra failures are numerical
errors (exit 4).
"""


class TwinSVMError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(TwinSVMError, ValueError):
    """Invalid argument, shape mismatch, or broken precondition."""


class ParseError(TwinSVMError, ValueError):
    """Malformed input file (CSV or LIBSVM)."""


class NumericalError(TwinSVMError, RuntimeError):
    """Numerical failure: singular system, non-finite result."""


class SolverError(NumericalError):
    """The dual QP solver received an ill-posed problem."""


class FitError(NumericalError):
    """Model fitting failed (e.g. solver did not converge)."""


class FormatError(TwinSVMError, ValueError):
    """Model file has an unrecognized magic string or version."""


class CorruptModelError(FormatError):
    """Model file is structurally valid JSON but internally inconsistent."""


class NotFittedError(TwinSVMError, ValueError):
    """Estimator used before ``fit`` was called."""
