"""Exception types raised across the package."""

import numpy as np


class DimensionError(ValueError):
    """Operand shapes do not conform."""


class PreconditionError(ValueError):
    """An argument violates a documented precondition."""


class InputError(ValueError):
    """Input data is unusable (non-finite entries, bad case/shape combination)."""


class FormatError(ValueError):
    """A QMAT/DQMAT/PPM file could not be parsed."""


class FactorizationError(np.linalg.LinAlgError):
    """A Cholesky factorization failed, i.e. the matrix is not positive definite."""
