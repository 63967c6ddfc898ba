"""Exception hierarchy shared across the package."""


class ParallelSpectraError(Exception):
    """Base class for all library errors."""


class InvalidSpecError(ParallelSpectraError, ValueError):
    """A model specification violates its preconditions."""


class SymmetryError(ParallelSpectraError):
    """A requested mirror map does not leave the Hermitian member invariant."""


class SolverError(ParallelSpectraError):
    """The eigensolver failed or produced pairs outside the residual bound."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals


class GaugeError(ParallelSpectraError):
    """No PT gauge exists for the vector (broken PT phase)."""


class DegenerateGaugeError(GaugeError):
    """The gauge is undetermined: zero real part or a degenerate eigenvalue."""


class CorrespondenceViolation(ParallelSpectraError):
    """phi + phi_tilde failed to be an eigenvector of the Hermitian member."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NullSuperpositionError(ParallelSpectraError):
    """phi + phi_tilde vanishes (anti-symmetric collision)."""


class DomainError(ParallelSpectraError, ValueError):
    """A closed form was requested outside its validity range."""


class ConstraintError(ParallelSpectraError, ValueError):
    """Supplied coupling parameters violate a closed form's requirement."""


class NullStateError(ParallelSpectraError):
    """A symmetrized state cancels to zero."""


class SubspaceLeakError(ParallelSpectraError):
    """An initial state has too much weight outside the common subspace."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class RangeError(ParallelSpectraError, OverflowError):
    """A matrix exponential argument is too large to evaluate."""


class CertificationError(ParallelSpectraError):
    """A closed-form state failed its residual check."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
