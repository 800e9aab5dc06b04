"""Exception hierarchy shared by all modules.

The CLI maps these onto process exit codes: usage-type errors exit 2,
numerical failures exit 3.
"""


class KLSRotorError(Exception):
    """Base class for all package errors."""


class UsageError(KLSRotorError, ValueError):
    """Invalid argument, configuration value or call order."""


class ShapeError(UsageError):
    """Matrix or vector dimensions do not fit together."""


class EmptyInputError(UsageError):
    """A zero-sized matrix was passed where a nonempty one is required."""


class ContractError(UsageError):
    """An input violates a documented precondition (e.g. U not unitary)."""


class NumericalError(KLSRotorError, ArithmeticError):
    """A numerical procedure failed to reach its target accuracy."""


class ConvergenceError(NumericalError):
    """Iterative method exhausted its budget.

    ``achieved`` carries the best residual (or value) reached.
    """

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class DegeneracyError(NumericalError):
    """Spectral gap too small for a restricted linear solve."""

    def __init__(self, message, gap=None):
        super().__init__(message)
        self.gap = gap


class StepSizeError(NumericalError):
    """Finite-difference stencil is dominated by noise or truncation."""
