"""KLS/Schupp trace inequalities and exact diagonalization of truncated quantum rotor lattices."""

__version__ = "0.1.0"

from .errors import (ContractError, ConvergenceError, DegeneracyError, EmptyInputError,
                     KLSRotorError, NumericalError, ShapeError, StepSizeError, UsageError)

__all__ = [
    "__version__", "KLSRotorError", "UsageError", "ShapeError", "EmptyInputError",
    "ContractError", "NumericalError", "ConvergenceError", "DegeneracyError", "StepSizeError",
]
