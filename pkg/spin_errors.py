# -*- coding: utf-8 -*-
"""
Exception hierarchy for the sphere spin-structure tools.

Argument-type problems derive from ValueError, numerical failures from
ArithmeticError, so callers can catch either the specific class or the
broad builtin. The CLI maps each group to an exit code (see EXIT_CODES).
"""

from typing import Any, Dict, Optional


class SpinInvarianceError(Exception):
    """Base class for every error raised by this package."""


# Bad input ---------------------------------------------------------------

class DimensionMismatchError(SpinInvarianceError, ValueError):
    """Operands live in different Clifford algebras or matrix sizes."""


class DimensionCeilingError(SpinInvarianceError, ValueError):
    """Requested Clifford dimension is above the supported ceiling."""


class NotUnitError(SpinInvarianceError, ValueError):
    """A vector, scalar or group element is off the unit sphere beyond tolerance."""


class UnsupportedFamilyError(SpinInvarianceError, ValueError):
    """Family or family parameter outside what an operation handles."""


class IncompatibleRepresentationError(SpinInvarianceError, ValueError):
    """A representation leaf was evaluated on an element of the wrong group."""


# Numerical failures ------------------------------------------------------

class NumericalError(SpinInvarianceError, ArithmeticError):
    """Base for failures of a computation on otherwise valid input."""


class StabilizerViolationError(NumericalError):
    """A supposed stabilizer element moves the base point."""


class StepTooLargeError(NumericalError):
    """A rotation step is outside the radius of the small-angle logarithm."""


class ConvergenceError(NumericalError):
    """A power series did not converge within the iteration cap."""


class InvalidSpinElementError(NumericalError):
    """Conjugation by a would-be spin element leaves the vector grade."""


class TrackingError(NumericalError):
    """The lifted spin path drifted away from the rotation path."""

    def __init__(self, message: str, max_residual: float = float("nan")):
        super().__init__(message)
        self.max_residual = max_residual


class ParityUndecidedError(NumericalError):
    """Lift endpoint is near neither +1 nor -1."""


class AmbiguousMatchingError(NumericalError):
    """Eigenphases could not be followed continuously between samples."""


class InvariantViolationError(NumericalError):
    """A subspace that must be invariant was left beyond tolerance."""


# Disagreements -----------------------------------------------------------

class MethodDisagreementError(SpinInvarianceError, ArithmeticError):
    """The differential, adjoint and winding parities do not all agree."""

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class VerificationError(SpinInvarianceError, ArithmeticError):
    """A named identity of a verification suite failed."""

    def __init__(self, message: str, identity: str = "", residual: float = float("nan")):
        super().__init__(message)
        self.identity = identity
        self.residual = residual


EXIT_OK = 0
EXIT_BAD_ARGUMENTS = 1
EXIT_DISAGREEMENT = 2
EXIT_NUMERICAL = 3
EXIT_VERIFICATION = 4


def exit_code_for(error: BaseException) -> int:
    """Exit code the CLI returns for a given exception."""
    if isinstance(error, MethodDisagreementError):
        return EXIT_DISAGREEMENT
    if isinstance(error, VerificationError):
        return EXIT_VERIFICATION
    if isinstance(error, NumericalError):
        return EXIT_NUMERICAL
    if isinstance(error, ValueError):
        return EXIT_BAD_ARGUMENTS
    return EXIT_NUMERICAL
