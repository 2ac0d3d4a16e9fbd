"""Exception hierarchy shared by all modules.

Two families exist so that front ends can map them to exit codes:
``ConfigError`` subclasses signal invalid inputs, ``NumericalFailure``
subclasses signal that a well-posed computation did not succeed.
"""

from __future__ import annotations


class ConfigError(ValueError):
    """Invalid parameters or inputs."""


class NumericalFailure(RuntimeError):
    """A computation on valid inputs failed numerically."""


class DomainError(ConfigError):
    """Argument outside the mathematical domain of a formula."""


class NotInM(ConfigError):
    """Background parameters outside the perturbation class."""


class OnAxis(ConfigError):
    """Evaluation point lies on the symmetry axis."""


class StepTooLarge(ConfigError):
    """Finite-difference step too large for the distance to the axis."""


class ConditionsFail(ConfigError):
    """A CKN parameter set fails the admissibility conditions."""


class InsufficientSamples(ConfigError):
    """Too few samples for a fit."""


class BlowUp(NumericalFailure):
    """Profile left the guard band before reaching a boundary layer.

    Attributes
    ----------
    y_star : float
        Value of ``y = cos(theta)`` at which the guard was exceeded.
    """

    def __init__(self, y_star: float, message: str | None = None):
        self.y_star = float(y_star)
        super().__init__(message or f"profile blew up near y = {self.y_star:.17g}")


class NoConverge(NumericalFailure):
    """Adaptive stepping stalled or an iteration failed to converge."""


class Diverging(NumericalFailure):
    """Integrand is not integrable for the given profile."""


class QuadratureError(NumericalFailure):
    """Quadrature did not reach the requested accuracy."""


class CFLViolation(NumericalFailure):
    """Time step exceeds the advective stability bound."""


class NaNDetected(NumericalFailure):
    """Non-finite values appeared during time stepping."""


class PicardDivergence(NumericalFailure):
    """Picard iterates stopped contracting."""


class SmallnessViolated(NumericalFailure):
    """Fixed-point smallness precondition failed."""


class MemoryBudgetExceeded(NumericalFailure):
    """Stored trajectory would exceed the configured memory cap."""
