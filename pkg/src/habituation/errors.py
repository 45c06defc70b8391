"""Exception hierarchy.

Validation problems derive from ``HabituationError`` (a ``ValueError``) so
callers can catch one type; output failures are ``OSError`` subclasses.
"""


class HabituationError(ValueError):
    """Base class for invalid inputs and ill-posed requests."""


class DomainError(HabituationError):
    """An argument lies outside the domain of the operation."""


class DegenerateError(HabituationError):
    """The requested quantity is undefined for these parameters."""


class NoCrossingError(HabituationError):
    """No sign change / intersection exists where one was required."""


class ShapeError(HabituationError):
    """Wundt parameters do not yield a usable inverted-U."""


class AccuracyError(HabituationError):
    """Numerical quadrature could not reach the requested tolerance."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual={residual:.3e})")
        self.residual = residual


class EmitError(OSError):
    """Writing an output artifact failed."""

    def __init__(self, path, reason):
        super().__init__(f"cannot write {path}: {reason}")
        self.path = path
