"""Exceptions raised by the pipelines, one per CLI exit class."""


class PolynomialSyntaxError(ValueError):
    """Polynomial text could not be parsed."""

    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class DegenerateInputError(ValueError):
    """Input violates a structural precondition (non-reduced curve, empty domain...)."""


class NumericalFailure(RuntimeError):
    """A numerical stage could not deliver a result within tolerance."""
