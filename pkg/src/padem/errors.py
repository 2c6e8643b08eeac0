"""Exception hierarchy shared across the package."""


class PademError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(PademError):
    """An argument is outside the mathematical domain of the operation."""


class DivisibilityError(DomainError):
    """Exact polynomial division was requested but the divisor does not divide."""


class MismatchError(DomainError):
    """Operands live over different primes or variable counts."""


class StructureError(PademError):
    """A structural precondition (e.g. p-nilpotence of a differential) fails."""


class ReconstructionError(PademError):
    """An operator could not be written in the x^a * D_w normal-form basis."""


class ParseError(PademError):
    """Syntax error in an input expression, with a source position."""

    def __init__(self, message: str, position: int = -1):
        super().__init__(message)
        self.position = position


class ExprTypeError(ParseError):
    """An atom is not legal for the selected target algebra."""
