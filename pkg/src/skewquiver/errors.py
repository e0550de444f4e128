"""Exception hierarchy; each class carries the CLI exit code it maps to."""


class SkewQuiverError(Exception):
    exit_code = 3


class ParseError(SkewQuiverError):
    exit_code = 2


class DomainError(SkewQuiverError):
    """Input outside an operation's precondition (bad tag, zero lambda, ...)."""

    exit_code = 3


class ExtensionRequired(SkewQuiverError):
    """A root of unity or an n-th root lives only in a proper extension field.

    ``degree`` is the minimal extension degree over the current field.
    """

    exit_code = 4

    def __init__(self, degree: int, message: str = ""):
        self.degree = int(degree)
        super().__init__(message or f"root not in field; needs extension of degree {self.degree}")


class MismatchError(SkewQuiverError):
    """Objects live over different quivers, fields or subgroups."""

    exit_code = 5


class NotIndecomposableError(SkewQuiverError):
    exit_code = 6


class InconsistentSystemError(SkewQuiverError):
    exit_code = 3


class CharacteristicError(DomainError):
    """The field characteristic divides a group order or root degree."""
