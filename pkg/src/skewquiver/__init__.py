"""Representations of quivers with automorphism and skew group algebra modules over finite fields."""

from .errors import (
    CharacteristicError,
    DomainError,
    ExtensionRequired,
    InconsistentSystemError,
    MismatchError,
    NotIndecomposableError,
    ParseError,
    SkewQuiverError,
)
from .exactfield import FieldElement, FieldSpec, default_field, extend
from .linalg import Matrix

__version__ = "0.1.0"

__all__ = [
    "CharacteristicError",
    "DomainError",
    "ExtensionRequired",
    "FieldElement",
    "FieldSpec",
    "InconsistentSystemError",
    "Matrix",
    "MismatchError",
    "NotIndecomposableError",
    "ParseError",
    "SkewQuiverError",
    "default_field",
    "extend",
]
