"""Exact spectra, exponential sums, trace codes and curve counts over F_{p^n}."""

from .errors import IrrationalSumError, SizeLimitError, VerificationError
from .field import (DEFAULT_FIELD_CAP, FieldContext, FieldParams, build_field,
                    field_for, find_primitive_polynomial)
from . import codes, curves, diffspec, expsum, family

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_FIELD_CAP",
    "FieldContext",
    "FieldParams",
    "IrrationalSumError",
    "SizeLimitError",
    "VerificationError",
    "build_field",
    "codes",
    "curves",
    "diffspec",
    "expsum",
    "family",
    "field_for",
    "find_primitive_polynomial",
]
