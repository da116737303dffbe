"""Exact-arithmetic toolkit for 2-planes in R^4 and planar octagonal tilings."""

from .fields import (
    FieldElement,
    QuadraticField,
    RATIONALS,
    conjugations,
    rational_kernel,
    sign,
)

__all__ = [
    "FieldElement",
    "QuadraticField",
    "RATIONALS",
    "conjugations",
    "rational_kernel",
    "sign",
]

__version__ = "0.1.0"
