"""Hecke eigenvalues of Saito-Kurokawa lifts, computed exactly from elliptic eigenforms."""

__version__ = "0.1.0"

from .eigenform import CoefficientTable, build_eigenform, load_or_build  # noqa: E402
from .hpreal import HighPrecisionReal  # noqa: E402
from .lift import SkContext, lam, ratio  # noqa: E402

__all__ = [
    "CoefficientTable",
    "HighPrecisionReal",
    "SkContext",
    "build_eigenform",
    "lam",
    "load_or_build",
    "ratio",
]
