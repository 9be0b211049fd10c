"""Numerical checks for symmetric inner functions, the standard pair of
the translation group on the half-line and one-particle locality of the
U(1)-current."""

from .errors import ModstripError
from .reports import CheckReport

__version__ = "0.1.0"
__all__ = ["CheckReport", "ModstripError", "__version__"]
