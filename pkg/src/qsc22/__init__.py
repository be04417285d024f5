"""Exact Q-system algebra, Hirota T-systems, Hubbard Bethe solvers, and
asymptotic Bethe checks for a centrally extended su(2|2) spectral curve."""

__version__ = "0.1.0"

from .exact_poly import GaussRat, NotDivisible, TwistedPoly, exact_div, wronskian

__all__ = [
    "GaussRat",
    "NotDivisible",
    "TwistedPoly",
    "exact_div",
    "wronskian",
    "__version__",
]
