"""Exact g/h-polynomials, face lattices and resolution fibers for Gale dual
type-A root polytopes with multiplicities."""

from .poly import IntPoly, p_poly, shift, is_palindromic, g_from_h
from .graphs import MultMatrix, SubMultigraph, InstanceError, BudgetExceeded

__version__ = "0.1.0"

__all__ = ["IntPoly", "p_poly", "shift", "is_palindromic", "g_from_h",
           "MultMatrix", "SubMultigraph", "InstanceError", "BudgetExceeded"]
