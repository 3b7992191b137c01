"""Symbolic-numeric audit toolkit for the hydrino model's mathematics."""

__version__ = "0.1.0"

from .constants import DEFAULT_CONSTANTS, PhysicalConstants
from .expr import Expr, expr_equal
from .parser import ParseError, parse_expr, print_expr

__all__ = [
    "__version__",
    "DEFAULT_CONSTANTS",
    "PhysicalConstants",
    "Expr",
    "expr_equal",
    "ParseError",
    "parse_expr",
    "print_expr",
]
