"""Exact sparse resultants, toric residues and global residues in the torus."""
from .poly import Poly, NotDivisible, exact_divide, multipoly_gcd, normalize
from .textio import format_polynomial, parse_polynomial

__all__ = [
    "Poly",
    "NotDivisible",
    "exact_divide",
    "multipoly_gcd",
    "normalize",
    "format_polynomial",
    "parse_polynomial",
]
