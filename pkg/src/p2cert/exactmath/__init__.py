"""Exact rational, polynomial, rational-function and eps-polynomial arithmetic."""
from .epspoly import EpsPoly, epspoly_lowest_term
from .localfrac import LocalFrac, LocalRing
from .poly import IntPoly, Poly, VariableMismatch, poly_divrem, poly_gcd, pseudo_remainder
from .ratfunc import RatFunc, ratfunc_arith
from .rational import Fraction, as_rational, format_rational, parse_rational, rat_arith

__all__ = [
    "EpsPoly",
    "Fraction",
    "IntPoly",
    "LocalFrac",
    "LocalRing",
    "Poly",
    "RatFunc",
    "VariableMismatch",
    "as_rational",
    "epspoly_lowest_term",
    "format_rational",
    "parse_rational",
    "poly_divrem",
    "poly_gcd",
    "pseudo_remainder",
    "rat_arith",
    "ratfunc_arith",
]
