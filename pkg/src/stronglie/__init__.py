"""Exact computations with relations of k-strong Lie algebras over F_p."""

from .freealg import Poly, expand_bracket, format_poly, mirror, parse_poly, substitute, swap_generators
from .gf import GF, FpElem, ext_field_gf, fp_arith

__version__ = "0.1.0"

__all__ = [
    "GF",
    "FpElem",
    "Poly",
    "expand_bracket",
    "ext_field_gf",
    "format_poly",
    "fp_arith",
    "mirror",
    "parse_poly",
    "substitute",
    "swap_generators",
]
