"""Exact arithmetic: rationals, polynomials, the curve's function field and expansions at infinity."""

from .poly import Poly, RatFunc, rational, rational_str
from .series import EXACT, LaurentSeries, LogSeries
from .curve import (CurveModel, FuncElem, OneForm, curve_new, ff_arith, monomials_to_elem,
                    peel_poles, pi_expand, pole_basis_element, pole_order_at_infinity,
                    principal_part_solve, standard_curve)

__all__ = [
    "Poly", "RatFunc", "rational", "rational_str", "EXACT", "LaurentSeries", "LogSeries",
    "CurveModel", "FuncElem", "OneForm", "curve_new", "ff_arith", "monomials_to_elem",
    "peel_poles", "pi_expand", "pole_basis_element", "pole_order_at_infinity",
    "principal_part_solve", "standard_curve",
]
