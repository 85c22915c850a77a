"""Exact top coefficients of Ehrhart quasi-polynomials of rational simplices."""
from .driver import QuasiCoefficientReport, build_poset, minimal_period, moebius_numbers, top_coefficients
from .genfun import ShortRationalFunction, genfun_closed, genfun_open
from .lattice import Lattice, Subspace, hnf, intersect, lll_reduce, orth_complement, project_lattice, saturate
from .oracle import count_points, el_bruteforce, fit_quasipolynomial
from .polytope import HPolytope, Simplex, VPolytope
from .slices import SlicePlan, eval_EL
from .summation import Polynomial, sum_polynomial

__all__ = [
    "QuasiCoefficientReport", "Simplex", "VPolytope", "HPolytope", "Subspace", "Lattice",
    "saturate", "orth_complement", "intersect", "project_lattice", "hnf", "lll_reduce",
    "ShortRationalFunction", "genfun_closed", "genfun_open", "Polynomial", "sum_polynomial",
    "build_poset", "moebius_numbers", "minimal_period", "top_coefficients", "eval_EL", "SlicePlan",
    "count_points", "fit_quasipolynomial", "el_bruteforce",
]
