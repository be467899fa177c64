"""Homological filling volumes of cellular cycles over Z, Q, (1/q)Z and Z/pZ."""

from .complex import Cell, CellComplex, Chain, Subcomplex, boundary, change_ring, mass, restrict_chain
from .fill import Budget, FillingProblem, FillingResult, fill_scaled, fv_profile, fvol
from .linalg import homology, is_boundary, smith_normal_form, solve_exact
from .lift import lift_modp_cycle
from .rings import Q, Ring, Z

__version__ = "0.1.0"

__all__ = [
    "Budget", "Cell", "CellComplex", "Chain", "FillingProblem", "FillingResult", "Q", "Ring",
    "Subcomplex", "Z", "boundary", "change_ring", "fill_scaled", "fv_profile", "fvol", "homology",
    "is_boundary", "lift_modp_cycle", "mass", "restrict_chain", "smith_normal_form", "solve_exact",
]
