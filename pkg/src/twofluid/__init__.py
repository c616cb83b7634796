"""Entropy-stable finite volume solver for the two-fluid plasma equations."""

from .backend import BACKEND, available_backends
from .errors import AdmissibilityError, StepFailure
from .integrator import StepController, Tableau, cfl_dt, explicit_step, imex_step, tableau
from .mesh import BoundaryCondition, Field, Grid, fill_ghosts, spatial_rhs, totals
from .state import NVAR, PhysParams, cons_to_prim, prim_to_cons

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityError",
    "BACKEND",
    "BoundaryCondition",
    "Field",
    "Grid",
    "NVAR",
    "PhysParams",
    "StepController",
    "StepFailure",
    "Tableau",
    "available_backends",
    "cfl_dt",
    "cons_to_prim",
    "explicit_step",
    "fill_ghosts",
    "imex_step",
    "prim_to_cons",
    "spatial_rhs",
    "tableau",
    "totals",
]
