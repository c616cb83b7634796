"""Initial data for the four experiments and the manufactured forcing."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ..mesh import BoundaryCondition, Field, Grid
from ..state import NVAR, PhysParams, prim_to_cons

PERIODIC = BoundaryCondition.PERIODIC
ZERO_GRADIENT = BoundaryCondition.ZERO_GRADIENT

# large Larmor radius keeps the Lorentz coupling negligible, see manufactured_params
MANUFACTURED_R_HAT_G = 1e6


@dataclass
class Scenario:
    name: str
    field: Field
    params: PhysParams
    forcing: Optional[Callable] = None
    exact_density: Optional[Callable] = None


def _bc(kind, dim):
    sides = ("x_lo", "x_hi", "y_lo", "y_hi")[: 2 * dim]
    return {s: kind for s in sides}


def manufactured_params(r_hat_g: float = MANUFACTURED_R_HAT_G, **overrides) -> PhysParams:
    """Parameters for the forced traveling wave.

    The forcing only cancels the current and charge sources when
    lambda_hat_d^2 * r_hat_g = 1 and xi = 1, so lambda_hat_d follows r_hat_g
    unless it is given explicitly.
    """
    values = dict(lambda_m=2.0, r_hat_g=r_hat_g, lambda_hat_d=1.0 / np.sqrt(r_hat_g), xi=1.0, kappa=1.0)
    values.update(overrides)
    return PhysParams(**values)


def manufactured_density(x, t):
    return 2.0 + np.sin(2.0 * np.pi * (x - t))


def manufactured_forcing(x, y, t):
    out = np.zeros(np.shape(x) + (NVAR,))
    rho = manufactured_density(x, t)
    out[..., 13] = -rho
    out[..., 16] = rho
    return out


def build_manufactured(nx: int, params: Optional[PhysParams] = None) -> Scenario:
    if nx < 8:
        raise ValueError("manufactured problem needs nx >= 8")
    params = params or manufactured_params()
    grid = Grid(nx, 0.0, 1.0)
    x = grid.x
    s = np.sin(2.0 * np.pi * x)
    prim = np.zeros((nx, NVAR))
    for k in (0, 5):
        prim[:, k] = 2.0 + s
        prim[:, k + 1] = 1.0
        prim[:, k + 4] = 1.0
    prim[:, 11] = s
    prim[:, 15] = -s
    field = Field.from_interior(grid, prim_to_cons(prim, params), _bc(PERIODIC, 1))
    return Scenario("manufactured", field, params, manufactured_forcing, manufactured_density)


def soliton_params(r_hat_g: float, **overrides) -> PhysParams:
    values = dict(lambda_m=25.0, r_hat_g=r_hat_g, lambda_hat_d=1.0)
    values.update(overrides)
    return PhysParams(**values)


def _soliton_prim(rho_i, lambda_m):
    prim = np.zeros(rho_i.shape + (NVAR,))
    p_e = 5.0 * rho_i
    prim[..., 0] = rho_i
    prim[..., 4] = p_e / 100.0
    prim[..., 5] = rho_i / lambda_m
    prim[..., 9] = p_e
    return prim


def soliton1d_density(x):
    return 1.0 + np.exp(-25.0 * np.abs(x - 12.0 / 3.0))


def build_soliton1d(nx: int, r_hat_g: float = 1e-2, params: Optional[PhysParams] = None) -> Scenario:
    if nx < 100:
        raise ValueError("soliton1d needs nx >= 100")
    params = params or soliton_params(r_hat_g)
    grid = Grid(nx, 0.0, 12.0)
    prim = _soliton_prim(soliton1d_density(grid.x), params.lambda_m)
    field = Field.from_interior(grid, prim_to_cons(prim, params), _bc(PERIODIC, 1))
    return Scenario("soliton1d", field, params)


def soliton2d_density(x, y):
    return 1.0 + 5.0 * np.exp(-500.0 * ((x - 1.0) ** 2 + (y - 1.0) ** 2))


def build_soliton2d(nx: int, ny: int, r_hat_g: float = 1e-2, params: Optional[PhysParams] = None) -> Scenario:
    if nx < 50 or ny < 50:
        raise ValueError("soliton2d needs nx, ny >= 50")
    params = params or soliton_params(r_hat_g)
    grid = Grid(nx, 0.0, 2.0, ny, 0.0, 2.0)
    X, Y = grid.coordinates()
    prim = _soliton_prim(soliton2d_density(X, Y), params.lambda_m)
    field = Field.from_interior(grid, prim_to_cons(prim, params), _bc(ZERO_GRADIENT, 2))
    return Scenario("soliton2d", field, params)


def briowu_params(r_hat_g: float, **overrides) -> PhysParams:
    values = dict(lambda_m=1836.0, r_hat_g=r_hat_g, lambda_hat_d=0.01)
    values.update(overrides)
    return PhysParams(**values)


def build_briowu(nx: int, r_hat_g: float = 1.0, params: Optional[PhysParams] = None) -> Scenario:
    if nx < 100:
        raise ValueError("briowu needs nx >= 100")
    params = params or briowu_params(r_hat_g)
    grid = Grid(nx, 0.0, 1.0)
    left = grid.x < 0.5
    prim = np.zeros((nx, NVAR))
    rho = np.where(left, 1.0, 0.125)
    p = np.where(left, 0.5, 0.05)
    prim[:, 0] = rho
    prim[:, 4] = p
    prim[:, 5] = rho / params.lambda_m
    prim[:, 9] = p
    prim[:, 10] = 0.75
    prim[:, 11] = np.where(left, 1.0, -1.0)
    field = Field.from_interior(grid, prim_to_cons(prim, params), _bc(ZERO_GRADIENT, 1))
    return Scenario("briowu", field, params)


def l1_error(field: Field, exact_density, t: float) -> float:
    """sum |rho_i - exact(x, t)| dx over a 1D field."""
    if field.grid.dim != 1:
        raise ValueError("l1_error is defined for 1D fields")
    rho = field.interior[:, 0]
    return float(np.sum(np.abs(rho - exact_density(field.grid.x, t)))) * field.grid.dx
