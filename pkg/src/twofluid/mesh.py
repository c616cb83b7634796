"""Uniform 1D/2D grids with ghost layers and the semi-discrete operator."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field as dc_field
from typing import Callable, NamedTuple, Optional

import numpy as np

from . import backend
from .state import NVAR, PhysParams, entropy

NGHOST = 2


class BoundaryCondition(enum.Enum):
    PERIODIC = "periodic"
    ZERO_GRADIENT = "zero_gradient"


@dataclass(frozen=True)
class Grid:
    nx: int
    x0: float = 0.0
    x1: float = 1.0
    ny: int = 0
    y0: float = 0.0
    y1: float = 1.0
    nghost: int = NGHOST

    def __post_init__(self):
        if self.nx < 1 or self.ny < 0:
            raise ValueError("cell counts must be positive")
        if self.nghost < NGHOST:
            raise ValueError("second-order stencils need at least two ghost layers")

    @property
    def dim(self) -> int:
        return 2 if self.ny > 0 else 1

    @property
    def dx(self) -> float:
        return (self.x1 - self.x0) / self.nx

    @property
    def dy(self) -> float:
        return (self.y1 - self.y0) / self.ny if self.ny else 1.0

    @property
    def cell_volume(self) -> float:
        return self.dx * self.dy

    @property
    def x(self) -> np.ndarray:
        return self.x0 + (np.arange(self.nx) + 0.5) * self.dx

    @property
    def y(self) -> np.ndarray:
        return self.y0 + (np.arange(self.ny) + 0.5) * self.dy

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.nx,) if self.dim == 1 else (self.nx, self.ny)

    def coordinates(self):
        """Cell-centre coordinate arrays broadcastable to the interior shape."""
        if self.dim == 1:
            return self.x, None
        X, Y = np.meshgrid(self.x, self.y, indexing="ij")
        return X, Y


def _sides(dim):
    return ("x_lo", "x_hi") if dim == 1 else ("x_lo", "x_hi", "y_lo", "y_hi")


@dataclass
class Field:
    """Cell states including ghost layers.

    ``data`` has shape (nx + 2g, 18) in 1D and (nx + 2g, ny + 2g, 18) in 2D.
    ``bc`` maps each side name to a BoundaryCondition.
    """

    grid: Grid
    data: np.ndarray
    bc: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        g = self.grid
        expected = tuple(n + 2 * g.nghost for n in g.shape) + (NVAR,)
        if self.data.shape != expected:
            raise ValueError(f"data shape {self.data.shape} does not match grid {expected}")
        for side in _sides(g.dim):
            self.bc.setdefault(side, BoundaryCondition.PERIODIC)
        for lo, hi in (("x_lo", "x_hi"), ("y_lo", "y_hi"))[: g.dim]:
            periodic = [self.bc[s] is BoundaryCondition.PERIODIC for s in (lo, hi)]
            if periodic[0] != periodic[1]:
                raise ValueError(f"periodic boundary on {lo} requires periodic {hi}")

    @classmethod
    def from_interior(cls, grid: Grid, interior, bc=None) -> "Field":
        g = grid.nghost
        data = np.zeros(tuple(n + 2 * g for n in grid.shape) + (NVAR,))
        f = cls(grid, data, dict(bc or {}))
        f.interior[...] = interior
        return fill_ghosts(f)

    @property
    def interior(self) -> np.ndarray:
        g = self.grid.nghost
        if self.grid.dim == 1:
            return self.data[g:-g]
        return self.data[g:-g, g:-g]

    def copy(self) -> "Field":
        return Field(self.grid, self.data.copy(), dict(self.bc))

    def with_interior(self, interior) -> "Field":
        out = Field(self.grid, np.empty_like(self.data), dict(self.bc))
        out.interior[...] = interior
        return fill_ghosts(out)


def _fill_axis(data, axis, g, lo, hi):
    n = data.shape[axis] - 2 * g
    d = np.moveaxis(data, axis, 0)
    if lo is BoundaryCondition.PERIODIC:
        d[:g] = d[n:n + g]
        d[n + g:] = d[g:2 * g]
        return
    if lo is BoundaryCondition.ZERO_GRADIENT:
        d[:g] = d[g]
    if hi is BoundaryCondition.ZERO_GRADIENT:
        d[n + g:] = d[n + g - 1]


def fill_ghosts(field: Field) -> Field:
    """Fill ghost layers in place (x pass, then y pass over full columns)."""
    g = field.grid.nghost
    bc = field.bc
    if field.grid.dim == 1:
        _fill_axis(field.data, 0, g, bc["x_lo"], bc["x_hi"])
    else:
        _fill_axis(field.data[:, g:-g], 0, g, bc["x_lo"], bc["x_hi"])
        _fill_axis(field.data, 1, g, bc["y_lo"], bc["y_hi"])
    return field


Forcing = Callable[[np.ndarray, Optional[np.ndarray], float], np.ndarray]


def spatial_rhs(field: Field, order: int, params: PhysParams, forcing: Optional[Forcing] = None,
                t: float = 0.0, kernel=None) -> np.ndarray:
    """Flux-difference operator L(U) on the interior cells (ghosts must be filled).

    Interface fluxes are computed once into their own array and then
    differenced, so every cell sees exactly the same face values as its
    neighbour.
    """
    grid = field.grid
    g = grid.nghost
    data = field.data
    if grid.dim == 1:
        fx = backend.line_fluxes(data[g - 2:data.shape[0] - g + 2], 0, order, params, kernel)
        rhs = -(fx[1:] - fx[:-1]) / grid.dx
    else:
        # x sweep: lines along axis 0 for each interior y
        lines = np.moveaxis(data[g - 2:data.shape[0] - g + 2, g:-g], 0, 1)
        fx = np.moveaxis(backend.line_fluxes(lines, 0, order, params, kernel), 0, 1)
        lines = data[g:-g, g - 2:data.shape[1] - g + 2]
        fy = backend.line_fluxes(lines, 1, order, params, kernel)
        rhs = -(fx[1:] - fx[:-1]) / grid.dx - (fy[:, 1:] - fy[:, :-1]) / grid.dy
    if forcing is not None:
        X, Y = grid.coordinates()
        rhs = rhs + forcing(X, Y, t)
    return rhs


class Totals(NamedTuple):
    e_i: float
    e_e: float
    e_m: float
    mass_i: float
    mass_e: float


def totals(field: Field, params: PhysParams) -> Totals:
    u = field.interior
    vol = field.grid.cell_volume
    e = entropy(u, params)
    # fixed C-order summation for reproducibility
    def total(a):
        return float(np.sum(np.ravel(a))) * vol
    return Totals(total(e.e_i), total(e.e_e), total(e.e_m), total(u[..., 0]), total(u[..., 5]))


def conserved_totals(field: Field) -> np.ndarray:
    """Sum of every conservative component times the cell volume."""
    u = field.interior
    return np.sum(u.reshape((-1, NVAR)), axis=0) * field.grid.cell_volume
