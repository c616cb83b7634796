"""SSP Runge-Kutta time stepping, explicit and IMEX."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import backend
from .errors import AdmissibilityError, StepFailure
from .mesh import Field
from .source_imex import explicit_source_dt
from .state import PhysParams, cons_to_prim, source, wave_speeds

DEFAULT_CFL = 0.45

RhsOp = Callable[[Field, float], np.ndarray]


@dataclass(frozen=True)
class Tableau:
    order: int
    alpha: tuple
    beta: tuple

    @property
    def stages(self) -> int:
        return len(self.alpha)

    @property
    def c(self) -> tuple:
        """Stage times as fractions of dt, c[0] = 0 for the initial state."""
        c = [0.0]
        for a_row, b_row in zip(self.alpha, self.beta):
            c.append(sum(a * cl + b for a, b, cl in zip(a_row, b_row, c)))
        return tuple(c)


_TABLES = {
    2: Tableau(2, ((1.0,), (0.5, 0.5)), ((1.0,), (0.0, 0.5))),
    3: Tableau(
        3,
        ((1.0,), (0.75, 0.25), (1.0 / 3.0, 0.0, 2.0 / 3.0)),
        ((1.0,), (0.0, 0.25), (0.0, 0.0, 2.0 / 3.0)),
    ),
}


def tableau(order: int) -> Tableau:
    try:
        return _TABLES[order]
    except KeyError:
        raise ValueError(f"unsupported Runge-Kutta order {order}") from None


class Mode(enum.Enum):
    EXPLICIT = "explicit"
    IMEX = "imex"


def cfl_dt(field: Field, cfl: float, params: PhysParams) -> float:
    """dt = cfl / max over cells of sum_dir (max speed in dir) / spacing."""
    if not cfl > 0.0:
        raise ValueError(f"cfl must be positive, got {cfl}")
    grid = field.grid
    u = field.interior
    rate = np.zeros(u.shape[:-1])
    spacings = (grid.dx, grid.dy)[: grid.dim]
    for axis, h in enumerate(spacings):
        ion, ele, light = wave_speeds(u, axis, params)
        rate = rate + np.maximum(np.maximum(ion, ele), light) / h
    return cfl / float(np.max(rate))


def _check(u, t, params):
    try:
        cons_to_prim(u, params)
    except AdmissibilityError as exc:
        raise StepFailure(f"inadmissible stage state at t={t:.6g}: {exc}", cell=exc.index, time=t) from exc


def explicit_step(field: Field, dt: float, tab: Tableau, rhs_op: RhsOp, params: PhysParams,
                  t: float = 0.0, with_source: bool = True) -> Field:
    """One SSP-RK step with both flux and source evaluated explicitly.

    ``rhs_op(field, t)`` returns the flux operator L on the interior cells.
    """
    stages = [field]
    rates = []
    c = tab.c
    for m in range(tab.stages):
        cur = stages[m]
        r = rhs_op(cur, t + c[m] * dt)
        if with_source:
            r = r + source(cur.interior, params)
        rates.append(r)
        new = np.zeros_like(field.interior)
        for l, (a, b) in enumerate(zip(tab.alpha[m], tab.beta[m])):
            if a:
                new += a * stages[l].interior
            if b:
                new += b * dt * rates[l]
        _check(new, t + c[m + 1] * dt, params)
        stages.append(field.with_interior(new))
    return stages[-1]


def imex_step(field: Field, dt: float, tab: Tableau, rhs_op: RhsOp, params: PhysParams,
              t: float = 0.0, with_source: bool = True, kernel: Optional[str] = None) -> Field:
    """One SSP-RK step whose forward-Euler pieces become IMEX sub-steps.

    Stage ``m`` is ``sum_l alpha_ml * E_l`` where ``E_l`` solves
    ``E = U_l + h L(U_l) + h S(E)`` with ``h = dt beta_ml / alpha_ml``.
    """
    stages = [field]
    rates = []
    c = tab.c
    for m in range(tab.stages):
        cur = stages[m]
        rates.append(rhs_op(cur, t + c[m] * dt))
        new = np.zeros_like(field.interior)
        for l, (a, b) in enumerate(zip(tab.alpha[m], tab.beta[m])):
            if not a:
                continue
            h = dt * b / a
            if h == 0.0:
                new += a * stages[l].interior
            elif with_source:
                try:
                    new += a * backend.imex_update(stages[l].interior, rates[l], h, params, kernel)
                except StepFailure as exc:
                    exc.time = t + c[m] * dt
                    raise
            else:
                new += a * (stages[l].interior + h * rates[l])
        _check(new, t + c[m + 1] * dt, params)
        stages.append(field.with_interior(new))
    return stages[-1]


@dataclass
class StepController:
    """Fixed-CFL time step selection, clipped to land on ``t_end``."""

    cfl: float = DEFAULT_CFL
    sigma_src: float = 0.5
    t_end: float = 1.0
    mode: Mode = Mode.EXPLICIT

    def __post_init__(self):
        self.mode = Mode(self.mode)
        if not 0.0 < self.cfl <= 1.0:
            raise ValueError(f"cfl must lie in (0, 1], got {self.cfl}")
        if not self.t_end > 0.0:
            raise ValueError("t_end must be positive")

    def dt(self, field: Field, params: PhysParams, t: float, with_source: bool = True,
           stop: Optional[float] = None) -> float:
        dt = cfl_dt(field, self.cfl, params)
        if self.mode is Mode.EXPLICIT and with_source:
            dt = min(dt, explicit_source_dt(field, params, self.sigma_src))
        target = self.t_end if stop is None else min(stop, self.t_end)
        if t + dt >= target:
            dt = target - t
        return dt

    def step(self, field: Field, dt: float, tab: Tableau, rhs_op: RhsOp, params: PhysParams,
             t: float = 0.0, with_source: bool = True) -> Field:
        if self.mode is Mode.EXPLICIT:
            return explicit_step(field, dt, tab, rhs_op, params, t, with_source)
        return imex_step(field, dt, tab, rhs_op, params, t, with_source)
