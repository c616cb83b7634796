"""End-to-end driver: build, step, record."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from ..errors import StepFailure
from ..integrator import Mode, StepController, tableau
from ..mesh import Field, fill_ghosts, spatial_rhs, totals
from .config import ScenarioConfig
from .io import SeriesWriter, write_snapshot
from .scenarios import (
    MANUFACTURED_R_HAT_G,
    Scenario,
    briowu_params,
    build_briowu,
    build_manufactured,
    build_soliton1d,
    build_soliton2d,
    l1_error,
    manufactured_params,
    soliton_params,
)

log = logging.getLogger(__name__)

_DEFAULT_R_HAT_G = {"manufactured": MANUFACTURED_R_HAT_G, "soliton1d": 1e-2, "soliton2d": 1e-2, "briowu": 1.0}


@dataclass
class RunReport:
    scenario: str
    steps_taken: int
    wall_seconds: float
    t_final: float
    final_l1_error: Optional[float] = None
    series: np.ndarray = field(default_factory=lambda: np.empty((0, 7)))
    field: Optional[Field] = None


def build_scenario(cfg: ScenarioConfig) -> Scenario:
    over = dict(cfg.params)
    r_hat_g = over.pop("r_hat_g", _DEFAULT_R_HAT_G[cfg.scenario])
    if cfg.scenario == "manufactured":
        return build_manufactured(cfg.nx, manufactured_params(r_hat_g, **over))
    if cfg.scenario == "soliton1d":
        return build_soliton1d(cfg.nx, params=soliton_params(r_hat_g, **over))
    if cfg.scenario == "soliton2d":
        return build_soliton2d(cfg.nx, cfg.ny, params=soliton_params(r_hat_g, **over))
    return build_briowu(cfg.nx, params=briowu_params(r_hat_g, **over))


class StepError(RuntimeError):
    """A run aborted; carries the partial report."""

    def __init__(self, message, report: RunReport, cause: StepFailure):
        super().__init__(message)
        self.report = report
        self.cause = cause


def run(cfg: ScenarioConfig, scenario: Optional[Scenario] = None) -> RunReport:
    """Run one configuration; writes CSV output when ``output_dir`` is set."""
    sc = scenario or build_scenario(cfg)
    params = sc.params
    tab = tableau(cfg.rk_order)
    ctl = StepController(cfl=cfg.cfl, sigma_src=cfg.sigma_src, t_end=cfg.t_end, mode=Mode(cfg.stepper))

    def rhs_op(f: Field, t: float):
        return spatial_rhs(fill_ghosts(f), cfg.order, params, sc.forcing, t)

    out = Path(cfg.output_dir) if cfg.output_dir else None
    series_writer = None
    snap_index = 0
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        series_writer = SeriesWriter(out / "series.csv")
        write_snapshot(out / f"snap_{snap_index}.csv", sc.field, params)
        snap_index += 1
    next_snap = cfg.snapshot_interval if cfg.snapshot_interval else None
    last_snap = 0.0

    f = sc.field
    t = 0.0
    steps = 0
    rows = []
    start = time.perf_counter()

    def report():
        l1 = l1_error(f, sc.exact_density, t) if sc.exact_density is not None else None
        return RunReport(sc.name, steps, time.perf_counter() - start, t, l1, np.array(rows).reshape((-1, 7)), f)

    try:
        while t < cfg.t_end:
            stop = next_snap if next_snap is not None and next_snap < cfg.t_end else None
            target = cfg.t_end if stop is None else stop
            dt = ctl.dt(f, params, t, cfg.with_source, stop)
            f = ctl.step(f, dt, tab, rhs_op, params, t, cfg.with_source)
            t = target if (t + dt >= target or dt == target - t) else t + dt
            steps += 1
            row = (t, dt) + tuple(totals(f, params))
            rows.append(row)
            if series_writer is not None:
                series_writer.write(row)
            if next_snap is not None and t >= next_snap:
                if out is not None:
                    write_snapshot(out / f"snap_{snap_index}.csv", f, params)
                    snap_index += 1
                    last_snap = t
                while next_snap <= t:
                    next_snap += cfg.snapshot_interval
    except StepFailure as exc:
        rep = report()
        where = f" in cell {exc.cell}" if exc.cell is not None else ""
        when = exc.time if exc.time is not None else t
        raise StepError(f"step failed at t={when:.6g}{where}: {exc}", rep, exc) from exc
    finally:
        if series_writer is not None:
            series_writer.close()

    if out is not None and last_snap != t:
        write_snapshot(out / f"snap_{snap_index}.csv", f, params)
    rep = report()
    log.info("%s: %d steps in %.2fs", sc.name, steps, rep.wall_seconds)
    return rep
