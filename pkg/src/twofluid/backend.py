"""Kernel selection.

The hot loops (entropy-stable interface fluxes and the per-cell implicit
source update) have a compiled Cython implementation in ``_kernels`` and a
vectorized numpy fallback. The compiled one is used when it imports, unless
``TWOFLUID_PURE=1`` is set. ``SOLVER_THREADS`` caps the OpenMP worker count.
"""

from __future__ import annotations

import os

import numpy as np

from . import diffusion, source_imex
from .errors import AdmissibilityError, StepFailure
from .state import NVAR, PhysParams, _axis

try:
    if os.environ.get("TWOFLUID_PURE", "") not in ("", "0"):
        raise ImportError("compiled kernels disabled by TWOFLUID_PURE")
    from . import _kernels
except ImportError:
    _kernels = None

BACKEND = "cython" if _kernels is not None else "numpy"


def available_backends() -> tuple[str, ...]:
    return ("cython", "numpy") if _kernels is not None else ("numpy",)


def num_threads() -> int:
    cap = os.environ.get("SOLVER_THREADS")
    n = os.cpu_count() or 1
    if cap:
        n = max(1, min(n, int(cap)))
    return n


def _resolve(backend):
    backend = backend or BACKEND
    if backend == "cython" and _kernels is None:
        raise RuntimeError("compiled kernels are not built")
    if backend not in ("cython", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    return backend


def _pargs(params: PhysParams):
    return (params.gamma, params.c_hat, params.xi, params.kappa)


def line_fluxes(cells, direction, order: int, params: PhysParams, backend=None) -> np.ndarray:
    """Interface fluxes along the second-to-last axis, see diffusion.line_fluxes."""
    if _resolve(backend) == "numpy":
        return diffusion.line_fluxes(cells, direction, order, params)
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order}")
    cells = np.ascontiguousarray(cells, dtype=float)
    lead = cells.shape[:-2]
    n = cells.shape[-2]
    flat = cells.reshape((-1, n, NVAR))
    out = np.empty((flat.shape[0], n - 3, NVAR))
    bad = _kernels.line_fluxes(flat, out, _axis(direction), order, *_pargs(params), num_threads())
    if bad >= 0:
        raise AdmissibilityError(f"inadmissible state in flux stencil (flat cell {bad})", index=bad)
    return out.reshape(lead + (n - 3, NVAR))


def imex_update(u, rhs, dt: float, params: PhysParams, backend=None) -> np.ndarray:
    """Batched IMEX Euler sub-step, see source_imex.imex_substep."""
    if _resolve(backend) == "numpy":
        return source_imex.imex_substep(u, rhs, dt, params)
    u = np.asarray(u, dtype=float)
    shape = u.shape
    flat_u = np.ascontiguousarray(u.reshape((-1, NVAR)))
    flat_r = np.ascontiguousarray(np.broadcast_to(rhs, shape).reshape((-1, NVAR)), dtype=float)
    out = np.empty_like(flat_u)
    status, cell = _kernels.imex_update(
        flat_u, flat_r, out, dt, params.gamma, params.r_hat_g, params.lambda_m,
        params.K, params.xi, source_imex.PIVOT_FLOOR, num_threads(),
    )
    if status == 1:
        raise StepFailure(f"singular source system in cell {cell}", cell=cell)
    if status == 2:
        raise StepFailure(f"IMEX update produced an inadmissible state in cell {cell}", cell=cell)
    return out.reshape(shape)
