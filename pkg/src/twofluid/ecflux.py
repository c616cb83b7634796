"""Entropy-conservative two-point fluxes.

Ismail-Roe fluxes for each fluid species, the central average for the
linear Maxwell block, and their concatenation.
"""

from __future__ import annotations

import numpy as np

from .errors import AdmissibilityError
from .state import MAXWELL, SPECIES, NVAR, PhysParams, _axis, cons_to_prim, maxwell_flux

# below this relative gap the series branch is exact to roundoff
LOG_MEAN_SWITCH = 1e-2


def log_mean(a, b):
    """Logarithmic mean (b - a) / (ln b - ln a), stable for a close to b."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if np.any(~(a > 0.0)) or np.any(~(b > 0.0)):
        raise AdmissibilityError("logarithmic mean needs positive arguments")
    zeta = (b - a) / (b + a)
    f = zeta * zeta
    series = (a + b) / (2.0 * (1.0 + f * (1.0 / 3.0 + f * (1.0 / 5.0 + f * (1.0 / 7.0 + f / 9.0)))))
    near = np.abs(b - a) < LOG_MEAN_SWITCH * a
    with np.errstate(divide="ignore", invalid="ignore"):
        exact = (b - a) / np.log(b / a)
    out = np.where(near, series, exact)
    return out[()] if out.ndim == 0 else out


def param_vector(rho, v, p) -> np.ndarray:
    """z = sqrt(rho/p) * (1, v, p)."""
    root = np.sqrt(rho / p)
    z = np.empty(np.shape(rho) + (5,))
    z[..., 0] = root
    z[..., 1:4] = root[..., None] * v
    z[..., 4] = root * p
    return z


def ismail_roe(zl, zr, axis: int, gamma: float) -> np.ndarray:
    """Ismail-Roe flux from the parameter vectors of the two states."""
    zbar = 0.5 * (zl + zr)
    z1ln = log_mean(zl[..., 0], zr[..., 0])
    z5ln = log_mean(zl[..., 4], zr[..., 4])
    m = zbar / zbar[..., :1]
    out = np.empty(zbar.shape)
    f1 = zbar[..., 1 + axis] * z5ln
    out[..., 0] = f1
    out[..., 1:4] = m[..., 1:4] * f1[..., None]
    out[..., 1 + axis] += m[..., 4]
    out[..., 4] = (
        (gamma + 1.0) / (gamma - 1.0) * f1 / z1ln
        + np.sum(zbar[..., 1:4] * out[..., 1:4], axis=-1)
    ) / (2.0 * zbar[..., 0])
    return out


def _fluid_z(cons, species, params):
    prim = cons_to_prim(cons, params)
    s = SPECIES[species]
    return param_vector(prim[..., s], prim[..., s + 1:s + 4], prim[..., s + 4])


def ec_flux_fluid(left, right, direction, species: str, params: PhysParams) -> np.ndarray:
    axis = _axis(direction)
    return ismail_roe(
        _fluid_z(np.asarray(left, float), species, params),
        _fluid_z(np.asarray(right, float), species, params),
        axis,
        params.gamma,
    )


def ec_flux_maxwell(left, right, direction, params: PhysParams) -> np.ndarray:
    left = np.asarray(left, dtype=float)
    right = np.asarray(right, dtype=float)
    return 0.5 * (
        maxwell_flux(left[..., MAXWELL], direction, params)
        + maxwell_flux(right[..., MAXWELL], direction, params)
    )


def ec_flux(left, right, direction, params: PhysParams) -> np.ndarray:
    axis = _axis(direction)
    left = np.asarray(left, dtype=float)
    right = np.asarray(right, dtype=float)
    out = np.empty(np.broadcast_shapes(left.shape, right.shape))
    assert out.shape[-1] == NVAR
    for name, s in SPECIES.items():
        out[..., s:s + 5] = ec_flux_fluid(left, right, axis, name, params)
    out[..., MAXWELL] = ec_flux_maxwell(left, right, axis, params)
    return out
