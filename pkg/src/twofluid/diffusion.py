"""Entropy-stable numerical dissipation.

The dissipation operator is ``R Lambda R^T`` with entropy-scaled right
eigenvectors ``R`` (``R R^T = du/dV``) and a block-constant Rusanov
``Lambda``. The second-order version reconstructs the scaled entropy
variables ``W = R^T V`` with a sign-preserving minmod limiter.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .ecflux import ec_flux
from .state import (
    NVAR,
    SPECIES,
    PhysParams,
    _axis,
    cons_to_prim,
    entropy_vars_from_prim,
    maxwell_weights,
)


class LimiterKind(enum.Enum):
    MINMOD = "minmod"


def minmod_phi(theta):
    """Minmod limiter as a function of the slope ratio."""
    theta = np.asarray(theta, dtype=float)
    out = np.clip(theta, 0.0, 1.0)
    return out[()] if out.ndim == 0 else out


_LIMITERS = {LimiterKind.MINMOD: minmod_phi}


def _ratio(num, den):
    # zero denominator -> theta = 0, the limiter then contributes nothing
    safe = den != 0.0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        return np.where(safe, num / np.where(safe, den, 1.0), 0.0)


def limited_jump(d_left, d_mid, d_right, limiter: LimiterKind = LimiterKind.MINMOD):
    """``b * d_mid`` with ``b = 1 - (phi(d_left/d_mid) + phi(d_right/d_mid)) / 2``.

    For any limiter with phi <= 1 the factor lies in [0, 1], so the result
    never changes sign relative to ``d_mid``.
    """
    phi = _LIMITERS[limiter]
    d_left, d_mid, d_right = (np.asarray(d, dtype=float) for d in (d_left, d_mid, d_right))
    factor = 1.0 - 0.5 * (phi(_ratio(d_left, d_mid)) + phi(_ratio(d_right, d_mid)))
    out = factor * d_mid
    return out[()] if np.ndim(out) == 0 else out


def reconstruct_jump(w_mm, w_m, w_p, w_pp, limiter: LimiterKind = LimiterKind.MINMOD):
    """Limited jump of one scaled variable at the interface between w_m and w_p."""
    w_mm, w_m, w_p, w_pp = (np.asarray(w, dtype=float) for w in (w_mm, w_m, w_p, w_pp))
    return limited_jump(w_m - w_mm, w_p - w_m, w_pp - w_p, limiter)


def fluid_eigenvectors(rho, v, p, axis: int, gamma: float) -> np.ndarray:
    """Right eigenvectors of one Euler block, scaled so that R R^T = du/dV.

    Column order is (v_n - a, v_n, tangential, tangential, v_n + a).
    """
    rho = np.asarray(rho, dtype=float)
    a = np.sqrt(gamma * p / rho)
    vn = v[..., axis]
    kin = 0.5 * np.sum(v * v, axis=-1)
    H = a * a / (gamma - 1.0) + kin
    R = np.zeros(rho.shape + (5, 5))
    R[..., 0, 0] = 1.0
    R[..., 1:4, 0] = v
    R[..., 1 + axis, 0] -= a
    R[..., 4, 0] = H - vn * a
    R[..., 0, 1] = 1.0
    R[..., 1:4, 1] = v
    R[..., 4, 1] = kin
    tangential = [k for k in range(3) if k != axis]
    for col, k in zip((2, 3), tangential):
        R[..., 1 + k, col] = 1.0
        R[..., 4, col] = v[..., k]
    R[..., 0, 4] = 1.0
    R[..., 1:4, 4] = v
    R[..., 1 + axis, 4] += a
    R[..., 4, 4] = H + vn * a
    scale = np.stack(
        [rho / (2.0 * gamma), (gamma - 1.0) * rho / gamma, p, p, rho / (2.0 * gamma)], axis=-1
    )
    return R * np.sqrt(scale)[..., None, :]


_PAIRS = {
    # (first, second) Maxwell slots coupled by one wave family
    0: ((1, 5), (2, 4), (3, 6), (0, 7)),
    1: ((0, 5), (2, 3), (4, 6), (1, 7)),
}


def maxwell_eigenvectors(direction, params: PhysParams) -> np.ndarray:
    """Scaled Maxwell eigenvectors, M^{-1/2} Q with Q orthogonal."""
    axis = _axis(direction)
    Q = np.zeros((8, 8))
    r = np.sqrt(0.5)
    for col, (a, b) in enumerate(_PAIRS[axis]):
        Q[a, 2 * col] = r
        Q[b, 2 * col] = r
        Q[a, 2 * col + 1] = r
        Q[b, 2 * col + 1] = -r
    return Q / np.sqrt(maxwell_weights(params))[:, None]


@dataclass
class EigenSystem:
    """Block-diagonal scaled eigenvectors and Rusanov eigenvalues.

    ``R_ion`` and ``R_electron`` have shape (..., 5, 5), ``R_maxwell`` is a
    constant (8, 8) matrix, and ``lam`` holds the three block speeds with
    shape (..., 3).
    """

    R_ion: np.ndarray
    R_electron: np.ndarray
    R_maxwell: np.ndarray
    lam: np.ndarray

    @property
    def R(self) -> np.ndarray:
        shape = self.R_ion.shape[:-2]
        R = np.zeros(shape + (NVAR, NVAR))
        R[..., 0:5, 0:5] = self.R_ion
        R[..., 5:10, 5:10] = self.R_electron
        R[..., 10:18, 10:18] = self.R_maxwell
        return R

    @property
    def Lambda(self) -> np.ndarray:
        return np.repeat(self.lam, (5, 5, 8), axis=-1)

    def slice(self, start, stop) -> "EigenSystem":
        """Restrict a batch of interfaces along the line axis (second to last of lam)."""
        sl = slice(start, stop)
        return EigenSystem(self.R_ion[..., sl, :, :], self.R_electron[..., sl, :, :],
                           self.R_maxwell, self.lam[..., sl, :])

    def project(self, V) -> np.ndarray:
        """W = R^T V."""
        W = np.empty(np.broadcast_shapes(V.shape, self.lam.shape[:-1] + (NVAR,)))
        W[..., 0:5] = np.einsum("...ji,...j->...i", self.R_ion, V[..., 0:5])
        W[..., 5:10] = np.einsum("...ji,...j->...i", self.R_electron, V[..., 5:10])
        W[..., 10:18] = V[..., 10:18] @ self.R_maxwell
        return W

    def expand(self, W) -> np.ndarray:
        """R Lambda W."""
        LW = W * self.Lambda
        out = np.empty(LW.shape)
        out[..., 0:5] = np.einsum("...ij,...j->...i", self.R_ion, LW[..., 0:5])
        out[..., 5:10] = np.einsum("...ij,...j->...i", self.R_electron, LW[..., 5:10])
        out[..., 10:18] = LW[..., 10:18] @ self.R_maxwell.T
        return out


def _eigen_from_prims(prim_l, prim_r, avg_prim, axis, params):
    g = params.gamma
    lam = np.empty(avg_prim.shape[:-1] + (3,))
    Rs = []
    for k, s in enumerate(SPECIES.values()):
        Rs.append(fluid_eigenvectors(avg_prim[..., s], avg_prim[..., s + 1:s + 4], avg_prim[..., s + 4], axis, g))
        speeds = [
            np.abs(q[..., s + 1 + axis]) + np.sqrt(g * q[..., s + 4] / q[..., s])
            for q in (prim_l, prim_r)
        ]
        lam[..., k] = np.maximum(*speeds)
    lam[..., 2] = np.maximum(np.maximum(lam[..., 0], lam[..., 1]), params.maxwell_speed)
    return EigenSystem(Rs[0], Rs[1], maxwell_eigenvectors(axis, params), lam)


def eigen_system(u_left, u_right, direction, params: PhysParams) -> EigenSystem:
    """Eigensystem at the arithmetic mean of the two conservative states."""
    axis = _axis(direction)
    u_left = np.asarray(u_left, dtype=float)
    u_right = np.asarray(u_right, dtype=float)
    avg = cons_to_prim(0.5 * (u_left + u_right), params)
    return _eigen_from_prims(cons_to_prim(u_left, params), cons_to_prim(u_right, params), avg, axis, params)


def diffusion_jump_o1(u_left, u_right, direction, params: PhysParams) -> np.ndarray:
    """D [V] with D = R Lambda R^T."""
    es = eigen_system(u_left, u_right, direction, params)
    dV = _vars(u_right, params) - _vars(u_left, params)
    return es.expand(es.project(dV))


def _vars(u, params):
    return entropy_vars_from_prim(cons_to_prim(np.asarray(u, dtype=float), params), params)


def diffusion_jump_o2(u_mm, u_m, u_p, u_pp, direction, params: PhysParams,
                      limiter: LimiterKind = LimiterKind.MINMOD) -> np.ndarray:
    """D [P] for the interface between u_m and u_p, equal to R Lambda [W~].

    Each of the three jumps is scaled with the eigenvectors of its own
    interface, so a cell's scaled variables on either side use the R of
    the face they belong to.
    """
    cells = [np.asarray(u, dtype=float) for u in (u_mm, u_m, u_p, u_pp)]
    V = [_vars(u, params) for u in cells]
    es = [eigen_system(cells[k], cells[k + 1], direction, params) for k in range(3)]
    d = [es[k].project(V[k + 1] - V[k]) for k in range(3)]
    return es[1].expand(limited_jump(*d, limiter=limiter))


def es_interface_flux(u_mm, u_m, u_p, u_pp, direction, order: int, params: PhysParams) -> np.ndarray:
    """Entropy-stable flux: EC flux minus half the dissipation term."""
    if order == 1:
        jump = diffusion_jump_o1(u_m, u_p, direction, params)
    elif order == 2:
        jump = diffusion_jump_o2(u_mm, u_m, u_p, u_pp, direction, params)
    else:
        raise ValueError(f"order must be 1 or 2, got {order}")
    return ec_flux(u_m, u_p, direction, params) - 0.5 * jump


def line_fluxes(cells, direction, order: int, params: PhysParams) -> np.ndarray:
    """Entropy-stable fluxes at every interior interface of a batch of lines.

    ``cells`` has shape (..., n, 18) along the sweep direction; the result
    has shape (..., n - 3, 18) and entry ``j`` is the flux between cells
    ``j + 1`` and ``j + 2``. Entropy variables are evaluated once per cell.
    """
    axis = _axis(direction)
    cells = np.asarray(cells, dtype=float)
    prim = cons_to_prim(cells, params)
    V = entropy_vars_from_prim(prim, params)
    uL, uR = cells[..., 1:-2, :], cells[..., 2:-1, :]
    pL, pR = prim[..., 1:-2, :], prim[..., 2:-1, :]
    flux = ec_flux(uL, uR, axis, params)
    if order == 1:
        es = _eigen_from_prims(pL, pR, cons_to_prim(0.5 * (uL + uR), params), axis, params)
        jump = es.expand(es.project(V[..., 2:-1, :] - V[..., 1:-2, :]))
    elif order == 2:
        # scaled jumps at every interface of the line, each in its own eigenbasis
        avg = cons_to_prim(0.5 * (cells[..., :-1, :] + cells[..., 1:, :]), params)
        es = _eigen_from_prims(prim[..., :-1, :], prim[..., 1:, :], avg, axis, params)
        d = es.project(V[..., 1:, :] - V[..., :-1, :])
        mid = es.slice(1, -1)
        jump = mid.expand(limited_jump(d[..., :-2, :], d[..., 1:-1, :], d[..., 2:, :]))
    else:
        raise ValueError(f"order must be 1 or 2, got {order}")
    flux -= 0.5 * jump
    return flux
