"""Stiff source treatment.

The implicit Euler source update splits the state into three blocks:

* ``W1 = (rho_i, rho_e, B, psi)`` has no source and is advanced explicitly,
* ``W2 = (rho_i v_i, rho_e v_e, E)`` enters the source linearly once W1 is
  known, giving a local 9x9 linear system per cell,
* ``W3 = (E_i, E_e, phi)`` sources depend only on W1 and W2.

So each implicit stage is solved exactly without Newton iterations.
"""

from __future__ import annotations

import numpy as np

from .errors import AdmissibilityError, StepFailure
from .state import PhysParams, cons_to_prim

W1_INDEX = np.array([0, 5, 10, 11, 12, 17])
W2_INDEX = np.array([1, 2, 3, 6, 7, 8, 13, 14, 15])
W3_INDEX = np.array([4, 9, 16])

PIVOT_FLOOR = 1e-300


def split(u):
    u = np.asarray(u, dtype=float)
    return u[..., W1_INDEX], u[..., W2_INDEX], u[..., W3_INDEX]


def merge(w1, w2, w3) -> np.ndarray:
    w1 = np.asarray(w1, dtype=float)
    u = np.empty(w1.shape[:-1] + (18,))
    u[..., W1_INDEX] = w1
    u[..., W2_INDEX] = w2
    u[..., W3_INDEX] = w3
    return u


def assemble_A(w1, params: PhysParams) -> np.ndarray:
    """Coupling matrix of the momentum/electric-field source, W2' = A W2."""
    w1 = np.asarray(w1, dtype=float)
    rho_i, rho_e = w1[..., 0], w1[..., 1]
    Bx, By, Bz = w1[..., 2], w1[..., 3], w1[..., 4]
    A = np.zeros(w1.shape[:-1] + (9, 9))
    for off, rg, rho in ((0, params.r_hat_g, rho_i), (3, params.r_eg, rho_e)):
        A[..., off + 0, off + 1] = Bz / rg
        A[..., off + 0, off + 2] = -By / rg
        A[..., off + 1, off + 0] = -Bz / rg
        A[..., off + 1, off + 2] = Bx / rg
        A[..., off + 2, off + 0] = By / rg
        A[..., off + 2, off + 1] = -Bx / rg
        for k in range(3):
            A[..., off + k, 6 + k] = rho / rg
    K = params.K
    for k in range(3):
        A[..., 6 + k, k] = -params.r_i / K
        A[..., 6 + k, 3 + k] = -params.r_e / K
    return A


def gauss_solve(M, b) -> np.ndarray:
    """Batched dense Gaussian elimination with partial pivoting.

    ``M`` has shape (..., n, n) and ``b`` (..., n). Raises StepFailure with
    the flat batch index of the first system whose pivot underflows.
    """
    M = np.array(M, dtype=float)
    b = np.array(b, dtype=float)
    batch = M.shape[:-2]
    n = M.shape[-1]
    M = M.reshape((-1, n, n))
    b = b.reshape((-1, n))
    rows = np.arange(M.shape[0])
    for k in range(n):
        piv = k + np.argmax(np.abs(M[:, k:, k]), axis=1)
        swap = piv != k
        if np.any(swap):
            r = rows[swap]
            p = piv[swap]
            M[r, k], M[r, p] = M[r, p].copy(), M[r, k].copy()
            b[r, k], b[r, p] = b[r, p].copy(), b[r, k].copy()
        pivot = M[:, k, k]
        bad = ~(np.abs(pivot) >= PIVOT_FLOOR)
        if np.any(bad):
            cell = int(np.flatnonzero(bad)[0])
            raise StepFailure(f"singular source system in cell {cell}", cell=cell)
        factor = M[:, k + 1:, k] / pivot[:, None]
        M[:, k + 1:, k:] -= factor[:, :, None] * M[:, None, k, k:]
        b[:, k + 1:] -= factor * b[:, k:k + 1]
    x = np.empty_like(b)
    for k in range(n - 1, -1, -1):
        x[:, k] = (b[:, k] - np.sum(M[:, k, k + 1:] * x[:, k + 1:], axis=1)) / M[:, k, k]
    return x.reshape(batch + (n,))


def implicit_momentum_solve(g2, A, dt: float) -> np.ndarray:
    """Solve (I - dt A) W2 = G2 exactly (up to roundoff)."""
    A = np.asarray(A, dtype=float)
    M = np.eye(9) - dt * A
    return gauss_solve(M, g2)


def energy_sources(w1, w2, params: PhysParams) -> np.ndarray:
    """Sources of (E_i, E_e, phi) evaluated from momenta, never velocities."""
    rg = params.r_hat_g
    E = w2[..., 6:9]
    out = np.empty(w1.shape[:-1] + (3,))
    out[..., 0] = np.sum(E * w2[..., 0:3], axis=-1) / rg
    out[..., 1] = -params.lambda_m / rg * np.sum(E * w2[..., 3:6], axis=-1)
    out[..., 2] = params.xi * (params.r_i * w1[..., 0] + params.r_e * w1[..., 1]) / params.K
    return out


def imex_substep(u, rhs, dt: float, params: PhysParams, check: bool = True) -> np.ndarray:
    """Forward Euler on the fluxes, backward Euler on the source.

    Solves ``U' = U + dt L(U) + dt S(U')`` exactly by the block sequence
    W1 -> W2 (local linear solve) -> W3.
    """
    u = np.asarray(u, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    w1, w2, w3 = split(u + dt * rhs)
    if dt != 0.0:
        w2 = implicit_momentum_solve(w2, assemble_A(w1, params), dt)
        w3 = w3 + dt * energy_sources(w1, w2, params)
    out = merge(w1, w2, w3)
    if check:
        try:
            cons_to_prim(out, params)
        except AdmissibilityError as exc:
            raise StepFailure(f"IMEX update produced an inadmissible state: {exc}", cell=exc.index) from exc
    return out


def source_bound(u, params: PhysParams) -> np.ndarray:
    """Row-sum norm of the coupling matrix per cell."""
    w1 = np.asarray(u, dtype=float)[..., W1_INDEX]
    return np.max(np.sum(np.abs(assemble_A(w1, params)), axis=-1), axis=-1)


def explicit_source_dt(cells, params: PhysParams, sigma: float = 0.5) -> float:
    """Largest explicit step the source allows, sigma / max ||A||_inf."""
    if not 0.0 < sigma <= 1.0:
        raise ValueError(f"sigma must lie in (0, 1], got {sigma}")
    cells = getattr(cells, "interior", cells)
    norm = float(np.max(source_bound(cells, params)))
    return np.inf if norm == 0.0 else sigma / norm

