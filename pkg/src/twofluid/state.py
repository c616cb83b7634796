"""State layout, physical fluxes, source term and entropy functions.

All routines work on arrays whose last axis holds the 18 components of a
cell state, so a single state has shape ``(18,)`` and a batch ``(..., 18)``.
Conservative layout::

    0  rho_i    1-3  rho_i v_i    4  E_i
    5  rho_e    6-8  rho_e v_e    9  E_e
    10-12 B     13-15 E           16 phi    17 psi

The primitive layout uses the same slots with ``(rho, v, p)`` per species.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import AdmissibilityError

NVAR = 18

RHO_I, EN_I = 0, 4
RHO_E, EN_E = 5, 9
MOM_I = slice(1, 4)
MOM_E = slice(6, 9)
BFIELD = slice(10, 13)
EFIELD = slice(13, 16)
PHI, PSI = 16, 17

ION = slice(0, 5)
ELECTRON = slice(5, 10)
MAXWELL = slice(10, 18)

SPECIES = {"ion": 0, "electron": 5}

PRIM_NAMES = (
    "rho_i", "vi_x", "vi_y", "vi_z", "p_i",
    "rho_e", "ve_x", "ve_y", "ve_z", "p_e",
    "Bx", "By", "Bz", "Ex", "Ey", "Ez", "phi", "psi",
)
CONS_NAMES = (
    "rho_i", "mi_x", "mi_y", "mi_z", "En_i",
    "rho_e", "me_x", "me_y", "me_z", "En_e",
    "Bx", "By", "Bz", "Ex", "Ey", "Ez", "phi", "psi",
)


@dataclass(frozen=True)
class PhysParams:
    """Non-dimensional model constants.

    Attributes
    ----------
    gamma : ratio of specific heats.
    lambda_m : ion to electron mass ratio.
    r_hat_g : normalized Larmor radius.
    lambda_hat_d : Debye length normalized by the Larmor radius.
    c_hat : normalized speed of light.
    xi, kappa : electric / magnetic divergence cleaning speed factors.
    """

    gamma: float = 5.0 / 3.0
    lambda_m: float = 25.0
    r_hat_g: float = 1.0
    lambda_hat_d: float = 1.0
    c_hat: float = 10.0
    xi: float = 1.0
    kappa: float = 1.0

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ValueError(f"gamma must exceed 1, got {self.gamma}")
        if not self.lambda_m >= 1.0:
            raise ValueError(f"lambda_m must be >= 1, got {self.lambda_m}")
        for name in ("r_hat_g", "lambda_hat_d", "c_hat"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive")
        if self.xi < 0.0 or self.kappa < 0.0:
            raise ValueError("cleaning factors xi, kappa must be non-negative")

    @property
    def r_i(self) -> float:
        return 1.0

    @property
    def r_e(self) -> float:
        return -self.lambda_m

    @property
    def r_eg(self) -> float:
        """Signed electron Larmor factor, -r_hat_g / lambda_m."""
        return -self.r_hat_g / self.lambda_m

    @property
    def K(self) -> float:
        return self.lambda_hat_d**2 * self.r_hat_g

    @property
    def maxwell_speed(self) -> float:
        return self.c_hat * max(1.0, self.xi, self.kappa)

    def replace(self, **changes) -> "PhysParams":
        fields = {k: getattr(self, k) for k in self.__dataclass_fields__}
        fields.update(changes)
        return PhysParams(**fields)


class EntropyTriple(NamedTuple):
    e_i: np.ndarray
    e_e: np.ndarray
    e_m: np.ndarray


def _axis(direction) -> int:
    if direction in (0, "x"):
        return 0
    if direction in (1, "y"):
        return 1
    raise ValueError(f"unsupported direction {direction!r}")


def _check_positive(values, species, what):
    values = np.asarray(values)
    bad = ~(values > 0.0)
    if np.any(bad):
        idx = int(np.flatnonzero(bad.ravel())[0])
        raise AdmissibilityError(
            f"non-positive {species} {what} ({float(values.ravel()[idx]):.6g}) at flat index {idx}",
            species=species,
            index=idx,
        )


def prim_to_cons(prim, params: PhysParams) -> np.ndarray:
    prim = np.asarray(prim, dtype=float)
    cons = prim.copy()
    g1 = params.gamma - 1.0
    for name, s in SPECIES.items():
        rho = prim[..., s]
        v = prim[..., s + 1:s + 4]
        p = prim[..., s + 4]
        _check_positive(rho, name, "density")
        _check_positive(p, name, "pressure")
        cons[..., s + 1:s + 4] = rho[..., None] * v
        cons[..., s + 4] = p / g1 + 0.5 * rho * np.sum(v * v, axis=-1)
    return cons


def pressure(cons, species: str, params: PhysParams) -> np.ndarray:
    s = SPECIES[species]
    rho = cons[..., s]
    mom = cons[..., s + 1:s + 4]
    return (params.gamma - 1.0) * (cons[..., s + 4] - 0.5 * np.sum(mom * mom, axis=-1) / rho)


def cons_to_prim(cons, params: PhysParams) -> np.ndarray:
    cons = np.asarray(cons, dtype=float)
    prim = cons.copy()
    for name, s in SPECIES.items():
        rho = cons[..., s]
        _check_positive(rho, name, "density")
        p = pressure(cons, name, params)
        _check_positive(p, name, "pressure")
        prim[..., s + 1:s + 4] = cons[..., s + 1:s + 4] / rho[..., None]
        prim[..., s + 4] = p
    return prim


def euler_flux(rho, v, p, En, axis: int) -> np.ndarray:
    """Five-component Euler flux of one species along ``axis``."""
    vn = v[..., axis]
    out = np.empty(rho.shape + (5,))
    out[..., 0] = rho * vn
    out[..., 1:4] = (rho * vn)[..., None] * v
    out[..., 1 + axis] += p
    out[..., 4] = (En + p) * vn
    return out


def maxwell_flux(um, direction, params: PhysParams) -> np.ndarray:
    """Linear flux of the perfectly hyperbolic Maxwell block (8 components)."""
    axis = _axis(direction)
    um = np.asarray(um, dtype=float)
    Bx, By, Bz = um[..., 0], um[..., 1], um[..., 2]
    Ex, Ey, Ez = um[..., 3], um[..., 4], um[..., 5]
    phi, psi = um[..., 6], um[..., 7]
    c2 = params.c_hat**2
    xi, ka = params.xi, params.kappa
    out = np.empty(um.shape)
    if axis == 0:
        out[..., 0] = ka * psi
        out[..., 1] = -Ez
        out[..., 2] = Ey
        out[..., 3] = xi * c2 * phi
        out[..., 4] = c2 * Bz
        out[..., 5] = -c2 * By
        out[..., 6] = xi * Ex
        out[..., 7] = ka * c2 * Bx
    else:
        out[..., 0] = Ez
        out[..., 1] = ka * psi
        out[..., 2] = -Ex
        out[..., 3] = -c2 * Bz
        out[..., 4] = xi * c2 * phi
        out[..., 5] = c2 * Bx
        out[..., 6] = xi * Ey
        out[..., 7] = ka * c2 * By
    return out


def physical_flux(cons, direction, params: PhysParams) -> np.ndarray:
    axis = _axis(direction)
    cons = np.asarray(cons, dtype=float)
    prim = cons_to_prim(cons, params)
    out = np.empty(cons.shape)
    for s in SPECIES.values():
        out[..., s:s + 5] = euler_flux(
            prim[..., s], prim[..., s + 1:s + 4], prim[..., s + 4], cons[..., s + 4], axis
        )
    out[..., MAXWELL] = maxwell_flux(cons[..., MAXWELL], axis, params)
    return out


def source(cons, params: PhysParams) -> np.ndarray:
    """Lorentz-force, current and charge source terms.

    Works directly on momenta, so it is defined for zero densities too.
    """
    cons = np.asarray(cons, dtype=float)
    out = np.zeros(cons.shape)
    B = cons[..., BFIELD]
    E = cons[..., EFIELD]
    rg = params.r_hat_g
    for s, factor in ((0, 1.0 / rg), (5, -params.lambda_m / rg)):
        rho = cons[..., s]
        mom = cons[..., s + 1:s + 4]
        out[..., s + 1:s + 4] = factor * (rho[..., None] * E + np.cross(mom, B))
        out[..., s + 4] = factor * np.sum(E * mom, axis=-1)
    K = params.K
    out[..., EFIELD] = -(params.r_i * cons[..., MOM_I] + params.r_e * cons[..., MOM_E]) / K
    out[..., PHI] = params.xi * (params.r_i * cons[..., RHO_I] + params.r_e * cons[..., RHO_E]) / K
    return out


def _fluid_entropy(rho, p, gamma):
    s = np.log(p) - gamma * np.log(rho)
    return -rho * s / (gamma - 1.0)


def maxwell_entropy(um, params: PhysParams) -> np.ndarray:
    um = np.asarray(um, dtype=float)
    c2 = params.c_hat**2
    B2 = np.sum(um[..., 0:3] ** 2, axis=-1)
    E2 = np.sum(um[..., 3:6] ** 2, axis=-1)
    return 0.5 * (B2 + um[..., 6] ** 2) + 0.5 * (E2 + um[..., 7] ** 2) / c2


def entropy(cons, params: PhysParams) -> EntropyTriple:
    cons = np.asarray(cons, dtype=float)
    prim = cons_to_prim(cons, params)
    g = params.gamma
    return EntropyTriple(
        _fluid_entropy(prim[..., RHO_I], prim[..., EN_I], g),
        _fluid_entropy(prim[..., RHO_E], prim[..., EN_E], g),
        maxwell_entropy(cons[..., MAXWELL], params),
    )


def maxwell_weights(params: PhysParams) -> np.ndarray:
    """Diagonal of the quadratic Maxwell entropy Hessian."""
    ic2 = 1.0 / params.c_hat**2
    return np.array([1.0, 1.0, 1.0, ic2, ic2, ic2, 1.0, ic2])


def fluid_entropy_vars(rho, v, p, gamma) -> np.ndarray:
    s = np.log(p) - gamma * np.log(rho)
    beta = rho / p
    out = np.empty(np.shape(rho) + (5,))
    out[..., 0] = (gamma - s) / (gamma - 1.0) - 0.5 * beta * np.sum(v * v, axis=-1)
    out[..., 1:4] = beta[..., None] * v
    out[..., 4] = -beta
    return out


def entropy_vars(cons, params: PhysParams) -> np.ndarray:
    cons = np.asarray(cons, dtype=float)
    prim = cons_to_prim(cons, params)
    return entropy_vars_from_prim(prim, params)


def entropy_vars_from_prim(prim, params: PhysParams) -> np.ndarray:
    out = np.empty(prim.shape)
    for s in SPECIES.values():
        out[..., s:s + 5] = fluid_entropy_vars(
            prim[..., s], prim[..., s + 1:s + 4], prim[..., s + 4], params.gamma
        )
    out[..., MAXWELL] = prim[..., MAXWELL] * maxwell_weights(params)
    return out


def maxwell_entropy_flux(um, direction, params: PhysParams) -> np.ndarray:
    """Quadratic entropy flux 1/2 u_m^T M A u_m of the linear Maxwell block."""
    um = np.asarray(um, dtype=float)
    Vm = um * maxwell_weights(params)
    return 0.5 * np.sum(Vm * maxwell_flux(um, direction, params), axis=-1)


def entropy_potential(cons, direction, params: PhysParams) -> EntropyTriple:
    """Entropy potentials V^T f - q for the three blocks."""
    axis = _axis(direction)
    cons = np.asarray(cons, dtype=float)
    cons_to_prim(cons, params)
    um = cons[..., MAXWELL]
    chi_m = np.sum(um * maxwell_weights(params) * maxwell_flux(um, axis, params), axis=-1)
    chi_m = chi_m - maxwell_entropy_flux(um, axis, params)
    return EntropyTriple(
        cons[..., 1 + axis].copy(),
        cons[..., 6 + axis].copy(),
        chi_m,
    )


def entropy_flux(cons, direction, params: PhysParams) -> EntropyTriple:
    """Entropy fluxes q = v e for the fluids and the quadratic Maxwell flux."""
    axis = _axis(direction)
    cons = np.asarray(cons, dtype=float)
    prim = cons_to_prim(cons, params)
    e = entropy(cons, params)
    return EntropyTriple(
        prim[..., 1 + axis] * e.e_i,
        prim[..., 6 + axis] * e.e_e,
        maxwell_entropy_flux(cons[..., MAXWELL], axis, params),
    )


def sound_speed(rho, p, gamma):
    return np.sqrt(gamma * p / rho)


def wave_speeds(cons, direction, params: PhysParams):
    """Largest characteristic speed of the ion, electron and Maxwell blocks."""
    axis = _axis(direction)
    prim = cons_to_prim(np.asarray(cons, dtype=float), params)
    g = params.gamma
    ion = np.abs(prim[..., 1 + axis]) + sound_speed(prim[..., RHO_I], prim[..., EN_I], g)
    ele = np.abs(prim[..., 6 + axis]) + sound_speed(prim[..., RHO_E], prim[..., EN_E], g)
    return ion, ele, params.maxwell_speed
