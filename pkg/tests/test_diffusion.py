import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_prims, random_states
from twofluid.diffusion import (
    LimiterKind,
    diffusion_jump_o1,
    diffusion_jump_o2,
    eigen_system,
    es_interface_flux,
    fluid_eigenvectors,
    line_fluxes,
    maxwell_eigenvectors,
    minmod_phi,
    reconstruct_jump,
)
from twofluid.ecflux import ec_flux
from twofluid.state import NVAR, PhysParams, entropy_vars, physical_flux, prim_to_cons


def test_minmod_examples():
    assert minmod_phi(-0.5) == 0.0
    assert minmod_phi(0.7) == 0.7
    assert minmod_phi(3.0) == 1.0


@settings(max_examples=300, deadline=None)
@given(st.floats(1e-6, 1e6))
def test_minmod_symmetry_relation(theta):
    assert minmod_phi(1.0 / theta) == pytest.approx(minmod_phi(theta) / theta, rel=1e-15)
    assert minmod_phi(theta) <= 1.0


def test_reconstruct_jump_examples():
    assert reconstruct_jump(2.0, 2.0, 2.0, 2.0) == 0.0
    assert reconstruct_jump(0.0, 1.0, 2.0, 3.0) == 0.0
    assert reconstruct_jump(0.0, 1.0, 3.0, 4.0) == 1.0
    # extremum on both sides: no reconstruction, full jump
    assert reconstruct_jump(1.0, 0.0, 2.0, 1.0) == 2.0
    # zero neighbour jumps
    assert reconstruct_jump(1.0, 1.0, 2.0, 2.0) == 1.0
    assert reconstruct_jump(0.0, 1.0, 1.0, 5.0) == 0.0


@settings(max_examples=500, deadline=None)
@given(st.lists(st.floats(-1e6, 1e6, allow_subnormal=False), min_size=4, max_size=4))
def test_sign_property(w):
    jump = reconstruct_jump(*w, limiter=LimiterKind.MINMOD)
    d = w[2] - w[1]
    assert np.sign(jump) in (0.0, np.sign(d))
    assert abs(jump) <= abs(d)


def _symmetrizer_fd(u, P, h=1e-6):
    """du/dV as the inverse of a central-difference dV/du."""
    J = np.empty(u.shape[:-1] + (NVAR, NVAR))
    for k in range(NVAR):
        up, um = u.copy(), u.copy()
        up[..., k] += h
        um[..., k] -= h
        J[..., :, k] = (entropy_vars(up, P) - entropy_vars(um, P)) / (2 * h)
    return np.linalg.inv(J)


@pytest.mark.parametrize("axis", [0, 1])
def test_barth_scaling_matches_symmetrizer(rng, params, axis):
    uL = random_states(rng, 50, params, rho=(-0.3, 0.3), p=(-0.3, 0.3), vmax=1.0, em=1.0)
    uR = random_states(rng, 50, params, rho=(-0.3, 0.3), p=(-0.3, 0.3), vmax=1.0, em=1.0)
    es = eigen_system(uL, uR, axis, params)
    R = es.R
    H = _symmetrizer_fd(0.5 * (uL + uR), params)
    assert np.max(np.abs(R @ np.swapaxes(R, -1, -2) - H)) < 1e-6 * max(1.0, params.c_hat**2)


def test_fluid_eigenvectors_diagonalize_jacobian(rng):
    # A R = R diag(v - a, v, v, v, v + a) for the Euler flux Jacobian
    g = 5.0 / 3.0
    P = PhysParams()
    q = random_prims(rng, 20, rho=(-0.3, 0.3), p=(-0.3, 0.3), vmax=1.0)
    u = prim_to_cons(q, P)
    h = 1e-7
    for axis in (0, 1):
        R = fluid_eigenvectors(q[:, 0], q[:, 1:4], q[:, 4], axis, g)
        A = np.empty((20, 5, 5))
        for k in range(5):
            up, um = u.copy(), u.copy()
            up[:, k] += h
            um[:, k] -= h
            A[:, :, k] = (physical_flux(up, axis, P)[:, :5] - physical_flux(um, axis, P)[:, :5]) / (2 * h)
        a = np.sqrt(g * q[:, 4] / q[:, 0])
        vn = q[:, 1 + axis]
        lam = np.stack([vn - a, vn, vn, vn, vn + a], axis=-1)
        np.testing.assert_allclose(A @ R, R * lam[:, None, :], atol=1e-5)


def test_maxwell_block_product():
    P = PhysParams(c_hat=3.0)
    for axis in (0, 1):
        R = maxwell_eigenvectors(axis, P)
        np.testing.assert_allclose(R @ R.T, np.diag([1, 1, 1, 9, 9, 9, 1, 9]), atol=1e-14)


def test_maxwell_eigenvectors_diagonalize_flux(rng):
    from twofluid.state import maxwell_flux

    P = PhysParams(c_hat=3.0, xi=1.0, kappa=1.0)
    for axis in (0, 1):
        A = np.stack([maxwell_flux(e, axis, P) for e in np.eye(8)], axis=1)
        R = maxwell_eigenvectors(axis, P)
        D = np.linalg.solve(R, A @ R)
        assert np.max(np.abs(D - np.diag(np.diag(D)))) < 1e-12


def test_eigen_system_lambda_example():
    P = PhysParams(c_hat=10.0)
    q = np.zeros(NVAR)
    q[[0, 4, 5, 9]] = 1.0
    u = prim_to_cons(q, P)
    es = eigen_system(u, u, "x", P)
    assert es.lam[0] == pytest.approx(np.sqrt(5.0 / 3.0), rel=1e-15)
    assert es.lam[2] == 10.0
    assert np.all(es.Lambda[:5] == es.lam[0])
    assert np.all(es.Lambda >= 0)


def test_global_lambda_takes_fluid_max_when_faster():
    P = PhysParams(c_hat=0.5)
    q = np.zeros(NVAR)
    q[[0, 4, 5, 9]] = 1.0
    q[6] = 3.0
    u = prim_to_cons(q, P)
    es = eigen_system(u, u, 0, P)
    assert es.lam[2] == pytest.approx(3.0 + np.sqrt(5.0 / 3.0))


def test_o1_zero_for_equal_states(rng, params):
    u = random_states(rng, 10, params)
    assert np.all(diffusion_jump_o1(u, u, 0, params) == 0.0)


@pytest.mark.parametrize("axis", [0, 1])
def test_o1_dissipative_and_blockwise(rng, params, axis):
    uL, uR = random_states(rng, 1000, params), random_states(rng, 1000, params)
    dV = entropy_vars(uR, params) - entropy_vars(uL, params)
    D = diffusion_jump_o1(uL, uR, axis, params)
    assert np.all(np.sum(dV * D, axis=-1) >= 0.0)
    es = eigen_system(uL, uR, axis, params)
    R = es.R
    H = R @ np.swapaxes(R, -1, -2)
    expect = es.Lambda * np.einsum("...ij,...j->...i", H, dV)
    np.testing.assert_allclose(D, expect, rtol=1e-10, atol=1e-10 * np.max(np.abs(expect)))


def test_o1_maxwell_is_rusanov(rng, params):
    uL, uR = random_states(rng, 200, params), random_states(rng, 200, params)
    D = diffusion_jump_o1(uL, uR, 0, params)
    lam = eigen_system(uL, uR, 0, params).lam[:, 2:3]
    np.testing.assert_allclose(D[:, 10:], lam * (uR - uL)[:, 10:], rtol=0, atol=1e-12 * np.max(lam))


@pytest.mark.parametrize("axis", [0, 1])
def test_o2_entropy_dissipation(rng, params, axis):
    u = [random_states(rng, 10000, params) for _ in range(4)]
    D = diffusion_jump_o2(*u, axis, params)
    dV = entropy_vars(u[2], params) - entropy_vars(u[1], params)
    prod = np.sum(dV * D, axis=-1)
    scale = np.sum(np.abs(dV * D), axis=-1)
    assert np.all(prod >= -1e-13 * scale)


def test_o2_constant_stencil_is_zero(rng, params):
    u = random_states(rng, 5, params)
    assert np.all(diffusion_jump_o2(u, u, u, u, 0, params) == 0.0)


def test_o2_equals_o1_at_extremum(params):
    P = params
    base = np.zeros(NVAR)
    base[[0, 4, 5, 9]] = 1.0
    lo, hi = base.copy(), base.copy()
    hi[[0, 4, 5, 9]] = 1.3
    hi[10:] = 0.4
    u_lo, u_hi = prim_to_cons(lo, P), prim_to_cons(hi, P)
    # hi, lo, hi, lo: every scaled variable changes sign of slope on both sides
    o2 = es_interface_flux(u_hi, u_lo, u_hi, u_lo, 0, 2, P)
    o1 = es_interface_flux(u_hi, u_lo, u_hi, u_lo, 0, 1, P)
    np.testing.assert_allclose(o2, o1, rtol=1e-14, atol=1e-14)


def test_o2_dissipation_second_order_on_smooth_data(params):
    def profile(x):
        q = np.zeros(x.shape + (NVAR,))
        q[..., 0] = 1.5 + 0.3 * np.sin(x)
        q[..., 1] = 0.2 * np.cos(x)
        q[..., 4] = 1.0 + 0.2 * np.cos(2 * x)
        q[..., 5] = 0.8 + 0.1 * np.sin(x)
        q[..., 9] = 1.2
        q[..., 11] = np.sin(x)
        return prim_to_cons(q, params)

    norms = []
    for h in (0.02, 0.01, 0.005):
        x0 = 0.3
        stencil = [profile(np.array(x0 + k * h)) for k in (-1, 0, 1, 2)]
        norms.append(np.max(np.abs(diffusion_jump_o2(*stencil, 0, params))))
    ratios = np.array(norms[:-1]) / np.array(norms[1:])
    assert np.all((ratios > 3.5) & (ratios < 4.5))


def test_es_flux_uniform_is_physical(rng, params):
    u = random_states(rng, 20, params)
    for order in (1, 2):
        np.testing.assert_allclose(es_interface_flux(u, u, u, u, 1, order, params),
                                   physical_flux(u, 1, params), rtol=1e-13, atol=1e-12)


def test_es_flux_rejects_bad_order(rng, params):
    u = random_states(rng, 2, params)
    with pytest.raises(ValueError):
        es_interface_flux(u, u, u, u, 0, 3, params)


@pytest.mark.parametrize("order", [1, 2])
@pytest.mark.parametrize("axis", [0, 1])
def test_line_fluxes_match_pointwise(rng, params, order, axis):
    cells = random_states(rng, (3, 12), params)
    out = line_fluxes(cells, axis, order, params)
    assert out.shape == (3, 9, NVAR)
    for j in range(9):
        ref = es_interface_flux(cells[:, j], cells[:, j + 1], cells[:, j + 2], cells[:, j + 3], axis, order, params)
        np.testing.assert_allclose(out[:, j], ref, rtol=1e-13, atol=1e-12)


def test_es_flux_entropy_stable_per_interface(rng, params):
    u = [random_states(rng, 2000, params) for _ in range(4)]
    F = es_interface_flux(*u, 0, 2, params)
    F_ec = ec_flux(u[1], u[2], 0, params)
    dV = entropy_vars(u[2], params) - entropy_vars(u[1], params)
    # entropy production [V].(F - F_ec) must be non-positive
    prod = np.sum(dV * (F - F_ec), axis=-1)
    assert np.all(prod <= 1e-13 * np.sum(np.abs(dV * (F - F_ec)), axis=-1))
