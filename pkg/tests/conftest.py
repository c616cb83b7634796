import numpy as np
import pytest

from twofluid import backend
from twofluid.state import NVAR, PhysParams, prim_to_cons


def random_prims(rng, shape, rho=(-2.0, 2.0), p=(-2.0, 2.0), vmax=5.0, em=2.0):
    """Admissible primitive states; densities/pressures log-uniform in 10**range."""
    shape = tuple(np.atleast_1d(shape))
    q = np.empty(shape + (NVAR,))
    for s in (0, 5):
        q[..., s] = 10.0 ** rng.uniform(*rho, shape)
        q[..., s + 1:s + 4] = rng.uniform(-vmax, vmax, shape + (3,))
        q[..., s + 4] = 10.0 ** rng.uniform(*p, shape)
    q[..., 10:] = rng.uniform(-em, em, shape + (8,))
    return q


def random_states(rng, shape, params, **kw):
    return prim_to_cons(random_prims(rng, shape, **kw), params)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def params():
    return PhysParams(lambda_m=25.0, r_hat_g=0.3, lambda_hat_d=0.7, c_hat=3.0, xi=1.2, kappa=0.8)


@pytest.fixture(params=backend.available_backends())
def kernel(request):
    return request.param
