import math

import pytest

from dephasr import DensityMatrix, ModelParams, build_cache

# reference scenario used throughout: omega_s=1, gamma=0.1, cutoff=5, T=0.1,
# initial state (sqrt(3)/2)|0> + (1/2)|1>
R01 = math.sqrt(3) / 4


@pytest.fixture(scope="session")
def ref_params():
    return ModelParams(omega_s=1.0, gamma=0.1, cutoff=5.0, temperature=0.1)


@pytest.fixture(scope="session")
def zero_t_params():
    return ModelParams(omega_s=1.0, gamma=0.1, cutoff=5.0, temperature=0.0)


@pytest.fixture(scope="session")
def ref_state():
    return DensityMatrix(0.75, R01, R01, 0.25)


@pytest.fixture(scope="session")
def cache_zero_t(zero_t_params):
    return build_cache(zero_t_params, t_max=10.0, grid_step=5e-4)


@pytest.fixture(scope="session")
def cache_ref(ref_params):
    return build_cache(ref_params, t_max=10.0, grid_step=5e-4)


@pytest.fixture(scope="session")
def cache_ref_15(ref_params):
    return build_cache(ref_params, t_max=15.0, grid_step=5e-4)
