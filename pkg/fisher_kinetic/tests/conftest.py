import pytest

from fisher_kinetic.densities import GridSpec, gaussian_density, random_density


@pytest.fixture
def grid_1p():
    return GridSpec(d=1, n_particles=1, m=64, period=16.0)


@pytest.fixture
def gaussian(grid_1p):
    # the acceptance Gaussian: d = 1, sigma^2 = 1, m = 64, L = 16
    return gaussian_density(grid_1p, [8.0], 1.0)


@pytest.fixture
def small_grid():
    return GridSpec(d=1, n_particles=1, m=16, period=16.0)


@pytest.fixture(params=[1, 2, 3])
def random_rho(request, grid_1p):
    return random_density(grid_1p, seed=request.param)
