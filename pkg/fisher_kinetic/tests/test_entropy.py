import numpy as np
import pytest

from fisher_kinetic.densities import (
    GridSpec, MixingMeasure, entropy, gaussian_density, mean_entropy_sequence, overlapping_mixture,
    product_density, random_density, uniform_density, well_separated_mixture,
)
from fisher_kinetic.densities.density import affine_entropy, mixing_entropy


def test_uniform_entropy_is_the_log_volume():
    grid = GridSpec(d=2, n_particles=1, m=8, period=4.0)
    assert entropy(uniform_density(grid)) == pytest.approx(np.log(16.0), rel=1e-12)


def test_gaussian_entropy(gaussian):
    assert entropy(gaussian) == pytest.approx(0.5 * np.log(2.0 * np.pi * np.e), rel=1e-9)


def test_entropy_is_additive_on_products(small_grid):
    rho = random_density(small_grid, seed=5)
    assert entropy(product_density(rho, 3)) == pytest.approx(3.0 * entropy(rho), rel=1e-10)


def test_mixing_entropy(grid_1p, gaussian):
    P = MixingMeasure.from_lists([0.5, 0.5], [gaussian, uniform_density(grid_1p)])
    assert mixing_entropy(P) == pytest.approx(np.log(2.0), rel=1e-14)
    assert mixing_entropy(MixingMeasure.from_lists([1.0], [gaussian])) == 0.0


@pytest.mark.parametrize("fixture", (overlapping_mixture, well_separated_mixture))
def test_mean_entropy_between_affine_bounds(small_grid, fixture):
    P = fixture(small_grid)
    base = affine_entropy(P)
    mixing = mixing_entropy(P)
    table = mean_entropy_sequence(P, 4)
    assert [n for n, _ in table] == [1, 2, 3, 4]
    for n, value in table:
        assert -1e-10 <= value - base <= mixing / n + 1e-10


def test_single_atom_mean_entropy_is_flat(small_grid):
    rho = gaussian_density(small_grid, [8.0], 1.0)
    table = mean_entropy_sequence(MixingMeasure.from_lists([1.0], [rho]), 3)
    np.testing.assert_allclose([value for _, value in table], entropy(rho), rtol=1e-10)
