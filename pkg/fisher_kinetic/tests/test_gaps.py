import numpy as np
import pytest

from fisher_kinetic.densities import (
    GridSpec, MixingMeasure, gaussian_density, mixture_product_density, overlapping_mixture, product_density,
    random_density, well_separated_mixture,
)
from fisher_kinetic.errors import DensityError, GridError
from fisher_kinetic.kinetic import KineticSpec, WaveFunction, fisher_info
from fisher_kinetic.theorems import (
    affine_value, affinity_defect, convexity_test, diamagnetic_test, mean_info_sequence,
    normalized_monotonicity_check, superadditivity_decomposition, superadditivity_gap,
)
from fisher_kinetic.theorems.gaps import doubling_subsequence, is_nondecreasing

LATTICE = (KineticSpec(s=0.5, symbol='lattice'), KineticSpec(s=1.0, symbol='lattice'))


def _tol(value):
    return 1e-9 * (1.0 + abs(value))


@pytest.mark.parametrize("spec", LATTICE)
@pytest.mark.parametrize("seed", range(5))
def test_superadditivity(spec, seed):
    mu = random_density(GridSpec(d=1, n_particles=3, m=16, period=16.0), seed=seed)
    assert superadditivity_gap(mu, 1, spec) >= -_tol(fisher_info(mu, spec).value)


def test_product_density_saturates_superadditivity():
    rho = random_density(GridSpec(d=1, n_particles=1, m=16, period=16.0), seed=3)
    mu = product_density(rho, 4)
    spec = KineticSpec(s=0.5)
    assert abs(superadditivity_gap(mu, 2, spec)) <= 1e-10 * fisher_info(mu, spec).value


def test_structured_mixture_has_a_strict_gap(grid_1p):
    mu = mixture_product_density(well_separated_mixture(grid_1p), 2)
    spec = KineticSpec(s=0.5, symbol='lattice')
    assert superadditivity_gap(mu, 1, spec) > 0.01 * fisher_info(mu, spec).value


@pytest.mark.parametrize("spec", LATTICE)
def test_normalized_monotonicity(spec):
    mu = random_density(GridSpec(d=1, n_particles=4, m=8, period=8.0), seed=21)
    for n in (1, 2):
        assert normalized_monotonicity_check(mu, n, spec) >= -_tol(fisher_info(mu, spec).value)


def test_monotonicity_needs_a_divisor():
    mu = random_density(GridSpec(d=1, n_particles=3, m=8, period=8.0), seed=0)
    with pytest.raises(GridError):
        normalized_monotonicity_check(mu, 2, LATTICE[0])
    with pytest.raises(GridError):
        superadditivity_gap(mu, 3, LATTICE[0])


def test_single_atom_mean_info_is_flat(small_grid):
    rho = gaussian_density(small_grid, [8.0], 1.0)
    P = MixingMeasure.from_lists([1.0], [rho])
    spec = KineticSpec(s=0.5)
    table = mean_info_sequence(P, spec, 3)
    assert [n for n, _ in table] == [1, 2, 3]
    for _, g in table:
        assert g == pytest.approx(affine_value(P, spec), rel=1e-10)
    assert affinity_defect(P, spec, 2) == pytest.approx(0.0, abs=1e-10 * affine_value(P, spec))


@pytest.mark.parametrize("spec", LATTICE)
def test_mean_info_under_the_affine_bound(small_grid, spec):
    P = overlapping_mixture(small_grid)
    table = mean_info_sequence(P, spec, 4)
    bound = affine_value(P, spec)
    for n, g in table:
        assert g <= bound + _tol(bound)
        assert affinity_defect(P, spec, n) == pytest.approx(bound - g, rel=1e-12, abs=1e-14)
    assert is_nondecreasing([g for _, g in doubling_subsequence(table)])
    # the marginal is rho itself for n = 1, where convexity is strict
    assert bound - table[0][1] > 0.0
    with pytest.raises(GridError):
        mean_info_sequence(P, spec, 0)


@pytest.mark.parametrize("spec", LATTICE)
@pytest.mark.parametrize("seed", range(5))
def test_diamagnetic_inequality(spec, seed):
    grid = GridSpec(d=1, n_particles=2, m=8, period=8.0)
    amplitude = np.sqrt(random_density(grid, seed=seed).values)
    rng = np.random.default_rng(seed)
    phase = rng.uniform(0.0, 2.0 * np.pi, size=8)
    u = WaveFunction(grid, amplitude * np.exp(1j * np.add.outer(phase, phase)))
    assert diamagnetic_test(u, spec) >= -1e-10


def test_diamagnetic_gap_vanishes_for_positive_functions(gaussian):
    u = WaveFunction(gaussian.grid, np.sqrt(gaussian.values))
    assert diamagnetic_test(u, KineticSpec(s=0.5)) == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("spec", LATTICE)
@pytest.mark.parametrize("t", (0.1, 0.5, 0.9))
def test_convexity(random_rho, spec, t):
    other = random_density(random_rho.grid, seed=99)
    assert convexity_test(random_rho, other, t, spec) >= -1e-10


def test_convexity_endpoints_and_errors(random_rho, small_grid):
    other = random_density(random_rho.grid, seed=98)
    spec = LATTICE[0]
    assert convexity_test(random_rho, other, 0.0, spec) == pytest.approx(0.0, abs=1e-12)
    assert convexity_test(random_rho, other, 1.0, spec) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(DensityError):
        convexity_test(random_rho, other, 1.5, spec)
    with pytest.raises(DensityError):
        convexity_test(random_rho, random_density(small_grid, seed=1), 0.5, spec)


@pytest.mark.parametrize("s", (0.5, 1.0))
def test_superadditivity_decomposition_accounts_for_the_gap(s):
    mu = random_density(GridSpec(d=1, n_particles=3, m=8, period=8.0), seed=17)
    spec = KineticSpec(s=s, symbol='lattice')
    parts = superadditivity_decomposition(mu, 1, spec)
    direct = superadditivity_gap(mu, 1, spec)
    scale = fisher_info(mu, spec).value
    assert parts['superadditivity_gap'] == pytest.approx(direct, abs=1e-9 * scale)
    assert parts['total'] == pytest.approx(direct, abs=1e-9 * scale)
    for key in ('diamagnetic_n', 'convexity_n', 'diamagnetic_rest', 'convexity_rest'):
        assert parts[key] >= -1e-10 * scale


def test_doubling_helpers():
    table = [(1, 0.1), (2, 0.2), (3, 0.15), (4, 0.3), (5, 0.0), (8, 0.4)]
    assert doubling_subsequence(table) == [(1, 0.1), (2, 0.2), (4, 0.3), (8, 0.4)]
    assert is_nondecreasing([0.1, 0.2, 0.2 - 1e-12, 0.3])
    assert not is_nondecreasing([0.1, 0.2, 0.15])
