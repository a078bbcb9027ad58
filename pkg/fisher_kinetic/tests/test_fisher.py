import warnings

import numpy as np
import pytest

from fisher_kinetic.densities import GridSpec, product_density, random_density, uniform_density
from fisher_kinetic.errors import SpecError
from fisher_kinetic.kinetic import (
    KineticSpec, cutoff_fisher_info, entropy_dissipation, fisher_info, gaussian_fisher_closed_form,
    gaussian_fisher_torus_series, gradient_form,
)
from fisher_kinetic.kinetic.fisher import gradient_contributions
from fisher_kinetic.kinetic.singular import riemann_zeta


def test_gaussian_s1_matches_closed_form(gaussian):
    assert fisher_info(gaussian).value == pytest.approx(0.25, rel=1e-6)


@pytest.mark.parametrize("s", (0.25, 0.5, 0.75, 0.99, 1.0))
def test_gaussian_matches_torus_lattice_sum(gaussian, s):
    value = fisher_info(gaussian, KineticSpec(s=s)).value
    # sqrt of the wrapped density differs from the wrapped sqrt by O(exp(-L^2 / (16 sigma2)))
    assert value == pytest.approx(gaussian_fisher_torus_series(1, 1.0, s, 16.0), rel=1e-7)


def test_torus_lattice_sum_departs_from_free_space_at_half_order():
    # leading correction of the lattice sum of |k| w(k): 2 zeta(-1) w(0) dk^2
    dk = 2.0 * np.pi / 16.0
    w0 = 2.0 / np.sqrt(2.0 * np.pi)
    free_space = gaussian_fisher_closed_form(1, 1.0, 0.5)
    predicted = free_space + 2.0 * riemann_zeta(-1.0) * w0 * dk ** 2
    torus = gaussian_fisher_torus_series(1, 1.0, 0.5, 16.0)
    assert free_space == pytest.approx(1.0 / np.sqrt(2.0 * np.pi))
    assert torus == pytest.approx(predicted, rel=3e-3)
    assert gaussian_fisher_torus_series(1, 1.0, 1.0, 16.0) == pytest.approx(0.25, rel=1e-12)


@pytest.mark.parametrize("d sigma2 s expected".split(),
                         ((1, 1.0, 1.0, 0.25),
                          (3, 1.0, 1.0, 0.75),
                          (1, 0.5, 1.0, 0.5),
                          (2, 1.0, 0.5, np.sqrt(0.5) * 0.886226925452758)))
def test_closed_form_values(d, sigma2, s, expected):
    assert gaussian_fisher_closed_form(d, sigma2, s) == pytest.approx(expected, rel=1e-12)


def test_uniform_density_has_zero_information():
    mu = uniform_density(GridSpec(d=1, n_particles=2, m=16, period=16.0))
    for s in (0.5, 1.0):
        assert fisher_info(mu, KineticSpec(s=s)).value == pytest.approx(0.0, abs=1e-20)


def test_plancherel_exactness(random_rho):
    spectral = fisher_info(random_rho).value
    assert gradient_form(random_rho, 'spectral') == pytest.approx(spectral, rel=1e-12)


def test_centered_gradient_form_on_gaussian(gaussian):
    assert gradient_form(gaussian, 'centered') == pytest.approx(0.25, rel=1e-2)
    gradient = fisher_info(gaussian, KineticSpec(method='gradient'))
    assert gradient.method == 'gradient'
    assert gradient.value == pytest.approx(gradient_form(gaussian, 'centered'), rel=1e-14)


def test_gradient_contributions_per_particle():
    rho = random_density(GridSpec(d=1, n_particles=1, m=32, period=16.0), seed=4)
    contributions = gradient_contributions(product_density(rho, 2), 'spectral')
    assert contributions.shape == (2,)
    np.testing.assert_allclose(contributions, gradient_form(rho, 'spectral'), rtol=1e-10)
    with pytest.raises(SpecError):
        gradient_form(rho, 'upwind')


def test_singular_method_is_exact_on_the_reference_gaussian(gaussian):
    spectral = fisher_info(gaussian, KineticSpec(s=0.5)).value
    singular = fisher_info(gaussian, KineticSpec(s=0.5, method='singular'))
    assert singular.value == pytest.approx(spectral, rel=1e-10)
    assert singular.diagnostics['constant'] > 0.0


def test_result_dictionary(gaussian):
    out = fisher_info(gaussian, KineticSpec(s=0.5)).to_dict()
    assert set(out) == {'value', 's', 'method', 'symbol', 'grid', 'per_axis', 'diagnostics'}
    assert out['grid'] == {'d': 1, 'n_particles': 1, 'm': 64, 'period': 16.0}
    assert out['per_axis'] == [out['value']]


@pytest.mark.parametrize("s", (0.5, 1.0))
def test_cutoff_lowers_the_information(gaussian, s):
    plain = fisher_info(gaussian, KineticSpec(s=s)).value
    cut = cutoff_fisher_info(gaussian, s, -0.5)
    assert 0.0 < cut < plain
    via_spec = fisher_info(gaussian, KineticSpec(s=s, gamma=-0.5)).value
    assert via_spec == pytest.approx(cut, rel=1e-12)


def test_cutoff_identity_reduction(gaussian):
    with pytest.raises(SpecError):
        cutoff_fisher_info(gaussian, 1.0, 0.0)
    with pytest.raises(SpecError):
        cutoff_fisher_info(gaussian, 1.0, 0.25)
    with pytest.warns(UserWarning):
        value = cutoff_fisher_info(gaussian, 1.0, 0.0, allow_identity=True)
    assert value == pytest.approx(fisher_info(gaussian).value, rel=1e-12)


def test_de_bruijn_identity(gaussian):
    assert entropy_dissipation(gaussian, 1.0) == pytest.approx(4.0 * 0.25, rel=1e-6)


@pytest.mark.parametrize("s", (0.25, 0.5, 0.75, 1.0))
def test_entropy_production_dominates_four_times_information(random_rho, s):
    production = entropy_dissipation(random_rho, s, symbol='lattice')
    information = fisher_info(random_rho, KineticSpec(s=s, symbol='lattice')).value
    assert production >= 4.0 * information * (1.0 - 1e-12)


def test_clamping_is_silent_for_regular_values(gaussian):
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        fisher_info(gaussian, KineticSpec(s=0.5))
