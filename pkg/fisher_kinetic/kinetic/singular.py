# Copyright (C) 2020 The fisher_kinetic developers
# This software may be modified and distributed under the terms of the
# LGPL-2.1+ license. See the accompanying LICENSE file for details.

"""Singular-integral (Gagliardo) forms on the torus.

Both forms integrate a difference quotient over the first particle block only and multiply by N,
which requires a permutation-symmetric input. The kernel is |z|^{-(d + alpha)} with alpha = s or
alpha = 2s (``exponent_offset``), periodized over all images of the box; the diagonal z = 0 is
excluded. For d = 1 the excluded near-diagonal part is restored to leading order in h with the
Riemann zeta correction -2 zeta(alpha - 1) h^{2 - alpha} int |f'|^2, where f' is a fourth-order
centered difference.
"""

import itertools
import logging
import warnings
from functools import lru_cache

import numpy as np
from scipy.special import zeta, zetac

from fisher_kinetic.densities.density import Density, gaussian_density, random_density
from fisher_kinetic.densities.grid import GridSpec
from fisher_kinetic.errors import DensityError, GridError, SpecError
from fisher_kinetic.kinetic.fourier import EXPONENT_OFFSETS, KineticSpec
from fisher_kinetic.utils import clamp_nonnegative, torus_offsets

logger = logging.getLogger(__name__)

KERNELS = ('periodized', 'minimum_image')
SALEM_ARGUMENTS = ('density', 'sqrt')
# image shells summed per axis by the periodized kernel when d > 1
KERNEL_IMAGES = 4
HELD_OUT_SEED = 20200101
HELD_OUT_SMOOTHNESS = 1.5


def _alpha(s: float, exponent_offset: str):
    if not 0.0 < s < 1.0:
        raise SpecError("singular_form(): s must be in (0, 1), got {}".format(s))
    if exponent_offset not in EXPONENT_OFFSETS:
        raise SpecError("singular_form(): exponent_offset must be 's' or '2s', got {!r}".format(exponent_offset))
    return s if exponent_offset == 's' else 2.0 * s


def riemann_zeta(x: float):
    # zetac stays finite for x < 1, where zeta(x, 1) is not defined
    return 1.0 + float(zetac(x))


def periodic_kernel(grid: GridSpec, exponent: float, kernel: str = 'periodized'):
    """
    Kernel values K(z) on the single-particle offset grid z = j*h, K(0) = 0

    :param grid: (GridSpec) only d, m and period are used
    :param exponent: (float) a > d, the kernel is |z|^{-a}
    :param kernel: (str) 'periodized' sums all periodic images, 'minimum_image' keeps the nearest one
    :return: (np.ndarray) shape (m,)*d
    """
    if kernel not in KERNELS:
        raise SpecError("periodic_kernel(): kernel must be one of {}, got {!r}".format(KERNELS, kernel))
    m, L, d = grid.m, grid.period, grid.d
    offsets = np.arange(m) * grid.spacing
    if kernel == 'minimum_image':
        r2 = np.zeros((m,) * d)
        for axis in range(d):
            shape = [1] * d
            shape[axis] = m
            r2 = r2 + (torus_offsets(offsets, 0.0, L) ** 2).reshape(shape)
        K = np.zeros_like(r2)
        np.power(r2, -0.5 * exponent, out=K, where=r2 > 0.0)
    elif d == 1:
        t = np.arange(1, m) / m
        K = np.zeros(m)
        K[1:] = L ** (-exponent) * (zeta(exponent, t) + zeta(exponent, 1.0 - t))
    else:
        K = np.zeros((m,) * d)
        shells = np.arange(-KERNEL_IMAGES, KERNEL_IMAGES + 1) * L
        for image in itertools.product(shells, repeat=d):
            r2 = np.zeros((m,) * d)
            for axis in range(d):
                shape = [1] * d
                shape[axis] = m
                r2 = r2 + ((offsets + image[axis]) ** 2).reshape(shape)
            contrib = np.zeros_like(r2)
            np.power(r2, -0.5 * exponent, out=contrib, where=r2 > 0.0)
            K += contrib
    K[(0,) * d] = 0.0
    return K


def _pair_sum(values: np.ndarray, grid: GridSpec, K: np.ndarray, pair):
    # sum_x sum_{z != 0} K(z) pair(v(x), v(x - z)) over the first particle block
    axes = grid.block_axes(0)
    total = 0.0
    for z in itertools.product(range(grid.m), repeat=grid.d):
        weight = K[z]
        if weight == 0.0:
            continue
        shifted = np.roll(values, shift=z, axis=axes)
        total += weight * float(pair(values, shifted).sum())
    return total


def _derivative_energy(f: np.ndarray, grid: GridSpec):
    # fourth-order centered difference along the first axis
    h = grid.spacing
    df = (-np.roll(f, -2, axis=0) + 8.0 * np.roll(f, -1, axis=0)
          - 8.0 * np.roll(f, 1, axis=0) + np.roll(f, 2, axis=0)) / (12.0 * h)
    return float(np.sum(df ** 2)) * grid.cell_volume


def _near_diagonal_correction(f: np.ndarray, grid: GridSpec, alpha: float):
    if grid.d != 1:
        warnings.warn("singular_form(): near-diagonal correction is only available for d = 1")
        return 0.0
    return -2.0 * riemann_zeta(alpha - 1.0) * grid.spacing ** (2.0 - alpha) * _derivative_energy(f, grid)


def _squared_difference(a, b):
    return (a - b) ** 2


def salem_phi(a, b):
    """Phi(a, b) = (a - b)(log a - log b), a, b > 0."""
    return (a - b) * (np.log(a) - np.log(b))


def singular_form(mu: Density, s: float, exponent_offset: str = '2s', kernel: str = 'periodized',
                  diagonal_correction: bool = True):
    """
    N * sum over the first block of |sqrt(mu)(x, X') - sqrt(mu)(y, X')|^2 K(x - y), without C_{d,s}

    :param mu: (Density) permutation-symmetric density
    :param s: (float) order in (0, 1)
    :param exponent_offset: (str) 's' or '2s'
    :param kernel: (str) 'periodized' or 'minimum_image'
    :param diagonal_correction: (bool) restore the excluded near-diagonal part (d = 1)
    :return: (float)
    """
    alpha = _alpha(s, exponent_offset)
    grid = mu.grid
    K = periodic_kernel(grid, grid.d + alpha, kernel)
    psi = np.sqrt(mu.values)
    value = _pair_sum(psi, grid, K, _squared_difference) * grid.particle_cell_volume * grid.cell_volume
    if diagonal_correction:
        value += _near_diagonal_correction(psi, grid, alpha)
    return clamp_nonnegative(grid.n_particles * value, 'singular_form')


def salem_variant_info(mu: Density, s: float, exponent_offset: str = '2s', argument: str = 'density',
                       kernel: str = 'periodized', diagonal_correction: bool = True):
    """
    Salem variant: N * sum of Phi(v(x, X'), v(y, X')) K(x - y) over the first block

    v is mu itself (argument='density') or sqrt(mu) (argument='sqrt'). The near-diagonal correction
    is four times the singular_form correction applied to sqrt(v), so that with argument='density'
    the value is at least 4 * singular_form termwise.
    """
    alpha = _alpha(s, exponent_offset)
    if argument not in SALEM_ARGUMENTS:
        raise SpecError("salem_variant_info(): argument must be one of {}, got {!r}".format(
            SALEM_ARGUMENTS, argument))
    if np.any(mu.values <= 0.0):
        raise DensityError("salem_variant_info(): density must be strictly positive")
    grid = mu.grid
    K = periodic_kernel(grid, grid.d + alpha, kernel)
    v = mu.values if argument == 'density' else np.sqrt(mu.values)
    value = _pair_sum(v, grid, K, salem_phi) * grid.particle_cell_volume * grid.cell_volume
    if diagonal_correction:
        value += 4.0 * _near_diagonal_correction(np.sqrt(v), grid, alpha)
    return clamp_nonnegative(grid.n_particles * value, 'salem_variant_info')


# --- calibration --- #

def reference_gaussian(grid_1p: GridSpec):
    L = grid_1p.period
    return gaussian_density(grid_1p, [0.5 * L] * grid_1p.d, (L / 16.0) ** 2)


def _check_single_particle(grid_1p: GridSpec, caller: str):
    if grid_1p.n_particles != 1:
        raise GridError("{}(): grid must have n_particles = 1".format(caller))


@lru_cache(maxsize=None)
def calibrate_singular_constant(grid_1p: GridSpec, s: float, exponent_offset: str = '2s',
                                kernel: str = 'periodized', diagonal_correction: bool = True):
    """
    C = spectral I_s / singular_form on the reference wrapped Gaussian (sigma = L/16)
    """
    from fisher_kinetic.kinetic.fisher import fisher_info
    _check_single_particle(grid_1p, 'calibrate_singular_constant')
    ref = reference_gaussian(grid_1p)
    denominator = singular_form(ref, s, exponent_offset, kernel, diagonal_correction)
    if not denominator > 0.0:
        raise DensityError("calibrate_singular_constant(): degenerate reference, singular_form = 0")
    constant = fisher_info(ref, KineticSpec(s=s)).value / denominator
    logger.debug("calibrate_singular_constant(): m=%d L=%g s=%g offset=%s C=%.10g",
                 grid_1p.m, grid_1p.period, s, exponent_offset, constant)
    return constant


@lru_cache(maxsize=None)
def bbm_limit_constant(grid_1p: GridSpec, s_near_one: float = 0.99, exponent_offset: str = '2s'):
    """
    K with I_1 = K (1 - s) singular_form at s close to 1, fitted on the reference Gaussian
    """
    from fisher_kinetic.kinetic.fisher import fisher_info
    _check_single_particle(grid_1p, 'bbm_limit_constant')
    ref = reference_gaussian(grid_1p)
    scaled = (1.0 - s_near_one) * singular_form(ref, s_near_one, exponent_offset)
    if not scaled > 0.0:
        raise DensityError("bbm_limit_constant(): degenerate reference, singular_form = 0")
    return fisher_info(ref, KineticSpec(s=1.0)).value / scaled


def held_out_relative_error(grid_1p: GridSpec, s: float, exponent_offset: str = '2s',
                            seed: int = HELD_OUT_SEED):
    """
    |C * singular_form - I_s| / I_s on a random density that was not used for calibration
    """
    from fisher_kinetic.kinetic.fisher import fisher_info
    rho = random_density(grid_1p, seed, smoothness=HELD_OUT_SMOOTHNESS)
    constant = calibrate_singular_constant(grid_1p, s, exponent_offset)
    exact = fisher_info(rho, KineticSpec(s=s)).value
    return abs(constant * singular_form(rho, s, exponent_offset) - exact) / exact


def calibration_record(grid_1p: GridSpec, s: float, exponent_offset: str = '2s'):
    return {
        'C': calibrate_singular_constant(grid_1p, s, exponent_offset),
        'd': grid_1p.d,
        's': s,
        'exponent_offset': exponent_offset,
        'grid': grid_1p.to_dict(),
        'held_out_relative_error': held_out_relative_error(grid_1p, s, exponent_offset),
    }
