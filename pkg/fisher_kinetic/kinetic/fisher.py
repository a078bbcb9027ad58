# Copyright (C) 2020 The fisher_kinetic developers
# This software may be modified and distributed under the terms of the
# LGPL-2.1+ license. See the accompanying LICENSE file for details.

import logging
import warnings
from functools import reduce
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.fft
from scipy.special import gamma as gamma_fn

from fisher_kinetic.densities.density import Density
from fisher_kinetic.densities.grid import GridSpec
from fisher_kinetic.errors import DensityError, SpecError
from fisher_kinetic.kinetic.fourier import (
    KineticSpec, apply_block_operator, block_energies, cutoff_profile, kinetic_energies,
    sqrt_density, wave_numbers,
)
from fisher_kinetic.utils import clamp_nonnegative

logger = logging.getLogger(__name__)

# gradient form: nodes with mu below this fraction of max(mu) contribute 0
GRADIENT_FLOOR = 1e-12
DIFFERENTIATIONS = ('centered', 'spectral')


@dataclass
class FisherResult:
    value: float
    s: float
    method: str
    grid: GridSpec
    per_axis: tuple
    symbol: str = 'spectral'
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            'value': self.value,
            's': self.s,
            'method': self.method,
            'symbol': self.symbol,
            'grid': self.grid.to_dict(),
            'per_axis': list(self.per_axis),
            'diagnostics': dict(self.diagnostics),
        }


def fisher_info(mu: Density, spec: KineticSpec = None, fast_path: bool = False, workers: int = 1):
    """
    Fractional Fisher information I_s[mu] evaluated with the method named by spec

    :param mu: (Density)
    :param spec: (KineticSpec) defaults to KineticSpec() (s = 1, spectral)
    :param fast_path: (bool) evaluate one particle block and multiply by N (symmetric inputs)
    :param workers: (int) scipy.fft worker threads
    :return: (FisherResult)
    """
    spec = KineticSpec() if spec is None else spec
    grid = mu.grid
    diagnostics = {}
    if spec.method == 'spectral':
        per_axis = kinetic_energies(sqrt_density(mu), spec, fast_path=fast_path, workers=workers)
        if spec.gamma is not None:
            diagnostics['gamma'] = spec.gamma
    elif spec.method == 'gradient':
        per_axis = gradient_contributions(mu, 'centered')
    elif spec.method == 'singular':
        from fisher_kinetic.kinetic.singular import calibrate_singular_constant, singular_form
        constant = calibrate_singular_constant(grid.single_particle(), spec.s, spec.exponent_offset)
        value = constant * singular_form(mu, spec.s, spec.exponent_offset)
        per_axis = np.full(grid.n_particles, value / grid.n_particles)
        diagnostics.update(constant=constant, exponent_offset=spec.exponent_offset)
    else:
        raise SpecError("fisher_info(): unknown method {!r}".format(spec.method))
    value = clamp_nonnegative(float(np.sum(per_axis)), 'fisher_info')
    return FisherResult(value=value, s=spec.s, method=spec.method, grid=grid,
                        per_axis=tuple(float(v) for v in per_axis), symbol=spec.symbol,
                        diagnostics=diagnostics)


def _particle_sums(axis_terms: Sequence[float], grid: GridSpec):
    axis_terms = np.asarray(axis_terms)
    return axis_terms.reshape(grid.n_particles, grid.d).sum(axis=1)


def gradient_contributions(mu: Density, differentiation: str = 'centered'):
    """
    Per-particle gradient-form Fisher information

    'centered' evaluates (1/4) sum |grad_h mu|^2 / mu with centered periodic differences;
    'spectral' evaluates sum |grad sqrt(mu)|^2 with the ik multiplier (Nyquist mode included).
    """
    grid = mu.grid
    h = grid.spacing
    terms = []
    if differentiation == 'centered':
        v = mu.values
        keep = v >= GRADIENT_FLOOR * v.max()
        for axis in range(grid.n_axes):
            diff = (np.roll(v, -1, axis=axis) - np.roll(v, 1, axis=axis)) / (2.0 * h)
            ratio = np.divide(diff ** 2, v, out=np.zeros_like(v), where=keep)
            terms.append(0.25 * ratio.sum() * grid.cell_volume)
    elif differentiation == 'spectral':
        psi = sqrt_density(mu).values
        shape = [1] * grid.n_axes
        for axis in range(grid.n_axes):
            shape_a = list(shape)
            shape_a[axis] = grid.m
            ik = (1j * wave_numbers(grid)).reshape(shape_a)
            deriv = scipy.fft.ifft(ik * scipy.fft.fft(psi, axis=axis), axis=axis)
            terms.append(float(np.sum(deriv.real ** 2 + deriv.imag ** 2)) * grid.cell_volume)
    else:
        raise SpecError("gradient_form(): differentiation must be one of {}, got {!r}".format(
            DIFFERENTIATIONS, differentiation))
    return _particle_sums(terms, grid)


def gradient_form(mu: Density, differentiation: str = 'centered'):
    return float(gradient_contributions(mu, differentiation).sum())


def cutoff_fisher_info(mu: Density, s: float, gamma: float, center: Sequence[float] = None,
                       symbol: str = 'spectral', allow_identity: bool = False, workers: int = 1):
    """
    Cutoff information sum_j <sqrt(mu), chi(x_j) (-Delta_{x_j})^s chi(x_j) sqrt(mu)>

    chi(x) = (1 + |x - center|^2)^{2 gamma} with the torus distance to center (origin by default).
    gamma = 0 reduces to fisher_info and is only accepted with allow_identity=True.
    """
    if gamma == 0.0 and allow_identity:
        warnings.warn("cutoff_fisher_info(): gamma = 0 is the identity reduction (test mode)")
    elif not gamma < 0.0:
        raise SpecError("cutoff_fisher_info(): gamma must be negative, got {}".format(gamma))
    if not 0.0 < s <= 1.0:
        raise SpecError("cutoff_fisher_info(): s must be in (0, 1], got {}".format(s))
    grid = mu.grid
    chi = cutoff_profile(grid, gamma, center)
    energies = block_energies(sqrt_density(mu).values, grid, s, symbol, cutoff=chi, workers=workers)
    return clamp_nonnegative(float(energies.sum()), 'cutoff_fisher_info')


def entropy_dissipation(mu: Density, s: float, symbol: str = 'spectral', workers: int = 1):
    """
    <log mu, sum_j (-Delta_{x_j})^s mu>, the entropy production of the (fractional) heat flow
    """
    if not 0.0 < s <= 1.0:
        raise SpecError("entropy_dissipation(): s must be in (0, 1], got {}".format(s))
    v = mu.values
    if np.any(v <= 0.0):
        raise DensityError("entropy_dissipation(): density must be strictly positive")
    grid = mu.grid
    log_v = np.log(v)
    total = 0.0
    for j in range(grid.n_particles):
        total += float(np.sum(log_v * apply_block_operator(v, grid, s, j, symbol, workers=workers)))
    return total * grid.cell_volume


def gaussian_fisher_closed_form(d: int, sigma2: float, s: float):
    """I_s of the Gaussian N(0, sigma2 Id) on R^d: (1/(2 sigma2))^s Gamma((d+2s)/2) / Gamma(d/2)."""
    return (1.0 / (2.0 * sigma2)) ** s * gamma_fn((d + 2.0 * s) / 2.0) / gamma_fn(d / 2.0)


def gaussian_fisher_torus_series(d: int, sigma2: float, s: float, period: float):
    """
    I_s of the periodized Gaussian N(0, sigma2 Id) on the torus [0, period)^d, as a lattice sum

    sqrt(mu) has Fourier weights proportional to exp(-sigma2 |k|^2) on k in (2 pi / period) Z^d, so the
    torus value is a weighted mean of |k|^{2s}. It agrees with gaussian_fisher_closed_form for s = 1;
    for s < 1 the two differ at order (2 pi / period)^{1 + 2s}, since |k|^{2s} has a kink at k = 0.
    Valid while the periodic images of sqrt(mu) do not overlap (sigma well below period / 8).
    """
    if not 0.0 < s <= 1.0:
        raise SpecError("gaussian_fisher_torus_series(): s must be in (0, 1], got {}".format(s))
    q_max = int(np.ceil(np.sqrt(40.0 / sigma2) * period / (2.0 * np.pi))) + 1
    k = 2.0 * np.pi * np.arange(-q_max, q_max + 1) / period
    k2 = reduce(np.add.outer, [k ** 2] * d)
    weights = np.exp(-2.0 * sigma2 * k2)
    return float(np.sum(np.power(k2, s) * weights) / np.sum(weights))
