# Copyright (C) 2020 The fisher_kinetic developers
# This software may be modified and distributed under the terms of the
# LGPL-2.1+ license. See the accompanying LICENSE file for details.

"""Fourier engine.

Convention: forward transform with e^{-ik.x}, modes k = 2 pi q / L with q in {-m/2, ..., m/2 - 1},
unitary ("ortho") normalization, so that sum |psi|^2 = sum |F psi|^2 and every quadratic form is
cellVolume * sum multiplier * |F psi|^2.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import scipy.fft

from fisher_kinetic.densities.density import Density
from fisher_kinetic.densities.grid import GridSpec
from fisher_kinetic.errors import DensityError, SpecError
from fisher_kinetic.utils import torus_offsets

logger = logging.getLogger(__name__)

METHODS = ('spectral', 'gradient', 'singular')
SYMBOLS = ('spectral', 'lattice')
EXPONENT_OFFSETS = ('s', '2s')
NORM_TOL = 1e-12
KINETIC_NORM_TOL = 1e-9


@dataclass(frozen=True)
class KineticSpec:
    """
    Parameters of the Fisher functional

    :param s: (float) order in (0, 1]
    :param gamma: (float) cutoff exponent, < 0, or None for no cutoff
    :param method: (str) 'spectral', 'gradient' (s = 1 only) or 'singular' (s < 1 only)
    :param symbol: (str) discrete multiplier, 'spectral' |k|^{2s} or 'lattice' ((2/h) sin(kh/2))^{2s}
    :param exponent_offset: (str) singular kernel exponent d + s or d + 2s
    :param center: (tuple) cutoff center, origin when None
    """
    s: float = 1.0
    gamma: Optional[float] = None
    method: str = 'spectral'
    symbol: str = 'spectral'
    exponent_offset: str = '2s'
    center: Optional[tuple] = None

    def __post_init__(self):
        if not 0.0 < self.s <= 1.0:
            raise SpecError("KineticSpec(): s must be in (0, 1], got {}".format(self.s))
        if self.method not in METHODS:
            raise SpecError("KineticSpec(): unknown method {!r}".format(self.method))
        if self.symbol not in SYMBOLS:
            raise SpecError("KineticSpec(): unknown symbol {!r}".format(self.symbol))
        if self.exponent_offset not in EXPONENT_OFFSETS:
            raise SpecError("KineticSpec(): exponent_offset must be 's' or '2s', got {!r}".format(
                self.exponent_offset))
        if self.method == 'gradient' and self.s != 1.0:
            raise SpecError("KineticSpec(): method 'gradient' requires s = 1, got {}".format(self.s))
        if self.method == 'singular' and self.s >= 1.0:
            raise SpecError("KineticSpec(): method 'singular' requires s < 1")
        if self.method != 'spectral' and self.symbol != 'spectral':
            raise SpecError("KineticSpec(): symbol {!r} only applies to method 'spectral'".format(self.symbol))
        if self.gamma is not None:
            if not self.gamma < 0.0:
                raise SpecError("KineticSpec(): gamma must be negative, got {}".format(self.gamma))
            if self.method != 'spectral':
                raise SpecError("KineticSpec(): cutoff requires method 'spectral'")
        if self.center is not None:
            object.__setattr__(self, 'center', tuple(float(c) for c in np.atleast_1d(self.center)))

    def alpha(self):
        """Kernel exponent offset: the singular kernel is |z|^{-(d + alpha)}."""
        return self.s if self.exponent_offset == 's' else 2.0 * self.s


class WaveFunction:
    """
    Complex (or real) grid function with unit L^2 norm in the cell-volume inner product
    """

    def __init__(self, grid: GridSpec, values: np.ndarray, check: bool = True):
        values = np.asarray(values)
        if not np.iscomplexobj(values):
            values = values.astype(np.float64)
        if values.shape != grid.shape:
            raise DensityError("WaveFunction(): values shape {} does not match grid shape {}".format(
                values.shape, grid.shape))
        self._grid = grid
        self._values = values
        if check and abs(self.norm2() - 1.0) > NORM_TOL:
            raise DensityError("WaveFunction(): squared norm is {!r}, expected 1".format(self.norm2()))

    @property
    def grid(self):
        return self._grid

    @property
    def values(self):
        return self._values

    def norm2(self):
        return float(np.sum(np.abs(self._values) ** 2) * self._grid.cell_volume)

    def modulus(self):
        return WaveFunction(self._grid, np.abs(self._values), check=False)


def sqrt_density(mu: Density):
    return WaveFunction(mu.grid, np.sqrt(mu.values))


# --- multipliers --- #

def mode_indices(m: int):
    return scipy.fft.fftfreq(m, 1.0 / m)


def wave_numbers(grid: GridSpec):
    return 2.0 * np.pi * mode_indices(grid.m) / grid.period


def _per_axis_symbol(grid: GridSpec, symbol: str):
    # squared one-axis symbol: k^2 or the nearest-neighbour Laplacian eigenvalue
    if symbol == 'spectral':
        return wave_numbers(grid) ** 2
    if symbol == 'lattice':
        return (2.0 / grid.spacing * np.sin(np.pi * mode_indices(grid.m) / grid.m)) ** 2
    raise SpecError("fractional_multiplier(): unknown symbol {!r}".format(symbol))


def fractional_multiplier(grid: GridSpec, s: float, symbol: str = 'spectral'):
    """
    Multiplier of (-Delta)^s on one particle block, indexed by FFT mode order

    :param grid: (GridSpec) any grid; only d, m and period are used
    :param s: (float) order in (0, 1]
    :param symbol: (str) 'spectral' or 'lattice'
    :return: (np.ndarray) shape (m,)*d, zero mode set to 0
    """
    if not 0.0 < s <= 1.0:
        raise SpecError("fractional_multiplier(): s must be in (0, 1], got {}".format(s))
    k2_axis = _per_axis_symbol(grid, symbol)
    k2 = np.zeros((grid.m,) * grid.d)
    for axis in range(grid.d):
        shape = [1] * grid.d
        shape[axis] = grid.m
        k2 = k2 + k2_axis.reshape(shape)
    mult = np.power(k2, s)
    mult[(0,) * grid.d] = 0.0
    return mult


def cutoff_profile(grid: GridSpec, gamma: float, center: Sequence[float] = None):
    """
    chi(x) = (1 + |x - center|^2)^{2 gamma} on one particle block, torus distance
    """
    if center is None:
        center = np.zeros(grid.d)
    center = np.atleast_1d(np.asarray(center, dtype=np.float64))
    if center.shape != (grid.d,):
        raise SpecError("cutoff_profile(): center must have length d = {}".format(grid.d))
    nodes = grid.nodes()
    r2 = np.zeros((grid.m,) * grid.d)
    for axis in range(grid.d):
        shape = [1] * grid.d
        shape[axis] = grid.m
        r2 = r2 + (torus_offsets(nodes, center[axis], grid.period) ** 2).reshape(shape)
    return np.power(1.0 + r2, 2.0 * gamma)


def _block_shape(grid: GridSpec, j: int, batch_ndim: int):
    shape = [1] * (batch_ndim + grid.n_axes)
    for axis in grid.block_axes(j):
        shape[batch_ndim + axis] = grid.m
    return shape


def block_energies(values: np.ndarray, grid: GridSpec, s: float, symbol: str = 'spectral',
                   cutoff: np.ndarray = None, blocks: Sequence[int] = None, batch_ndim: int = 0,
                   workers: int = 1):
    """
    Per-particle quadratic forms <chi psi, (-Delta_{x_j})^s chi psi>

    :param values: (np.ndarray) grid function(s), shape batch + grid.shape
    :param grid: (GridSpec)
    :param s: (float) order
    :param symbol: (str) discrete multiplier
    :param cutoff: (np.ndarray) optional single-block weight chi, shape (m,)*d
    :param blocks: (list) particle blocks to evaluate, all when None
    :param batch_ndim: (int) number of leading batch axes
    :param workers: (int) scipy.fft worker threads
    :return: (np.ndarray) shape batch + (len(blocks),)
    """
    if blocks is None:
        blocks = range(grid.n_particles)
    mult = fractional_multiplier(grid, s, symbol)
    energies = []
    for j in blocks:
        axes = tuple(batch_ndim + ax for ax in grid.block_axes(j))
        shape = _block_shape(grid, j, batch_ndim)
        weighted = values if cutoff is None else values * cutoff.reshape(shape)
        F = scipy.fft.fftn(weighted, axes=axes, norm='ortho', workers=workers)
        power = mult.reshape(shape) * (F.real ** 2 + F.imag ** 2)
        sum_axes = tuple(range(batch_ndim, batch_ndim + grid.n_axes))
        energies.append(power.sum(axis=sum_axes) * grid.cell_volume)
    return np.stack(energies, axis=-1)


def apply_block_operator(values: np.ndarray, grid: GridSpec, s: float, j: int, symbol: str = 'spectral',
                         workers: int = 1):
    """(-Delta_{x_j})^s applied to a real grid function."""
    axes = grid.block_axes(j)
    mult = fractional_multiplier(grid, s, symbol).reshape(_block_shape(grid, j, 0))
    F = scipy.fft.fftn(values, axes=axes, norm='ortho', workers=workers)
    return scipy.fft.ifftn(mult * F, axes=axes, norm='ortho', workers=workers).real


def kinetic_form(psi: WaveFunction, spec: KineticSpec, fast_path: bool = False, workers: int = 1):
    """
    sum_j <psi, (-Delta_{x_j})^s psi>, or one block times N when fast_path is set (symmetric psi)
    """
    return float(kinetic_energies(psi, spec, fast_path=fast_path, workers=workers).sum())


def kinetic_energies(psi: WaveFunction, spec: KineticSpec, fast_path: bool = False, workers: int = 1):
    if spec.method != 'spectral':
        raise SpecError("kinetic_form(): method must be 'spectral', got {!r}".format(spec.method))
    if abs(psi.norm2() - 1.0) > KINETIC_NORM_TOL:
        raise DensityError("kinetic_form(): wave function is not normalized (norm^2 = {!r})".format(psi.norm2()))
    grid = psi.grid
    cutoff = None
    if spec.gamma is not None:
        cutoff = cutoff_profile(grid, spec.gamma, spec.center)
    if fast_path:
        first = block_energies(psi.values, grid, spec.s, spec.symbol, cutoff, blocks=[0], workers=workers)
        return np.repeat(first, grid.n_particles)
    return block_energies(psi.values, grid, spec.s, spec.symbol, cutoff, workers=workers)
