# Copyright (C) 2020 The fisher_kinetic developers
# This software may be modified and distributed under the terms of the
# LGPL-2.1+ license. See the accompanying LICENSE file for details.

import itertools
import logging
import math
from dataclasses import dataclass
from functools import reduce
from typing import List, Sequence, Tuple

import numpy as np
import scipy.fft
from scipy.special import entr

from fisher_kinetic.densities.grid import GridSpec, check_budget
from fisher_kinetic.errors import DensityError, GridError
from fisher_kinetic.utils import make_rng

logger = logging.getLogger(__name__)

MASS_TOL = 1e-12
SYMMETRY_TOL = 1e-12
# relative floor applied to random densities after exponentiation
POSITIVITY_FLOOR = 1e-12
MAX_SYMMETRIZE_PARTICLES = 6
# periodic images summed per axis by the wrapped Gaussian
GAUSSIAN_IMAGES = 3


def block_permutation_axes(grid: GridSpec, perm: Sequence[int]):
    return tuple(ax for j in perm for ax in grid.block_axes(j))


class Density:
    """
    Nonnegative, unit-mass, permutation-symmetric grid function on the N-particle torus

    :param grid: (GridSpec) grid the values live on
    :param values: (np.ndarray) node values, shape grid.shape, particle-major axis order
    :param check: (bool) validate every invariant on construction
    """

    def __init__(self, grid: GridSpec, values: np.ndarray, check: bool = True):
        values = np.array(values, dtype=np.float64, order='C')
        if values.shape != grid.shape:
            raise DensityError("Density(): values shape {} does not match grid shape {}".format(
                values.shape, grid.shape))
        values.setflags(write=False)
        self._grid = grid
        self._values = values
        if check:
            self.check_invariants()

    @classmethod
    def from_values(cls, grid: GridSpec, values: np.ndarray):
        """Renormalize a nonnegative array to unit discrete mass and wrap it."""
        values = np.asarray(values, dtype=np.float64)
        if values.shape != grid.shape:
            raise DensityError("from_values(): values shape {} does not match grid shape {}".format(
                values.shape, grid.shape))
        if np.any(values < 0.0) or not np.all(np.isfinite(values)):
            raise DensityError("from_values(): values must be finite and nonnegative")
        mass = values.sum() * grid.cell_volume
        if not mass > 0.0:
            raise DensityError("from_values(): total mass is zero")
        return cls(grid, values / mass)

    @property
    def grid(self):
        return self._grid

    @property
    def values(self):
        return self._values

    @property
    def n_particles(self):
        return self._grid.n_particles

    def mass(self):
        return float(self._values.sum() * self._grid.cell_volume)

    def permute_particles(self, perm: Sequence[int]):
        return self._values.transpose(block_permutation_axes(self._grid, perm))

    def symmetry_defect(self):
        # adjacent transpositions generate the symmetric group
        n = self._grid.n_particles
        defect = 0.0
        for j in range(n - 1):
            perm = list(range(n))
            perm[j], perm[j + 1] = perm[j + 1], perm[j]
            defect = max(defect, float(np.max(np.abs(self.permute_particles(perm) - self._values))))
        return defect

    def check_invariants(self):
        if not np.all(np.isfinite(self._values)):
            raise DensityError("check_invariants(): values contain non-finite entries")
        if np.any(self._values < 0.0):
            raise DensityError("check_invariants(): values must be nonnegative")
        mass = self.mass()
        if abs(mass - 1.0) > MASS_TOL:
            raise DensityError("check_invariants(): mass is {!r}, expected 1".format(mass))
        scale = max(1.0, float(self._values.max()))
        defect = self.symmetry_defect()
        if defect > SYMMETRY_TOL * scale:
            raise DensityError("check_invariants(): density is not permutation symmetric "
                               "(defect {:.3e})".format(defect))

    def __repr__(self):
        return "Density(d={}, n_particles={}, m={}, period={})".format(
            self._grid.d, self._grid.n_particles, self._grid.m, self._grid.period)


@dataclass(frozen=True)
class MixingMeasure:
    """Finitely supported de Finetti measure: weighted single-particle densities."""
    atoms: Tuple[Tuple[float, Density], ...]

    def __post_init__(self):
        atoms = tuple((float(w), rho) for w, rho in self.atoms)
        object.__setattr__(self, 'atoms', atoms)
        if not atoms:
            raise DensityError("MixingMeasure(): empty atom list")
        weights = np.array([w for w, _ in atoms])
        if np.any(weights <= 0.0):
            raise DensityError("MixingMeasure(): weights must be positive")
        if abs(weights.sum() - 1.0) > 1e-12:
            raise DensityError("MixingMeasure(): weights sum to {!r}, expected 1".format(weights.sum()))
        grid = atoms[0][1].grid
        for _, rho in atoms:
            if rho.n_particles != 1:
                raise DensityError("MixingMeasure(): atoms must be single-particle densities")
            if rho.grid != grid:
                raise DensityError("MixingMeasure(): atoms must share one grid")

    @classmethod
    def from_lists(cls, weights: Sequence[float], densities: Sequence[Density]):
        if len(weights) != len(densities):
            raise DensityError("from_lists(): {} weights for {} densities".format(len(weights), len(densities)))
        return cls(tuple(zip(weights, densities)))

    @property
    def grid(self):
        return self.atoms[0][1].grid

    @property
    def weights(self):
        return np.array([w for w, _ in self.atoms])

    @property
    def densities(self) -> List[Density]:
        return [rho for _, rho in self.atoms]


# --- builders --- #

def uniform_density(grid: GridSpec):
    return Density(grid, np.full(grid.shape, grid.period ** (-grid.n_axes)))


def _wrapped_gaussian_profile(nodes: np.ndarray, mean: float, sigma2: float, period: float):
    mean = mean % period
    images = np.arange(-GAUSSIAN_IMAGES, GAUSSIAN_IMAGES + 1) * period
    offsets = nodes[:, None] - mean + images[None, :]
    return np.exp(-offsets ** 2 / (2.0 * sigma2)).sum(axis=1)


def gaussian_density(grid_1p: GridSpec, mean: Sequence[float], sigma2: float):
    """
    Wrapped (periodized) Gaussian on the single-particle torus, renormalized to unit discrete mass

    :param grid_1p: (GridSpec) grid with n_particles = 1
    :param mean: (list) mean vector of length d
    :param sigma2: (float) variance per axis, at most (period/8)^2
    :return: (Density)
    """
    if grid_1p.n_particles != 1:
        raise GridError("gaussian_density(): grid must have n_particles = 1")
    mean = np.atleast_1d(np.asarray(mean, dtype=np.float64))
    if mean.shape != (grid_1p.d,):
        raise GridError("gaussian_density(): mean must have length d = {}".format(grid_1p.d))
    if not sigma2 > 0.0:
        raise DensityError("gaussian_density(): sigma2 must be positive")
    if sigma2 > (grid_1p.period / 8.0) ** 2:
        raise DensityError("gaussian_density(): sigma2 = {} exceeds (period/8)^2 = {}".format(
            sigma2, (grid_1p.period / 8.0) ** 2))
    nodes = grid_1p.nodes()
    profiles = [_wrapped_gaussian_profile(nodes, mu_a, sigma2, grid_1p.period) for mu_a in mean]
    return Density.from_values(grid_1p, reduce(np.multiply.outer, profiles))


def product_density(rho: Density, n: int, mem_cap_bytes: int = None):
    """
    Tensor power rho^{(x) n} on the n-particle grid
    """
    if rho.n_particles != 1:
        raise GridError("product_density(): rho must be a single-particle density")
    if n < 1:
        raise GridError("product_density(): n must be >= 1, got {}".format(n))
    grid = rho.grid.with_particles(n)
    check_budget(grid.size, mem_cap_bytes=mem_cap_bytes, what='product_density')
    values = reduce(np.multiply.outer, [rho.values] * n)
    return Density.from_values(grid, values)


def mixture_product_density(P: MixingMeasure, n: int, mem_cap_bytes: int = None):
    """
    sum_i w_i rho_i^{(x) n}
    """
    if n < 1:
        raise GridError("mixture_product_density(): n must be >= 1, got {}".format(n))
    grid = P.grid.with_particles(n)
    # accumulator plus one product term alive at a time
    check_budget(2 * grid.size, mem_cap_bytes=mem_cap_bytes, what='mixture_product_density')
    values = np.zeros(grid.shape)
    for w, rho in P.atoms:
        values += w * reduce(np.multiply.outer, [rho.values] * n)
    return Density.from_values(grid, values)


def marginal(mu: Density, n: int):
    """
    n-particle marginal: integrates out the last N - n particle blocks

    :param mu: (Density) N-particle density
    :param n: (int) 1 <= n < N
    :return: (Density)
    """
    grid = mu.grid
    if not 1 <= n < grid.n_particles:
        raise GridError("marginal(): n must be in [1, {}), got {}".format(grid.n_particles, n))
    traced = tuple(range(grid.d * n, grid.n_axes))
    weight = grid.spacing ** len(traced)
    return Density(grid.with_particles(n), mu.values.sum(axis=traced) * weight)


def symmetrize(values: np.ndarray, grid: GridSpec):
    """
    Average over all particle-block permutations and renormalize
    """
    values = np.asarray(values, dtype=np.float64)
    if values.shape != grid.shape:
        raise DensityError("symmetrize(): values shape {} does not match grid shape {}".format(
            values.shape, grid.shape))
    if np.any(values < 0.0):
        raise DensityError("symmetrize(): negative entries")
    if grid.n_particles > MAX_SYMMETRIZE_PARTICLES:
        raise GridError("symmetrize(): at most {} particles supported, got {}".format(
            MAX_SYMMETRIZE_PARTICLES, grid.n_particles))
    perms = list(itertools.permutations(range(grid.n_particles)))
    acc = np.zeros(grid.shape)
    for perm in perms:
        acc += values.transpose(block_permutation_axes(grid, perm))
    return Density.from_values(grid, acc / len(perms))


def _mode_norm(grid: GridSpec):
    q = scipy.fft.fftfreq(grid.m, 1.0 / grid.m)
    q2 = np.zeros(grid.shape)
    for axis in range(grid.n_axes):
        shape = [1] * grid.n_axes
        shape[axis] = grid.m
        q2 = q2 + (q ** 2).reshape(shape)
    return np.sqrt(q2)


def band_limited_field(grid: GridSpec, rng, smoothness: float = 1.0):
    """
    Zero-mean, unit-variance Gaussian field with spectrum decaying like exp(-smoothness * |q|)
    """
    noise = rng.standard_normal(size=grid.shape)
    field = scipy.fft.ifftn(scipy.fft.fftn(noise) * np.exp(-smoothness * _mode_norm(grid))).real
    std = field.std()
    if std > 0.0:
        field = (field - field.mean()) / std
    return field


def random_density(grid: GridSpec, seed: int, smoothness: float = 1.0, amplitude: float = 1.0):
    """
    Exponentiated band-limited Gaussian noise, symmetrized and normalized

    The noise spectrum decays like exp(-smoothness * |q|) in the integer mode index q. Values are
    clamped below at POSITIVITY_FLOOR * max before symmetrization, so the output is strictly positive.

    :param grid: (GridSpec)
    :param seed: (int) RNG seed, output is bit-identical for equal seeds
    :param smoothness: (float) spectral decay rate, > 0
    :param amplitude: (float) standard deviation of the log-density field
    :return: (Density)
    """
    if not smoothness > 0.0:
        raise DensityError("random_density(): smoothness must be positive")
    field = band_limited_field(grid, make_rng(int(seed)), smoothness)
    values = np.exp(amplitude * field)
    values = np.maximum(values, POSITIVITY_FLOOR * values.max())
    return symmetrize(values, grid)


# --- structured fixtures --- #

def gaussian_mixture(grid_1p: GridSpec, centers: Sequence[Sequence[float]], sigma2: float,
                     weights: Sequence[float] = None):
    """
    Mixing measure whose atoms are wrapped Gaussians of a common variance
    """
    if weights is None:
        weights = [1.0 / len(centers)] * len(centers)
    return MixingMeasure.from_lists(weights, [gaussian_density(grid_1p, c, sigma2) for c in centers])


def well_separated_mixture(grid_1p: GridSpec):
    L = grid_1p.period
    return gaussian_mixture(grid_1p, [[0.25 * L] * grid_1p.d, [0.75 * L] * grid_1p.d], (L / 32.0) ** 2)


def overlapping_mixture(grid_1p: GridSpec):
    L = grid_1p.period
    return gaussian_mixture(grid_1p, [[0.375 * L] * grid_1p.d, [0.625 * L] * grid_1p.d], (L / 16.0) ** 2)


# --- entropy --- #

def entropy(mu: Density):
    """Differential entropy -sum mu log mu * cellVolume, with 0 log 0 = 0."""
    return float(entr(mu.values).sum() * mu.grid.cell_volume)


def mixing_entropy(P: MixingMeasure):
    return float(entr(P.weights).sum())


def mean_entropy_sequence(P: MixingMeasure, n_max: int, mem_cap_bytes: int = None):
    """
    [(n, S[mu^(n)] / n)] for n = 1..n_max
    """
    table = []
    for n in range(1, n_max + 1):
        mu_n = mixture_product_density(P, n, mem_cap_bytes=mem_cap_bytes)
        table.append((n, entropy(mu_n) / n))
        logger.debug("mean_entropy_sequence(): n=%d S/n=%.6g", n, table[-1][1])
    return table


def affine_entropy(P: MixingMeasure):
    return math.fsum(w * entropy(rho) for w, rho in P.atoms)
