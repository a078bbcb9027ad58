# Copyright (C) 2020 The fisher_kinetic developers
# This software may be modified and distributed under the terms of the
# LGPL-2.1+ license. See the accompanying LICENSE file for details.

import logging
from dataclasses import asdict, dataclass

import numpy as np

from fisher_kinetic.densities.density import Density, MixingMeasure, marginal
from fisher_kinetic.errors import DensityError, GridError, SpecError
from fisher_kinetic.kinetic.fisher import fisher_info
from fisher_kinetic.kinetic.fourier import (
    KineticSpec, block_energies, cutoff_profile, kinetic_form, sqrt_density,
)
from fisher_kinetic.quantum.density_matrix import (
    DensityMatrix, SpectralDecomposition, eigendecompose, reduced_density_matrix,
)

logger = logging.getLogger(__name__)


def hoffmann_ostenhof_density(decomp: SpectralDecomposition):
    """rho_n = sum_j lambda_j |u_j|^2"""
    weights = np.abs(decomp.eigenvectors) ** 2
    values = np.tensordot(decomp.eigenvalues, weights, axes=1)
    return Density.from_values(decomp.grid, values)


def _check_spectral(spec: KineticSpec, caller: str):
    if spec.method != 'spectral':
        raise SpecError("{}(): method must be 'spectral', got {!r}".format(caller, spec.method))


def _weighted_energies(decomp: SpectralDecomposition, spec: KineticSpec, modulus: bool, workers: int):
    keep = decomp.eigenvalues > 0.0
    lam = decomp.eigenvalues[keep]
    vectors = decomp.eigenvectors[keep]
    if modulus:
        vectors = np.abs(vectors)
    grid = decomp.grid
    cutoff = None if spec.gamma is None else cutoff_profile(grid, spec.gamma, spec.center)
    energies = block_energies(vectors, grid, spec.s, spec.symbol, cutoff, batch_ndim=1, workers=workers)
    return float(np.dot(lam, energies.sum(axis=-1)))


def kinetic_trace(gamma: DensityMatrix, spec: KineticSpec, decomp: SpectralDecomposition = None,
                  workers: int = 1):
    """
    tr(H_n Gamma) = sum_j lambda_j <u_j, H_n u_j>

    :param gamma: (DensityMatrix)
    :param spec: (KineticSpec) spectral method
    :param decomp: (SpectralDecomposition) reused when given, computed otherwise
    :return: (float)
    """
    _check_spectral(spec, 'kinetic_trace')
    if decomp is None:
        decomp = eigendecompose(gamma)
    return max(_weighted_energies(decomp, spec, modulus=False, workers=workers), 0.0)


def absolute_kinetic_trace(decomp: SpectralDecomposition, spec: KineticSpec, workers: int = 1):
    """sum_j lambda_j <|u_j|, H_n |u_j|>"""
    _check_spectral(spec, 'absolute_kinetic_trace')
    return max(_weighted_energies(decomp, spec, modulus=True, workers=workers), 0.0)


def split_identity_check(mu: Density, n: int, spec: KineticSpec, mem_cap_bytes: int = None, workers: int = 1):
    """
    (I_s[mu_N], tr(H_n Gamma^{(n)}) + tr(H_{N-n} Gamma^{(N-n)}))
    """
    _check_spectral(spec, 'split_identity_check')
    big_n = mu.n_particles
    if not 1 <= n < big_n:
        raise GridError("split_identity_check(): n must be in [1, {}), got {}".format(big_n, n))
    psi = sqrt_density(mu)
    lhs = fisher_info(mu, spec, workers=workers).value
    traces = {}
    for k in sorted({n, big_n - n}):
        traces[k] = kinetic_trace(reduced_density_matrix(psi, k, mem_cap_bytes=mem_cap_bytes), spec, workers=workers)
    return lhs, traces[n] + traces[big_n - n]


@dataclass
class ChainReport:
    """
    The chain tr(H_n Gamma^{(n)}) >= sum lambda_j <|u_j|, h |u_j|> >= <sqrt(rho_n), h sqrt(rho_n)> = I_s[mu^{(n)}]
    """
    n: int
    trace_energy: float
    absolute_energy: float
    ho_energy: float
    marginal_energy: float
    identity_error: float
    min_eigenvalue: float

    @property
    def diamagnetic_gap(self):
        return self.trace_energy - self.absolute_energy

    @property
    def convexity_gap(self):
        return self.absolute_energy - self.ho_energy

    @property
    def identity_gap(self):
        return self.ho_energy - self.marginal_energy

    def to_dict(self):
        out = asdict(self)
        out.update(diamagnetic_gap=self.diamagnetic_gap, convexity_gap=self.convexity_gap,
                   identity_gap=self.identity_gap)
        return out


def hoffmann_ostenhof_chain(mu: Density, n: int, spec: KineticSpec, mem_cap_bytes: int = None, workers: int = 1):
    """
    Evaluate every link of the Hoffmann-Ostenhof chain for the n-particle reduced matrix of sqrt(mu)

    :param mu: (Density) symmetric N-particle density
    :param n: (int) 1 <= n < N
    :param spec: (KineticSpec) spectral method
    :return: (ChainReport)
    """
    _check_spectral(spec, 'hoffmann_ostenhof_chain')
    gamma = reduced_density_matrix(sqrt_density(mu), n, mem_cap_bytes=mem_cap_bytes)
    decomp = eigendecompose(gamma)
    rho_n = hoffmann_ostenhof_density(decomp)
    mu_n = marginal(mu, n)
    report = ChainReport(
        n=n,
        trace_energy=kinetic_trace(gamma, spec, decomp=decomp, workers=workers),
        absolute_energy=absolute_kinetic_trace(decomp, spec, workers=workers),
        ho_energy=kinetic_form(sqrt_density(rho_n), spec, workers=workers),
        marginal_energy=fisher_info(mu_n, spec, workers=workers).value,
        identity_error=float(np.max(np.abs(rho_n.values - mu_n.values))),
        min_eigenvalue=decomp.min_raw_eigenvalue,
    )
    logger.debug("hoffmann_ostenhof_chain(): %s", report)
    return report


def de_finetti_monomial(P: MixingMeasure, phi: np.ndarray):
    """
    sum_i w_i int phi rho_i^{(x) k}, with k read from the shape of phi
    """
    grid = P.grid
    phi = np.asarray(phi, dtype=np.float64)
    if phi.ndim % grid.d or phi.shape != (grid.m,) * phi.ndim:
        raise DensityError("de_finetti_monomial(): phi shape {} is not a k-particle grid shape".format(phi.shape))
    k = phi.ndim // grid.d
    block = tuple(range(grid.d))
    total = 0.0
    for w, rho in P.atoms:
        contracted = phi
        for _ in range(k):
            contracted = np.tensordot(rho.values, contracted, axes=(block, block))
        total += w * float(contracted)
    return total * grid.particle_cell_volume ** k
