# Copyright (C) 2020 The fisher_kinetic developers
# This software may be modified and distributed under the terms of the
# LGPL-2.1+ license. See the accompanying LICENSE file for details.

"""Reduced density matrices on the n-particle grid.

Matrices are stored densely in the node basis. The cell-volume weight w = h^{dn} is folded into
traces and inner products: tr(Gamma) = w * sum_X Gamma(X; X), and the operator acting on grid
functions is f -> w * Gamma @ f.
"""

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from fisher_kinetic.densities.density import block_permutation_axes
from fisher_kinetic.densities.grid import GridSpec, check_budget
from fisher_kinetic.errors import BudgetError, DensityError, GridError
from fisher_kinetic.kinetic.fourier import WaveFunction

logger = logging.getLogger(__name__)

# dense eigensolve limit on the matrix dimension m^{dn}
MAX_MATRIX_DIM = 4096
HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
PSD_TOL = 1e-10


class DensityMatrix:
    """
    Hermitian, positive semi-definite, unit-trace operator on the n-particle grid space

    :param grid: (GridSpec) single-particle grid
    :param n_particles: (int) n
    :param matrix: (np.ndarray) shape (m^{dn}, m^{dn})
    :param check: (bool) validate hermiticity, trace and bosonic symmetry
    """

    def __init__(self, grid: GridSpec, n_particles: int, matrix: np.ndarray, check: bool = True):
        self._grid = grid.single_particle()
        self._n = int(n_particles)
        dim = self._grid.m ** (self._grid.d * self._n)
        if matrix.shape != (dim, dim):
            raise DensityError("DensityMatrix(): matrix shape {} does not match dimension {}".format(
                matrix.shape, dim))
        self._matrix = matrix
        if check:
            self.check_invariants()

    @property
    def grid(self):
        return self._grid

    @property
    def n_particles(self):
        return self._n

    @property
    def n_grid(self):
        return self._grid.with_particles(self._n)

    @property
    def matrix(self):
        return self._matrix

    @property
    def dim(self):
        return self._matrix.shape[0]

    @property
    def weight(self):
        return self._grid.spacing ** (self._grid.d * self._n)

    def trace(self):
        return float(np.real(np.trace(self._matrix)) * self.weight)

    def diagonal(self):
        return np.real(np.diag(self._matrix)).reshape(self.n_grid.shape)

    def hermiticity_defect(self):
        return float(np.max(np.abs(self._matrix - self._matrix.conj().T)))

    def symmetry_defect(self):
        grid = self.n_grid
        dn = grid.n_axes
        tensor = self._matrix.reshape(grid.shape + grid.shape)
        defect = 0.0
        for j in range(self._n - 1):
            perm = list(range(self._n))
            perm[j], perm[j + 1] = perm[j + 1], perm[j]
            axes = block_permutation_axes(grid, perm)
            permuted = tensor.transpose(axes + tuple(dn + a for a in axes))
            defect = max(defect, float(np.max(np.abs(permuted - tensor))))
        return defect

    def check_invariants(self):
        scale = max(1.0, float(np.max(np.abs(self._matrix))))
        if self.hermiticity_defect() > HERMITIAN_TOL * scale:
            raise DensityError("check_invariants(): matrix is not Hermitian (defect {:.3e})".format(
                self.hermiticity_defect()))
        if abs(self.trace() - 1.0) > TRACE_TOL:
            raise DensityError("check_invariants(): trace is {!r}, expected 1".format(self.trace()))
        if self.symmetry_defect() > HERMITIAN_TOL * scale:
            raise DensityError("check_invariants(): matrix is not bosonic (defect {:.3e})".format(
                self.symmetry_defect()))


@dataclass
class SpectralDecomposition:
    """Gamma = sum_j lambda_j |u_j><u_j|, eigenvalues nonincreasing, u_j orthonormal for the weighted product."""
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    grid: GridSpec
    min_raw_eigenvalue: float

    @property
    def weight(self):
        return self.grid.cell_volume

    def gram(self):
        flat = self.eigenvectors.reshape(len(self.eigenvalues), -1)
        return (flat.conj() @ flat.T) * self.weight

    def reconstruct(self):
        flat = self.eigenvectors.reshape(len(self.eigenvalues), -1)
        return (flat.T * self.eigenvalues) @ flat.conj()


def _check_matrix_budget(dim: int, itemsize: int, max_dim: int, mem_cap_bytes: int, caller: str):
    if dim > max_dim:
        raise BudgetError("{}(): matrix dimension {} exceeds the limit {}".format(caller, dim, max_dim))
    check_budget(dim * dim, itemsize=itemsize, mem_cap_bytes=mem_cap_bytes, what=caller)


def reduced_density_matrix(psi: WaveFunction, n: int, max_dim: int = MAX_MATRIX_DIM, mem_cap_bytes: int = None):
    """
    Gamma^{(n)}(X_n; Y_n) = sum_Z psi(X_n, Z) conj(psi(Y_n, Z)) * h^{d(N - n)}

    :param psi: (WaveFunction) symmetric N-particle wave function
    :param n: (int) 1 <= n < N
    :param max_dim: (int) limit on m^{dn}
    :param mem_cap_bytes: (int) memory cap
    :return: (DensityMatrix)
    """
    grid = psi.grid
    if not 1 <= n < grid.n_particles:
        raise GridError("reduced_density_matrix(): n must be in [1, {}), got {}".format(grid.n_particles, n))
    dim = grid.m ** (grid.d * n)
    _check_matrix_budget(dim, psi.values.itemsize, max_dim, mem_cap_bytes, 'reduced_density_matrix')
    A = psi.values.reshape(dim, -1)
    gamma = (A @ A.conj().T) * grid.spacing ** (grid.d * (grid.n_particles - n))
    gamma = 0.5 * (gamma + gamma.conj().T)
    return DensityMatrix(grid, n, gamma)


def pure_state_matrix(psi: WaveFunction, max_dim: int = MAX_MATRIX_DIM, mem_cap_bytes: int = None):
    """The projector |psi><psi| on the full N-particle space."""
    grid = psi.grid
    dim = grid.size
    _check_matrix_budget(dim, psi.values.itemsize, max_dim, mem_cap_bytes, 'pure_state_matrix')
    v = psi.values.reshape(-1)
    return DensityMatrix(grid, grid.n_particles, np.outer(v, v.conj()))


def partial_trace(gamma: DensityMatrix, j: int):
    """
    Trace the last n - j particles out of an n-particle density matrix
    """
    n = gamma.n_particles
    if not 1 <= j < n:
        raise GridError("partial_trace(): j must be in [1, {}), got {}".format(n, j))
    grid = gamma.grid
    kept = grid.m ** (grid.d * j)
    traced = grid.m ** (grid.d * (n - j))
    blocks = gamma.matrix.reshape(kept, traced, kept, traced)
    reduced = np.einsum('arbr->ab', blocks) * grid.spacing ** (grid.d * (n - j))
    return DensityMatrix(grid, j, reduced)


def eigendecompose(gamma: DensityMatrix):
    """
    Eigendecomposition of the weighted operator w * Gamma

    Eigenvalues are returned nonincreasing, tiny negative round-off is clipped to 0, and the
    eigenvectors u_j = v_j / sqrt(w) are orthonormal in the cell-volume inner product. Vectors of
    a degenerate cluster are any orthonormal basis of the cluster.
    """
    scale = max(1.0, float(np.max(np.abs(gamma.matrix))))
    if gamma.hermiticity_defect() > HERMITIAN_TOL * scale:
        raise DensityError("eigendecompose(): matrix is not Hermitian (defect {:.3e})".format(
            gamma.hermiticity_defect()))
    w = gamma.weight
    logger.debug("eigendecompose(): dim=%d", gamma.dim)
    evals, vecs = scipy.linalg.eigh(w * gamma.matrix)
    evals = evals[::-1]
    vecs = vecs[:, ::-1]
    min_raw = float(evals.min())
    if min_raw < -PSD_TOL:
        raise DensityError("eigendecompose(): matrix is not positive semi-definite "
                           "(min eigenvalue {:.3e})".format(min_raw))
    grid = gamma.n_grid
    eigenvectors = (vecs.T / np.sqrt(w)).reshape((len(evals),) + grid.shape)
    return SpectralDecomposition(eigenvalues=np.clip(evals, 0.0, None), eigenvectors=eigenvectors,
                                 grid=grid, min_raw_eigenvalue=min_raw)


def monomial_trace(gamma: DensityMatrix, phi: np.ndarray):
    """
    tr(phi Gamma) = sum_X phi(X) Gamma(X; X) * h^{dn} for a multiplication operator phi
    """
    phi = np.asarray(phi)
    if phi.shape != gamma.n_grid.shape:
        raise DensityError("monomial_trace(): phi shape {} does not match {}".format(phi.shape, gamma.n_grid.shape))
    if np.iscomplexobj(phi) or not np.all(np.isfinite(phi)):
        raise DensityError("monomial_trace(): phi must be real and bounded")
    return float(np.sum(phi * gamma.diagonal()) * gamma.weight)
