# Copyright (C) 2020 The fisher_kinetic developers
# This software may be modified and distributed under the terms of the
# LGPL-2.1+ license. See the accompanying LICENSE file for details.

from dataclasses import dataclass

import numpy as np

from fisher_kinetic.errors import BudgetError, GridError

# default cap on the largest single array allocation (bytes); override per call
MEM_CAP_BYTES = 2 * 1024 ** 3


@dataclass(frozen=True)
class GridSpec:
    """
    Uniform periodic grid on the N-particle torus ([0, L)^d)^N

    Axes are ordered particle-major: axes [j*d, (j+1)*d) hold the coordinates of particle j.
    """
    d: int
    n_particles: int
    m: int
    period: float

    def __post_init__(self):
        if not isinstance(self.d, (int, np.integer)) or self.d < 1:
            raise GridError("GridSpec(): d must be a positive integer, got {}".format(self.d))
        if not isinstance(self.n_particles, (int, np.integer)) or self.n_particles < 1:
            raise GridError("GridSpec(): n_particles must be a positive integer, got {}".format(self.n_particles))
        if not isinstance(self.m, (int, np.integer)) or self.m < 2:
            raise GridError("GridSpec(): m must be an integer >= 2, got {}".format(self.m))
        if not self.period > 0.0 or not np.isfinite(self.period):
            raise GridError("GridSpec(): period must be positive, got {}".format(self.period))
        object.__setattr__(self, 'period', float(self.period))

    # --- shape --- #

    @property
    def n_axes(self):
        return self.d * self.n_particles

    @property
    def shape(self):
        return (self.m,) * self.n_axes

    @property
    def size(self):
        return self.m ** self.n_axes

    @property
    def spacing(self):
        return self.period / self.m

    @property
    def cell_volume(self):
        return self.spacing ** self.n_axes

    @property
    def particle_cell_volume(self):
        return self.spacing ** self.d

    def block_axes(self, j: int):
        if not 0 <= j < self.n_particles:
            raise GridError("block_axes(): particle index {} out of range".format(j))
        return tuple(range(j * self.d, (j + 1) * self.d))

    def nodes(self):
        return np.arange(self.m) * self.spacing

    # --- derived grids --- #

    def with_particles(self, n: int):
        return GridSpec(self.d, n, self.m, self.period)

    def single_particle(self):
        return self.with_particles(1)

    def to_dict(self):
        return {'d': self.d, 'n_particles': self.n_particles, 'm': self.m, 'period': self.period}


def check_budget(n_entries: int, itemsize: int = 8, mem_cap_bytes: int = None, what: str = 'array'):
    """
    Raise BudgetError if an allocation of n_entries items would exceed the memory cap

    :param n_entries: (int) number of array entries
    :param itemsize: (int) bytes per entry
    :param mem_cap_bytes: (int) cap, MEM_CAP_BYTES when None
    :param what: (str) label of the allocation
    """
    cap = MEM_CAP_BYTES if mem_cap_bytes is None else mem_cap_bytes
    needed = int(n_entries) * int(itemsize)
    if needed > cap:
        raise BudgetError("check_budget(): {} needs {} bytes, cap is {}".format(what, needed, cap))
    return needed
