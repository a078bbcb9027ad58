# Copyright (C) 2020 The fisher_kinetic developers
# This software may be modified and distributed under the terms of the
# LGPL-2.1+ license. See the accompanying LICENSE file for details.

import os, inspect
currentdir = os.path.dirname(os.path.abspath(inspect.getfile(inspect.currentframe())))
parentdir = os.path.dirname(os.path.dirname(os.path.dirname(currentdir)))
os.sys.path.insert(0, parentdir)

from termcolor import colored

from fisher_kinetic.densities import GridSpec, gaussian_density, product_density, well_separated_mixture
from fisher_kinetic.densities.density import mixture_product_density
from fisher_kinetic.kinetic import (
    KineticSpec, fisher_info, gaussian_fisher_closed_form, gaussian_fisher_torus_series,
)
from fisher_kinetic.theorems import superadditivity_gap


def main():

    # ------------------------- #
    # --- Single Gaussian   --- #
    # ------------------------- #

    grid = GridSpec(d=1, n_particles=1, m=64, period=16.0)
    rho = gaussian_density(grid, [8.0], 1.0)

    for s in (0.5, 1.0):
        value = fisher_info(rho, KineticSpec(s=s)).value
        torus = gaussian_fisher_torus_series(1, 1.0, s, 16.0)
        free_space = gaussian_fisher_closed_form(1, 1.0, s)
        print("I_{} = {:.10f}   torus lattice sum {:.10f}   R closed form {:.10f}".format(s, value, torus, free_space))

    # ------------------------- #
    # --- Tensorization     --- #
    # ------------------------- #

    for n in (2, 3):
        mu = product_density(rho, n)
        ratio = fisher_info(mu).value / fisher_info(rho).value
        print("I_1[rho^{}] / I_1[rho] = {:.12f}".format(n, ratio))

    # ------------------------- #
    # --- Superadditivity   --- #
    # ------------------------- #

    mu = mixture_product_density(well_separated_mixture(grid), 2)
    spec = KineticSpec(s=0.5, symbol='lattice')
    gap = superadditivity_gap(mu, 1, spec)
    total = fisher_info(mu, spec).value
    color = 'green' if gap > 0.01 * total else 'red'
    print(colored("superadditivity gap = {:.6f} ({:.2%} of I_s[mu])".format(gap, gap / total), color))


if __name__ == '__main__':
    main()
