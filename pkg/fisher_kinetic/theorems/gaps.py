# Copyright (C) 2020 The fisher_kinetic developers
# This software may be modified and distributed under the terms of the
# LGPL-2.1+ license. See the accompanying LICENSE file for details.

"""Gaps of the inequalities checked by the suites.

Every gap is oriented so that the inequality predicts a nonnegative value.
"""

import logging
import math

import numpy as np

from fisher_kinetic.densities.density import Density, MixingMeasure, marginal, mixture_product_density
from fisher_kinetic.errors import DensityError, GridError
from fisher_kinetic.kinetic.fisher import fisher_info
from fisher_kinetic.kinetic.fourier import KineticSpec, WaveFunction, kinetic_form
from fisher_kinetic.quantum.hoffmann_ostenhof import hoffmann_ostenhof_chain, split_identity_check

logger = logging.getLogger(__name__)


def _info(mu: Density, spec: KineticSpec, workers: int = 1):
    return fisher_info(mu, spec, workers=workers).value


def _check_split(mu: Density, n: int, caller: str):
    if not 1 <= n < mu.n_particles:
        raise GridError("{}(): n must be in [1, {}), got {}".format(caller, mu.n_particles, n))


def superadditivity_gap(mu: Density, n: int, spec: KineticSpec, workers: int = 1):
    """I_s[mu_N] - I_s[mu^{(n)}] - I_s[mu^{(N-n)}]"""
    _check_split(mu, n, 'superadditivity_gap')
    big_n = mu.n_particles
    total = _info(mu, spec, workers)
    first = _info(marginal(mu, n), spec, workers)
    second = first if big_n - n == n else _info(marginal(mu, big_n - n), spec, workers)
    return total - first - second


def normalized_monotonicity_check(mu: Density, n: int, spec: KineticSpec, workers: int = 1):
    """(1/N) I_s[mu_N] - (1/n) I_s[mu^{(n)}], for n dividing N"""
    _check_split(mu, n, 'normalized_monotonicity_check')
    big_n = mu.n_particles
    if big_n % n:
        raise GridError("normalized_monotonicity_check(): n = {} does not divide N = {}".format(n, big_n))
    return _info(mu, spec, workers) / big_n - _info(marginal(mu, n), spec, workers) / n


def affine_value(P: MixingMeasure, spec: KineticSpec, workers: int = 1):
    """sum_i w_i I_s[rho_i]"""
    return math.fsum(w * _info(rho, spec, workers) for w, rho in P.atoms)


def mean_info_sequence(P: MixingMeasure, spec: KineticSpec, n_max: int, mem_cap_bytes: int = None,
                       workers: int = 1):
    """
    [(n, g_n)] with g_n = (1/n) I_s[mu^{(n)}] and mu^{(n)} = sum_i w_i rho_i^{(x) n}

    :param P: (MixingMeasure)
    :param spec: (KineticSpec)
    :param n_max: (int) largest particle number
    :return: (list)
    """
    if n_max < 1:
        raise GridError("mean_info_sequence(): n_max must be >= 1, got {}".format(n_max))
    table = []
    for n in range(1, n_max + 1):
        mu_n = mixture_product_density(P, n, mem_cap_bytes=mem_cap_bytes)
        g_n = fisher_info(mu_n, spec, fast_path=True, workers=workers).value / n
        logger.debug("mean_info_sequence(): n=%d g_n=%.12g", n, g_n)
        table.append((n, g_n))
    return table


def affinity_defect(P: MixingMeasure, spec: KineticSpec, n: int, mem_cap_bytes: int = None, workers: int = 1):
    """sum_i w_i I_s[rho_i] - g_n"""
    mu_n = mixture_product_density(P, n, mem_cap_bytes=mem_cap_bytes)
    g_n = fisher_info(mu_n, spec, fast_path=True, workers=workers).value / n
    return affine_value(P, spec, workers) - g_n


def diamagnetic_test(u: WaveFunction, spec: KineticSpec, workers: int = 1):
    """<u, H u> - <|u|, H |u|>"""
    return kinetic_form(u, spec, workers=workers) - kinetic_form(u.modulus(), spec, workers=workers)


def convexity_test(rho1: Density, rho2: Density, t: float, spec: KineticSpec, workers: int = 1):
    """t I_s[rho1] + (1 - t) I_s[rho2] - I_s[t rho1 + (1 - t) rho2]"""
    if rho1.grid != rho2.grid:
        raise DensityError("convexity_test(): densities live on different grids")
    if not 0.0 <= t <= 1.0:
        raise DensityError("convexity_test(): t must lie in [0, 1], got {}".format(t))
    mix = Density.from_values(rho1.grid, t * rho1.values + (1.0 - t) * rho2.values)
    return t * _info(rho1, spec, workers) + (1.0 - t) * _info(rho2, spec, workers) - _info(mix, spec, workers)


def superadditivity_decomposition(mu: Density, n: int, spec: KineticSpec, mem_cap_bytes: int = None,
                                  workers: int = 1):
    """
    Split the superadditivity gap along the Hoffmann-Ostenhof chains of Gamma^{(n)} and Gamma^{(N-n)}

    Returns a dict with the four chain gaps, the split and identity residuals, their sum and the
    directly computed superadditivity gap; 'total' and 'superadditivity_gap' agree up to round-off.
    """
    _check_split(mu, n, 'superadditivity_decomposition')
    big_n = mu.n_particles
    chain_n = hoffmann_ostenhof_chain(mu, n, spec, mem_cap_bytes=mem_cap_bytes, workers=workers)
    chain_rest = chain_n if big_n - n == n else hoffmann_ostenhof_chain(
        mu, big_n - n, spec, mem_cap_bytes=mem_cap_bytes, workers=workers)
    lhs, rhs = split_identity_check(mu, n, spec, mem_cap_bytes=mem_cap_bytes, workers=workers)
    parts = {
        'diamagnetic_n': chain_n.diamagnetic_gap,
        'convexity_n': chain_n.convexity_gap,
        'diamagnetic_rest': chain_rest.diamagnetic_gap,
        'convexity_rest': chain_rest.convexity_gap,
        'identity_residual': chain_n.identity_gap + chain_rest.identity_gap,
        'split_residual': lhs - rhs,
    }
    parts['total'] = math.fsum(parts.values())
    parts['superadditivity_gap'] = lhs - chain_n.marginal_energy - chain_rest.marginal_energy
    return parts


def doubling_subsequence(table):
    """Entries of a mean-info table whose n is a power of two."""
    return [(n, g) for n, g in table if n & (n - 1) == 0]


def is_nondecreasing(values, slack: float = 1e-9):
    values = np.asarray(values, dtype=np.float64)
    return bool(np.all(np.diff(values) >= -slack * (1.0 + np.abs(values[1:]))))
