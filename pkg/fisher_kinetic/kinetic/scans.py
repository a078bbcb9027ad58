# Copyright (C) 2020 The fisher_kinetic developers
# This software may be modified and distributed under the terms of the
# LGPL-2.1+ license. See the accompanying LICENSE file for details.

import logging
from typing import Sequence

import numpy as np
import pandas as pd

from fisher_kinetic.densities.density import Density
from fisher_kinetic.errors import SpecError
from fisher_kinetic.kinetic.fisher import fisher_info, gaussian_fisher_closed_form, gaussian_fisher_torus_series
from fisher_kinetic.kinetic.fourier import KineticSpec
from fisher_kinetic.kinetic.singular import singular_form

logger = logging.getLogger(__name__)

BBM_COLUMNS = ['s', 'spectral', 'scaled_singular']
DEFAULT_S_VALUES = (0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99)


def _check_s_values(s_values: Sequence[float]):
    s_values = [float(s) for s in s_values]
    if not s_values:
        raise SpecError("bbm_scan(): s_values is empty")
    if any(not 0.0 < s < 1.0 for s in s_values):
        raise SpecError("bbm_scan(): every s must lie in (0, 1), got {}".format(s_values))
    if any(b <= a for a, b in zip(s_values, s_values[1:])):
        raise SpecError("bbm_scan(): s_values must be sorted ascending, got {}".format(s_values))
    return s_values


def bbm_scan(mu: Density, s_values: Sequence[float] = DEFAULT_S_VALUES, exponent_offset: str = '2s',
             workers: int = 1):
    """
    Table of (s, spectral I_s, (1 - s) * singular_form) approaching s = 1

    The returned frame carries attrs 'I_1' (spectral s = 1 value) and 'continuity_defect',
    |I_{s_max} - I_1| / I_1 (0 when I_1 = 0).

    :param mu: (Density) permutation-symmetric density
    :param s_values: (list) ascending orders in (0, 1)
    :param exponent_offset: (str) kernel convention of the singular column
    :return: (pd.DataFrame)
    """
    s_values = _check_s_values(s_values)
    rows = []
    for s in s_values:
        spectral = fisher_info(mu, KineticSpec(s=s), fast_path=True, workers=workers).value
        scaled = (1.0 - s) * singular_form(mu, s, exponent_offset)
        rows.append((s, spectral, scaled))
        logger.debug("bbm_scan(): s=%.4f spectral=%.8g scaled_singular=%.8g", s, spectral, scaled)
    table = pd.DataFrame(rows, columns=BBM_COLUMNS)
    i_1 = fisher_info(mu, KineticSpec(s=1.0), fast_path=True, workers=workers).value
    table.attrs['I_1'] = i_1
    table.attrs['continuity_defect'] = abs(rows[-1][1] - i_1) / i_1 if i_1 > 0.0 else 0.0
    return table


def gaussian_closed_form_column(s_values: Sequence[float], d: int, sigma2: float, period: float = None):
    """Gaussian I_s oracle per s: the lattice sum on the torus of side period, the R^d value when period is None."""
    if period is None:
        return np.array([gaussian_fisher_closed_form(d, sigma2, s) for s in s_values])
    return np.array([gaussian_fisher_torus_series(d, sigma2, s, period) for s in s_values])
