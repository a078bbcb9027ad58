# Copyright (C) 2020 The fisher_kinetic developers
# This software may be modified and distributed under the terms of the
# LGPL-2.1+ license. See the accompanying LICENSE file for details.

"""Seeded property suites.

Each suite draws its inputs for trial i from an RNG seeded with derive_seed(master_seed, i), so
a report only depends on the suite configuration. Trial parameters that are not random (particle
numbers, orders, input kinds) cycle deterministically with the trial index.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from gym.utils import seeding

from fisher_kinetic.densities.density import (
    Density, MixingMeasure, band_limited_field, gaussian_density, marginal, mixture_product_density,
    overlapping_mixture, random_density, well_separated_mixture,
)
from fisher_kinetic.densities.grid import GridSpec
from fisher_kinetic.kinetic.fisher import fisher_info, gradient_form
from fisher_kinetic.kinetic.fourier import KineticSpec, WaveFunction, sqrt_density
from fisher_kinetic.kinetic.scans import DEFAULT_S_VALUES, bbm_scan, gaussian_closed_form_column
from fisher_kinetic.kinetic.singular import (
    HELD_OUT_SMOOTHNESS, bbm_limit_constant, calibrate_singular_constant, singular_form,
)
from fisher_kinetic.quantum.density_matrix import monomial_trace, reduced_density_matrix
from fisher_kinetic.quantum.hoffmann_ostenhof import de_finetti_monomial, hoffmann_ostenhof_chain, split_identity_check
from fisher_kinetic.registration import make
from fisher_kinetic.theorems.gaps import (
    affine_value, convexity_test, diamagnetic_test, mean_info_sequence,
    normalized_monotonicity_check, superadditivity_decomposition, superadditivity_gap,
)
from fisher_kinetic.theorems.report import GapRecord, SuiteReport, TrialRecord
from fisher_kinetic.utils import derive_seed, inputs_digest, make_rng

logger = logging.getLogger(__name__)

S_VALUES = (0.5, 1.0)
# grid points per axis for an N-particle trial on the full grid
GRID_POINTS = {1: 64, 2: 32, 3: 16, 4: 16}


def _draw_seed(rng):
    return int(rng.uniform(0.0, 2.0 ** 31 - 1))


class TheoremSuite(object):
    """
    Base class of the property suites

    Subclasses implement sample(rng, index) -> dict of inputs and evaluate(inputs) -> (kind, gaps, extras).
    """
    name = None
    spec = None

    def __init__(self, trials=10, master_seed=0, tolerance=1e-9, workers=1, period=16.0, mem_cap_bytes=None):
        self._trials = int(trials)
        self._tolerance = tolerance
        self._workers = max(1, int(workers))
        self._period = float(period)
        self._mem_cap_bytes = mem_cap_bytes
        self._config = {'trials': self._trials, 'tolerance': tolerance, 'workers': self._workers,
                        'period': self._period, 'mem_cap_bytes': mem_cap_bytes}
        self.seed(master_seed)

    def seed(self, seed=None):
        self.np_random, seed = seeding.np_random(seed)
        self._master_seed = seed
        self._config['master_seed'] = seed
        return [seed]

    def grid(self, n_particles, m=None):
        return GridSpec(1, n_particles, GRID_POINTS[n_particles] if m is None else m, self._period)

    def trial_seed(self, index):
        return derive_seed(self._master_seed, index)

    def gap(self, name, value, scale=0.0, tolerance=None, strict=False):
        return GapRecord(name=name, value=float(value),
                         tolerance=self._tolerance if tolerance is None else tolerance,
                         scale=float(scale), strict=strict)

    # --- to implement --- #

    def sample(self, rng, index):
        raise NotImplementedError

    def evaluate(self, inputs):
        raise NotImplementedError

    def summarize(self, records):
        """Extra ensemble records appended after the trials."""
        return []

    # --- driver --- #

    @staticmethod
    def _digest(inputs):
        arrays, params = [], {}
        for key in sorted(inputs):
            value = inputs[key]
            if isinstance(value, (Density, WaveFunction)):
                arrays.append(value.values)
            elif isinstance(value, MixingMeasure):
                arrays.extend(rho.values for rho in value.densities)
                params[key + '_weights'] = value.weights.tolist()
            elif isinstance(value, np.ndarray):
                arrays.append(value)
            else:
                params[key] = value
        return inputs_digest(*arrays, **params)

    def _run_trial(self, index):
        seed = self.trial_seed(index)
        record = TrialRecord(index=index, seed=seed, digest='', kind='')
        try:
            inputs = self.sample(make_rng(seed), index)
            record.kind = inputs.get('kind', '')
            record.digest = self._digest(inputs)
            record.kind, record.gaps, record.extras = self.evaluate(inputs)
        except Exception as err:
            logger.warning("%s: trial %d failed: %r", self.name, index, err)
            record.error = repr(err)
        logger.debug("%s: trial %d passed=%s", self.name, index, record.passed)
        return record

    def run(self):
        start = time.perf_counter()
        indices = range(self._trials)
        if self._workers > 1:
            with ThreadPoolExecutor(max_workers=self._workers) as pool:
                records = list(pool.map(self._run_trial, indices))
        else:
            records = [self._run_trial(i) for i in indices]
        if records:
            records.extend(self.summarize(records))
        report = SuiteReport(suite=self.name, records=records, tolerance=self._tolerance,
                             config=dict(self._config), runtime=time.perf_counter() - start)
        logger.info("%s: %d trials, passed=%s, min gap=%s", self.name, report.trial_count,
                    report.passed, report.min_gap)
        return report

    # --- shared samplers --- #

    def random_mixture(self, rng, grid_1p, n_atoms, smoothness=1.0):
        weights = np.array([rng.uniform(0.2, 1.0) for _ in range(n_atoms)])
        weights = weights / weights.sum()
        weights[-1] = 1.0 - weights[:-1].sum()
        atoms = [random_density(grid_1p, _draw_seed(rng), smoothness) for _ in range(n_atoms)]
        return MixingMeasure.from_lists(weights.tolist(), atoms)

    def symmetric_input(self, rng, n_particles, kind):
        grid = self.grid(n_particles)
        if kind == 'random':
            return random_density(grid, _draw_seed(rng))
        P = self.random_mixture(rng, grid.single_particle(), 2 + _draw_seed(rng) % 2)
        return mixture_product_density(P, n_particles, mem_cap_bytes=self._mem_cap_bytes)


class SuperadditivitySuite(TheoremSuite):
    """
    I_s[mu_N] >= I_s[mu^(n)] + I_s[mu^(N-n)]; trial 0 is the structured two-Gaussian mixture
    """

    def __init__(self, trials=100, symbol='lattice', structured_margin=0.01, **kwargs):
        super(SuperadditivitySuite, self).__init__(trials=trials, **kwargs)
        self._symbol = symbol
        self._structured_margin = structured_margin
        self._config.update(symbol=symbol, structured_margin=structured_margin)

    def sample(self, rng, index):
        if index == 0:
            grid_1p = self.grid(1)
            mu = mixture_product_density(well_separated_mixture(grid_1p), 2)
            return {'kind': 'structured', 'mu': mu, 'n': 1, 's': 0.5}
        big_n = (2, 3, 4)[index % 3]
        kind = ('random', 'mixture')[index % 2]
        s = S_VALUES[(index // 6) % 2]
        n = 1 + (index // 12) % (big_n - 1)
        return {'kind': kind, 'mu': self.symmetric_input(rng, big_n, kind), 'n': n, 's': s}

    def evaluate(self, inputs):
        mu, n = inputs['mu'], inputs['n']
        spec = KineticSpec(s=inputs['s'], symbol=self._symbol)
        value = fisher_info(mu, spec, workers=self._workers).value
        gap = superadditivity_gap(mu, n, spec, workers=self._workers)
        gaps = [self.gap('superadditivity', gap, scale=value)]
        if inputs['kind'] == 'structured':
            gaps.append(self.gap('structured_margin', gap - self._structured_margin * value, strict=True))
        extras = {'N': mu.n_particles, 'n': n, 's': inputs['s'], 'value': value, 'relative_gap': gap / value}
        return inputs['kind'], gaps, extras


class MonotonicitySuite(TheoremSuite):
    """(1/N) I_s[mu_N] >= (1/n) I_s[mu^(n)] for n dividing N"""
    PAIRS = ((2, 1), (3, 1), (4, 1), (4, 2))

    def __init__(self, trials=40, symbol='lattice', **kwargs):
        super(MonotonicitySuite, self).__init__(trials=trials, **kwargs)
        self._symbol = symbol
        self._config.update(symbol=symbol)

    def sample(self, rng, index):
        big_n, n = self.PAIRS[index % 4]
        kind = ('random', 'mixture')[(index // 4) % 2]
        s = S_VALUES[(index // 8) % 2]
        return {'kind': kind, 'mu': self.symmetric_input(rng, big_n, kind), 'n': n, 's': s}

    def evaluate(self, inputs):
        mu, n = inputs['mu'], inputs['n']
        spec = KineticSpec(s=inputs['s'], symbol=self._symbol)
        gap = normalized_monotonicity_check(mu, n, spec, workers=self._workers)
        scale = fisher_info(mu, spec, workers=self._workers).value / mu.n_particles
        return inputs['kind'], [self.gap('monotonicity', gap, scale=scale)], \
            {'N': mu.n_particles, 'n': n, 's': inputs['s']}


class AffinitySuite(TheoremSuite):
    """
    Mean information of de Finetti mixtures: upper affine bound, doubling monotonicity and, for the
    overlapping two-Gaussian fixture, a strictly shrinking affine defect from n = 2 to n = 6.
    Trials 0 and 1 are the fixture at s = 1/2 and s = 1; later trials use random two-atom mixtures.
    """

    def __init__(self, trials=2, n_max=6, n_max_random=4, m=16, symbol='lattice', **kwargs):
        super(AffinitySuite, self).__init__(trials=trials, **kwargs)
        self._n_max = n_max
        self._n_max_random = n_max_random
        self._m = m
        self._symbol = symbol
        self._config.update(n_max=n_max, n_max_random=n_max_random, m=m, symbol=symbol)

    def sample(self, rng, index):
        grid_1p = self.grid(1, m=self._m)
        s = S_VALUES[index % 2]
        if index < 2:
            return {'kind': 'fixture', 'P': overlapping_mixture(grid_1p), 's': s, 'n_max': self._n_max}
        return {'kind': 'mixture', 'P': self.random_mixture(rng, grid_1p, 2), 's': s,
                'n_max': self._n_max_random}

    def evaluate(self, inputs):
        P = inputs['P']
        spec = KineticSpec(s=inputs['s'], symbol=self._symbol)
        table = dict(mean_info_sequence(P, spec, inputs['n_max'], mem_cap_bytes=self._mem_cap_bytes,
                                        workers=self._workers))
        affine = affine_value(P, spec, workers=self._workers)
        gaps = [self.gap('affine_bound_n{}'.format(n), affine - g, tolerance=1e-9) for n, g in sorted(table.items())]
        doubling = [n for n in (1, 2, 4) if n in table]
        for a, b in zip(doubling, doubling[1:]):
            gaps.append(self.gap('doubling_{}_{}'.format(a, b), table[b] - table[a], tolerance=1e-9))
        if inputs['kind'] == 'fixture' and 6 in table:
            gaps.append(self.gap('defect_trend_2_6', table[6] - table[2], strict=True))
        extras = {'s': inputs['s'], 'affine': affine,
                  'g_n': {str(n): g for n, g in sorted(table.items())},
                  'defect': {str(n): affine - g for n, g in sorted(table.items())}}
        return inputs['kind'], gaps, extras


class DiamagneticSuite(TheoremSuite):
    """<u, H u> >= <|u|, H |u|> for u = sqrt(rho) exp(i phi) with smooth random phase"""

    def __init__(self, trials=1000, tolerance=1e-10, symbols=('spectral', 'lattice'), smoothness=1.0,
                 phase_scale=np.pi, **kwargs):
        super(DiamagneticSuite, self).__init__(trials=trials, tolerance=tolerance, **kwargs)
        self._symbols = tuple(symbols)
        self._smoothness = smoothness
        self._phase_scale = phase_scale
        self._config.update(symbols=list(self._symbols), smoothness=smoothness, phase_scale=phase_scale)

    def sample(self, rng, index):
        grid = self.grid(1)
        rho = random_density(grid, _draw_seed(rng), self._smoothness)
        phase = self._phase_scale * band_limited_field(grid, rng, self._smoothness)
        u = WaveFunction(grid, np.sqrt(rho.values) * np.exp(1j * phase))
        return {'kind': 'phase', 'u': u, 's': S_VALUES[index % 2],
                'symbol': self._symbols[(index // 2) % len(self._symbols)]}

    def evaluate(self, inputs):
        spec = KineticSpec(s=inputs['s'], symbol=inputs['symbol'])
        gap = diamagnetic_test(inputs['u'], spec, workers=self._workers)
        return inputs['kind'], [self.gap('diamagnetic', gap)], {'s': inputs['s'], 'symbol': inputs['symbol']}


class ConvexitySuite(TheoremSuite):
    """t I[rho1] + (1 - t) I[rho2] >= I[t rho1 + (1 - t) rho2]; every tenth trial uses two disjoint bumps at t = 1/2"""

    def __init__(self, trials=1000, tolerance=1e-10, symbols=('spectral', 'lattice'), **kwargs):
        super(ConvexitySuite, self).__init__(trials=trials, tolerance=tolerance, **kwargs)
        self._symbols = tuple(symbols)
        self._config.update(symbols=list(self._symbols))

    def sample(self, rng, index):
        grid = self.grid(1)
        s = S_VALUES[index % 2]
        symbol = self._symbols[(index // 2) % len(self._symbols)]
        if index % 10 == 9:
            rho1, rho2 = well_separated_mixture(grid).densities
            return {'kind': 'bumps', 'rho1': rho1, 'rho2': rho2, 't': 0.5, 's': s, 'symbol': symbol}
        rho1 = random_density(grid, _draw_seed(rng))
        rho2 = random_density(grid, _draw_seed(rng))
        return {'kind': 'random', 'rho1': rho1, 'rho2': rho2, 't': rng.uniform(0.0, 1.0), 's': s,
                'symbol': symbol}

    def evaluate(self, inputs):
        spec = KineticSpec(s=inputs['s'], symbol=inputs['symbol'])
        gap = convexity_test(inputs['rho1'], inputs['rho2'], inputs['t'], spec, workers=self._workers)
        return inputs['kind'], [self.gap('convexity', gap)], \
            {'s': inputs['s'], 't': inputs['t'], 'symbol': inputs['symbol']}


class SplitSuite(TheoremSuite):
    """I_s[mu_N] = tr(H_n Gamma^(n)) + tr(H_{N-n} Gamma^(N-n)), relative error"""

    def __init__(self, trials=20, symbol='spectral', **kwargs):
        super(SplitSuite, self).__init__(trials=trials, **kwargs)
        self._symbol = symbol
        self._config.update(symbol=symbol)

    def sample(self, rng, index):
        big_n = (2, 3)[index % 2]
        kind = ('random', 'mixture')[(index // 2) % 2]
        return {'kind': kind, 'mu': self.symmetric_input(rng, big_n, kind), 'n': 1,
                's': S_VALUES[(index // 4) % 2]}

    def evaluate(self, inputs):
        spec = KineticSpec(s=inputs['s'], symbol=self._symbol)
        lhs, rhs = split_identity_check(inputs['mu'], inputs['n'], spec, mem_cap_bytes=self._mem_cap_bytes,
                                        workers=self._workers)
        error = abs(lhs - rhs) / lhs if lhs > 0.0 else abs(rhs)
        return inputs['kind'], [self.gap('split_identity', -error)], {'lhs': lhs, 'rhs': rhs}


class HoffmannOstenhofSuite(TheoremSuite):
    """
    Proof chain of superadditivity: rho_n = mu^(n), both chain inequalities, PSD spectrum and the
    accounting identity sum(chain gaps) = superadditivity gap
    """

    def __init__(self, trials=20, symbol='lattice', identity_tolerance=1e-10, **kwargs):
        super(HoffmannOstenhofSuite, self).__init__(trials=trials, **kwargs)
        self._symbol = symbol
        self._identity_tolerance = identity_tolerance
        self._config.update(symbol=symbol, identity_tolerance=identity_tolerance)

    def sample(self, rng, index):
        big_n = (2, 3)[index % 2]
        kind = ('random', 'mixture')[(index // 2) % 2]
        return {'kind': kind, 'mu': self.symmetric_input(rng, big_n, kind), 'n': 1,
                's': S_VALUES[(index // 4) % 2]}

    def evaluate(self, inputs):
        mu, n = inputs['mu'], inputs['n']
        spec = KineticSpec(s=inputs['s'], symbol=self._symbol)
        chain = hoffmann_ostenhof_chain(mu, n, spec, mem_cap_bytes=self._mem_cap_bytes, workers=self._workers)
        parts = superadditivity_decomposition(mu, n, spec, mem_cap_bytes=self._mem_cap_bytes, workers=self._workers)
        gaps = [
            self.gap('ho_identity', -chain.identity_error, tolerance=self._identity_tolerance),
            self.gap('min_eigenvalue', chain.min_eigenvalue, tolerance=self._identity_tolerance),
            self.gap('diamagnetic', chain.diamagnetic_gap, scale=chain.trace_energy),
            self.gap('convexity', chain.convexity_gap, scale=chain.trace_energy),
            self.gap('accounting', -abs(parts['total'] - parts['superadditivity_gap']),
                     scale=parts['superadditivity_gap']),
        ]
        return inputs['kind'], gaps, {'chain': chain.to_dict(), 'decomposition': parts}


class MonomialSuite(TheoremSuite):
    """tr(phi Gamma^(1)) = int phi mu^(1) = sum_i w_i int phi rho_i for bounded random phi"""

    def __init__(self, trials=20, tolerance=1e-10, **kwargs):
        super(MonomialSuite, self).__init__(trials=trials, tolerance=tolerance, **kwargs)

    def sample(self, rng, index):
        grid = self.grid(2)
        phi = rng.uniform(-1.0, 1.0, size=(grid.m,))
        if index % 2 == 0:
            return {'kind': 'random', 'mu': random_density(grid, _draw_seed(rng)), 'phi': phi}
        P = self.random_mixture(rng, grid.single_particle(), 2)
        return {'kind': 'mixture', 'mu': mixture_product_density(P, 2), 'P': P, 'phi': phi}

    def evaluate(self, inputs):
        mu, phi = inputs['mu'], inputs['phi']
        gamma = reduced_density_matrix(sqrt_density(mu), 1, mem_cap_bytes=self._mem_cap_bytes)
        mu_1 = marginal(mu, 1)
        classical = float(np.sum(phi * mu_1.values) * mu_1.grid.cell_volume)
        trace = monomial_trace(gamma, phi)
        gaps = [self.gap('trace_vs_marginal', -abs(trace - classical))]
        if 'P' in inputs:
            gaps.append(self.gap('de_finetti', -abs(de_finetti_monomial(inputs['P'], phi) - classical)))
        return inputs['kind'], gaps, {'trace': trace, 'marginal': classical}


class BBMSuite(TheoremSuite):
    """
    Continuity of I_s at s = 1, the calibrated (1 - s)-scaled singular limit, Plancherel exactness
    and the gradient forms; trial 0 is the Gaussian sigma^2 = 1 with its closed form
    """

    def __init__(self, trials=6, s_values=DEFAULT_S_VALUES, continuity_bound=0.02, limit_bound=0.05,
                 closed_form_bound=1e-3, gradient_bound=0.01, smoothness=HELD_OUT_SMOOTHNESS, **kwargs):
        super(BBMSuite, self).__init__(trials=trials, **kwargs)
        self._s_values = tuple(s_values)
        self._bounds = {'continuity': continuity_bound, 'limit': limit_bound,
                        'closed_form': closed_form_bound, 'gradient': gradient_bound}
        self._smoothness = smoothness
        self._config.update(s_values=list(self._s_values), smoothness=smoothness, **self._bounds)

    def sample(self, rng, index):
        grid = self.grid(1)
        if index == 0:
            return {'kind': 'gaussian', 'rho': gaussian_density(grid, [0.5 * self._period], 1.0), 'sigma2': 1.0}
        return {'kind': 'random', 'rho': random_density(grid, _draw_seed(rng), self._smoothness)}

    def evaluate(self, inputs):
        rho = inputs['rho']
        table = bbm_scan(rho, self._s_values, workers=self._workers)
        i_1 = table.attrs['I_1']
        s_top = self._s_values[-1]
        K = bbm_limit_constant(rho.grid, s_top)
        limit_error = abs(K * table['scaled_singular'].iloc[-1] - i_1) / i_1
        spectral_gradient = gradient_form(rho, 'spectral')
        gaps = [
            self.gap('continuity', self._bounds['continuity'] - table.attrs['continuity_defect']),
            self.gap('bbm_limit', self._bounds['limit'] - limit_error),
            self.gap('plancherel', -abs(spectral_gradient - i_1) / i_1),
        ]
        if inputs['kind'] == 'gaussian':
            closed = gaussian_closed_form_column(self._s_values, 1, inputs['sigma2'], self._period)
            worst = float(np.max(np.abs(table['spectral'].to_numpy() - closed) / closed))
            gaps.append(self.gap('closed_form', self._bounds['closed_form'] - worst))
            free_space = gaussian_closed_form_column([1.0], 1, inputs['sigma2'])[0]
            gaps.append(self.gap('closed_form_s1', 1e-6 - abs(i_1 - free_space) / free_space))
            centered = gradient_form(rho, 'centered')
            gaps.append(self.gap('centered_gradient', self._bounds['gradient'] - abs(centered - i_1) / i_1))
        extras = {'I_1': i_1, 'K': K, 'limit_error': limit_error,
                  'continuity_defect': table.attrs['continuity_defect'],
                  'table': table.to_dict(orient='list')}
        return inputs['kind'], gaps, extras


class MethodAgreementSuite(TheoremSuite):
    """
    Calibrated singular form vs spectral I_s on held-out densities. The 2s exponent must agree
    within the bound for every density; the summary record requires the s exponent to miss it.
    """

    def __init__(self, trials=5, s_values=(0.25, 0.5, 0.75), bound=0.01, smoothness=HELD_OUT_SMOOTHNESS,
                 **kwargs):
        super(MethodAgreementSuite, self).__init__(trials=trials, **kwargs)
        self._s_values = tuple(s_values)
        self._bound = bound
        self._smoothness = smoothness
        self._config.update(s_values=list(self._s_values), bound=bound, smoothness=smoothness)

    def sample(self, rng, index):
        return {'kind': 'held_out', 'rho': random_density(self.grid(1), _draw_seed(rng), self._smoothness)}

    def _relative_error(self, rho, s, offset):
        constant = calibrate_singular_constant(rho.grid, s, offset)
        exact = fisher_info(rho, KineticSpec(s=s)).value
        return abs(constant * singular_form(rho, s, offset) - exact) / exact

    def evaluate(self, inputs):
        rho = inputs['rho']
        gaps, extras = [], {}
        for s in self._s_values:
            err_2s = self._relative_error(rho, s, '2s')
            err_s = self._relative_error(rho, s, 's')
            gaps.append(self.gap('agreement_2s_s{}'.format(s), self._bound - err_2s))
            extras['relative_error_2s_s{}'.format(s)] = err_2s
            extras['relative_error_s_s{}'.format(s)] = err_s
        return inputs['kind'], gaps, extras

    def summarize(self, records):
        errors = [v for r in records if r.error is None
                  for k, v in r.extras.items() if k.startswith('relative_error_s_')]
        worst = max(errors, default=0.0)
        summary = TrialRecord(index=len(records), seed=self._master_seed, digest='', kind='ensemble',
                              extras={'worst_relative_error_s': worst, 'accepted_offset': '2s'})
        summary.gaps.append(self.gap('offset_s_rejected', worst - self._bound, strict=True))
        return [summary]


def run_suite(name, **config):
    """
    Build the registered suite name with config overriding its defaults, and run it

    :param name: (str) registered suite id
    :return: (SuiteReport)
    """
    return make(name, **config).run()
