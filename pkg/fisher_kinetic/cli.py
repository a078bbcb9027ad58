# Copyright (C) 2020 The fisher_kinetic developers
# This software may be modified and distributed under the terms of the
# LGPL-2.1+ license. See the accompanying LICENSE file for details.

"""
fisher-kinetic command line

    fisher-kinetic compute   --builder gaussian --m 64 --period 16 --s 1
    fisher-kinetic verify    [--suites superadd,bbm] [--trials T] [--out DIR]
    fisher-kinetic scan      --scan-type {bbm,mean-info,mean-entropy}
    fisher-kinetic calibrate --s 0.5 [--exponent-offset 2s]

Standard output carries the JSON (compute, verify, calibrate) or CSV (scan) payload only.
Exit codes: 0 success, 1 suite failure, 2 invalid configuration, 3 density file format, 4 memory cap.
"""

import argparse
import json
import logging
import os
import sys
import time
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Optional, Tuple

import pandas as pd
from ruamel.yaml import YAML
from ruamel.yaml.error import YAMLError
from termcolor import colored

import fisher_kinetic
from fisher_kinetic import config_data
from fisher_kinetic.densities.density import (
    MixingMeasure, affine_entropy, gaussian_density, gaussian_mixture, mean_entropy_sequence,
    mixture_product_density, product_density, random_density, uniform_density,
)
from fisher_kinetic.densities.density_io import load_density
from fisher_kinetic.densities.grid import GridSpec, check_budget
from fisher_kinetic.errors import (
    BudgetError, ConfigError, DensityError, DensityFormatError, GridError, SpecError, UnknownSuiteError,
)
from fisher_kinetic.kinetic.fisher import fisher_info
from fisher_kinetic.kinetic.fourier import EXPONENT_OFFSETS, METHODS, SYMBOLS, KineticSpec
from fisher_kinetic.kinetic.scans import DEFAULT_S_VALUES, bbm_scan
from fisher_kinetic.kinetic.singular import calibration_record, salem_variant_info
from fisher_kinetic.theorems.gaps import affine_value, mean_info_sequence
from fisher_kinetic.theorems.suites import run_suite

logger = logging.getLogger(__name__)

COMMANDS = ('compute', 'verify', 'scan', 'calibrate')
BUILDERS = ('gaussian', 'uniform', 'product', 'mixture', 'random')
FUNCTIONALS = ('fisher', 'salem')
SCAN_TYPES = ('bbm', 'mean-info', 'mean-entropy')
CALIBRATION_CACHE = 'fk_calibration_cache.json'
DEFAULT_REPORT_DIR = 'fk_reports'
VERIFY_DEFAULT_CONFIG = 'verify_default.json'

EXIT_OK = 0
EXIT_SUITE_FAILURE = 1
EXIT_CONFIG = 2
EXIT_FORMAT = 3
EXIT_BUDGET = 4


@dataclass
class RunConfig:
    """
    Fully resolved command configuration. Precedence: flags > config file > field defaults.
    """
    command: str = 'compute'
    d: int = 1
    particles: int = 1
    m: int = 64
    period: float = 16.0
    s: float = 1.0
    method: str = 'spectral'
    symbol: str = 'spectral'
    gamma: Optional[float] = None
    exponent_offset: str = '2s'
    functional: str = 'fisher'
    builder: str = 'gaussian'
    mean: Optional[Tuple[float, ...]] = None
    sigma2: float = 1.0
    n_atoms: int = 2
    seed: int = 0
    trials: Optional[int] = None
    n_max: int = 4
    s_values: Optional[Tuple[float, ...]] = None
    scan_type: str = 'bbm'
    suites: Optional[Tuple[str, ...]] = None
    input: Optional[str] = None
    out: Optional[str] = None
    config: Optional[str] = None
    mem_cap_bytes: Optional[int] = None
    workers: int = 1
    verbose: bool = False

    @classmethod
    def from_sources(cls, flags: dict, file_values: dict = None):
        known = {f.name for f in fields(cls)}
        merged = {}
        for source, values in (('config file', file_values or {}), ('command line', flags)):
            for key, value in values.items():
                key = key.replace('-', '_')
                if key not in known:
                    raise ConfigError("RunConfig(): unknown field {!r} in {}".format(key, source))
                merged[key] = value
        config = cls(**merged)
        config.validate()
        return config

    def validate(self):
        """Check every field before anything is allocated; raises ConfigError naming the field."""
        def need(ok, name, what):
            if not ok:
                raise ConfigError("RunConfig(): {} {}, got {!r}".format(name, what, getattr(self, name)))

        def is_int(value):
            return isinstance(value, int) and not isinstance(value, bool)

        def is_real(value):
            return isinstance(value, (int, float)) and not isinstance(value, bool)

        def is_seq(value):
            return isinstance(value, (list, tuple))

        need(self.command in COMMANDS, 'command', 'must be one of {}'.format(COMMANDS))
        need(is_int(self.d) and self.d >= 1, 'd', 'must be a positive integer')
        need(is_int(self.particles) and self.particles >= 1, 'particles', 'must be a positive integer')
        need(is_int(self.m) and self.m >= 2, 'm', 'must be an integer >= 2')
        need(is_real(self.period) and self.period > 0.0, 'period', 'must be positive')
        need(is_real(self.s) and 0.0 < self.s <= 1.0, 's', 'must lie in (0, 1]')
        need(self.method in METHODS, 'method', 'must be one of {}'.format(METHODS))
        need(self.symbol in SYMBOLS, 'symbol', 'must be one of {}'.format(SYMBOLS))
        need(self.gamma is None or (is_real(self.gamma) and self.gamma < 0.0), 'gamma', 'must be negative')
        need(self.exponent_offset in EXPONENT_OFFSETS, 'exponent_offset', 'must be one of {}'.format(EXPONENT_OFFSETS))
        need(self.functional in FUNCTIONALS, 'functional', 'must be one of {}'.format(FUNCTIONALS))
        need(self.builder in BUILDERS, 'builder', 'must be one of {}'.format(BUILDERS))
        need(self.mean is None or (is_seq(self.mean) and len(self.mean) == self.d
                                   and all(is_real(v) for v in self.mean)),
             'mean', 'must hold d reals')
        need(is_real(self.sigma2) and self.sigma2 > 0.0, 'sigma2', 'must be positive')
        need(is_int(self.n_atoms) and self.n_atoms >= 1, 'n_atoms', 'must be a positive integer')
        need(is_int(self.seed) and self.seed >= 0, 'seed', 'must be a nonnegative integer')
        need(self.trials is None or (is_int(self.trials) and self.trials >= 0), 'trials',
             'must be a nonnegative integer')
        need(is_int(self.n_max) and self.n_max >= 1, 'n_max', 'must be a positive integer')
        need(self.s_values is None or (is_seq(self.s_values) and len(self.s_values) > 0
                                       and all(is_real(v) and 0.0 < v < 1.0 for v in self.s_values)),
             's_values', 'must be reals in (0, 1)')
        need(self.scan_type in SCAN_TYPES, 'scan_type', 'must be one of {}'.format(SCAN_TYPES))
        need(self.suites is None or (is_seq(self.suites) and all(isinstance(v, str) for v in self.suites)),
             'suites', 'must be suite ids')
        need(self.mem_cap_bytes is None or (is_int(self.mem_cap_bytes) and self.mem_cap_bytes > 0),
             'mem_cap_bytes', 'must be a positive integer')
        need(is_int(self.workers) and self.workers >= 1, 'workers', 'must be a positive integer')
        if self.command == 'calibrate':
            need(self.s < 1.0, 's', 'must be < 1 for calibrate')
        if self.command == 'compute' and self.functional == 'salem':
            need(self.s < 1.0, 's', 'must be < 1 for the salem functional')
        if self.command == 'compute':
            self.kinetic_spec()
        if self.input is None and self.command in ('compute', 'scan'):
            check_budget(self.grid().size, mem_cap_bytes=self.mem_cap_bytes, what='density')

    def grid(self):
        return GridSpec(self.d, self.particles, self.m, float(self.period))

    def kinetic_spec(self):
        return KineticSpec(s=float(self.s), gamma=self.gamma, method=self.method, symbol=self.symbol,
                           exponent_offset=self.exponent_offset)

    def to_dict(self):
        return asdict(self)


# --- inputs --- #

def read_config_file(path):
    """JSON or YAML mapping of RunConfig fields."""
    try:
        with open(path) as f:
            values = YAML(typ='safe').load(f)
    except (OSError, YAMLError) as err:
        raise ConfigError("read_config_file(): cannot read {}: {}".format(path, err))
    if values is None:
        return {}
    if not isinstance(values, dict):
        raise ConfigError("read_config_file(): {} must hold a mapping".format(path))
    for key in ('mean', 's_values', 'suites'):
        if isinstance(values.get(key), list):
            values[key] = tuple(values[key])
    return values


def load_input(path):
    try:
        return load_density(path)
    except DensityError as err:
        raise DensityFormatError(str(err))


def build_density(config: RunConfig):
    if config.input is not None:
        return load_input(config.input)
    grid = config.grid()
    grid_1p = grid.single_particle()
    cap = config.mem_cap_bytes
    L = grid.period
    if config.builder == 'uniform':
        return uniform_density(grid)
    if config.builder == 'random':
        return random_density(grid, config.seed)
    if config.builder == 'product':
        return product_density(random_density(grid_1p, config.seed), grid.n_particles, mem_cap_bytes=cap)
    if config.builder == 'mixture':
        return mixture_product_density(build_mixing_measure(config), grid.n_particles, mem_cap_bytes=cap)
    mean = [0.5 * L] * grid.d if config.mean is None else list(config.mean)
    rho = gaussian_density(grid_1p, mean, float(config.sigma2))
    return rho if grid.n_particles == 1 else product_density(rho, grid.n_particles, mem_cap_bytes=cap)


def build_mixing_measure(config: RunConfig):
    grid_1p = config.grid().single_particle()
    L = grid_1p.period
    if config.builder == 'mixture':
        centers = [[(i + 0.5) * L / config.n_atoms] * grid_1p.d for i in range(config.n_atoms)]
        return gaussian_mixture(grid_1p, centers, float(config.sigma2))
    if config.builder == 'gaussian':
        mean = [0.5 * L] * grid_1p.d if config.mean is None else list(config.mean)
        return MixingMeasure.from_lists([1.0], [gaussian_density(grid_1p, mean, float(config.sigma2))])
    if config.builder == 'random':
        return MixingMeasure.from_lists([1.0], [random_density(grid_1p, config.seed)])
    if config.builder == 'uniform':
        return MixingMeasure.from_lists([1.0], [uniform_density(grid_1p)])
    raise ConfigError("build_mixing_measure(): builder {!r} does not define a mixing measure".format(config.builder))


# --- commands --- #

def cmd_compute(config: RunConfig, stdout):
    spec = config.kinetic_spec()
    mu = build_density(config)
    start = time.perf_counter()
    if config.functional == 'salem':
        value = salem_variant_info(mu, spec.s, spec.exponent_offset)
        result = {'value': value, 's': spec.s, 'method': 'singular', 'functional': 'salem',
                  'grid': mu.grid.to_dict(), 'per_axis': [value / mu.n_particles] * mu.n_particles}
    else:
        result = fisher_info(mu, spec, workers=config.workers).to_dict()
        result['functional'] = 'fisher'
    result['wall_time'] = time.perf_counter() - start
    stdout.write(json.dumps(result, sort_keys=True) + '\n')
    return EXIT_OK


def cmd_verify(config: RunConfig, stdout):
    suite_ids = list(config.suites) if config.suites else fisher_kinetic.get_suite_ids()
    out_dir = Path(config.out or DEFAULT_REPORT_DIR)
    summary = {}
    if config.input is not None:
        mu = load_input(config.input)
        summary['input'] = {'path': str(config.input), 'grid': mu.grid.to_dict(), 'mass': mu.mass(),
                            'symmetry_defect': mu.symmetry_defect()}
    overrides = {'master_seed': config.seed, 'workers': config.workers, 'mem_cap_bytes': config.mem_cap_bytes}
    if config.trials is not None:
        overrides['trials'] = config.trials
    # resolve every id before running anything
    for suite_id in suite_ids:
        fisher_kinetic.registry.spec(suite_id)
    passed = True
    suites = {}
    for suite_id in suite_ids:
        report = run_suite(suite_id, **overrides)
        report.write(out_dir)
        suites[suite_id] = report.summary()
        passed = passed and report.passed
        if not report.passed:
            print(colored("verify: suite {} failed (min gap {})".format(suite_id, report.min_gap), 'red'),
                  file=sys.stderr)
    summary.update(passed=passed, reports=str(out_dir), suites=suites)
    stdout.write(json.dumps(summary, sort_keys=True) + '\n')
    return EXIT_OK if passed else EXIT_SUITE_FAILURE


def cmd_scan(config: RunConfig, stdout):
    """
    bbm:          s, spectral, scaled_singular
    mean-info:    n, g_n, affine, defect
    mean-entropy: n, entropy_n, affine, defect
    """
    if config.scan_type == 'bbm':
        mu = build_density(config)
        s_values = DEFAULT_S_VALUES if config.s_values is None else tuple(config.s_values)
        table = bbm_scan(mu, s_values, config.exponent_offset, workers=config.workers)
    else:
        P = build_mixing_measure(config)
        if config.scan_type == 'mean-info':
            spec = KineticSpec(s=float(config.s), symbol=config.symbol)
            rows = mean_info_sequence(P, spec, config.n_max, mem_cap_bytes=config.mem_cap_bytes,
                                      workers=config.workers)
            affine = affine_value(P, spec, workers=config.workers)
            table = pd.DataFrame(rows, columns=['n', 'g_n'])
        else:
            rows = mean_entropy_sequence(P, config.n_max, mem_cap_bytes=config.mem_cap_bytes)
            affine = affine_entropy(P)
            table = pd.DataFrame(rows, columns=['n', 'entropy_n'])
        table['affine'] = affine
        table['defect'] = affine - table.iloc[:, 1]
    table.to_csv(stdout, index=False)
    return EXIT_OK


def _read_cache(path: Path):
    if not path.exists():
        return {}
    try:
        return json.loads(path.read_text())
    except ValueError:
        logger.warning("cmd_calibrate(): ignoring unreadable cache %s", path)
        return {}


def cmd_calibrate(config: RunConfig, stdout):
    grid_1p = GridSpec(config.d, 1, config.m, float(config.period))
    cache_path = Path(config.out or CALIBRATION_CACHE)
    key = json.dumps({'grid': grid_1p.to_dict(), 's': float(config.s), 'exponent_offset': config.exponent_offset},
                     sort_keys=True)
    cache = _read_cache(cache_path)
    if key in cache:
        logger.info("cmd_calibrate(): cache hit in %s", cache_path)
        record = cache[key]
    else:
        record = calibration_record(grid_1p, float(config.s), config.exponent_offset)
        cache[key] = record
        cache_path.write_text(json.dumps(cache, indent=2, sort_keys=True))
    stdout.write(json.dumps(record, sort_keys=True) + '\n')
    return EXIT_OK


COMMAND_TABLE = {
    'compute': cmd_compute,
    'verify': cmd_verify,
    'scan': cmd_scan,
    'calibrate': cmd_calibrate,
}


# --- entry point --- #

def _floats(text):
    return tuple(float(v) for v in text.split(',') if v.strip())


def _names(text):
    return tuple(v.strip() for v in text.split(',') if v.strip())


def parser_args(argv=None):
    """
    parse the command line; only flags given explicitly appear in the result
    :return: (dict) the arguments
    """
    parser = argparse.ArgumentParser(prog='fisher-kinetic', description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter,
                                     argument_default=argparse.SUPPRESS)

    parser.add_argument('command', choices=COMMANDS, help='command to run')

    parser.add_argument('--d', type=int, help='space dimension, >= 1. Default: 1')
    parser.add_argument('--particles', type=int, help='number of particles N. Default: 1')
    parser.add_argument('--m', type=int, help='grid points per axis, >= 2. Default: 64')
    parser.add_argument('--period', type=float, help='torus side length L. Default: 16')

    parser.add_argument('--s', type=float, help='fractional order in (0, 1]. Default: 1')
    parser.add_argument('--method', choices=METHODS, help='evaluation method. Default: spectral')
    parser.add_argument('--symbol', choices=SYMBOLS, help='discrete multiplier. Default: spectral')
    parser.add_argument('--gamma', type=float, help='cutoff exponent (< 0) for the cutoff information')
    parser.add_argument('--exponent-offset', choices=EXPONENT_OFFSETS, dest='exponent_offset',
                        help='singular kernel exponent d + s or d + 2s. Default: 2s')
    parser.add_argument('--functional', choices=FUNCTIONALS, help='fisher or salem variant. Default: fisher')

    parser.add_argument('--builder', choices=BUILDERS, help='inline density builder. Default: gaussian')
    parser.add_argument('--mean', type=_floats, help='comma separated Gaussian mean. Default: L/2')
    parser.add_argument('--sigma2', type=float, help='Gaussian variance. Default: 1')
    parser.add_argument('--n-atoms', type=int, dest='n_atoms', help='atoms of the mixture builder. Default: 2')

    parser.add_argument('--seed', type=int, help='master seed. Default: 0')
    parser.add_argument('--trials', type=int, help='override the trial count of every suite')
    parser.add_argument('--n-max', type=int, dest='n_max', help='largest n of mean scans. Default: 4')
    parser.add_argument('--s-values', type=_floats, dest='s_values', help='comma separated orders of the bbm scan')
    parser.add_argument('--scan-type', choices=SCAN_TYPES, dest='scan_type', help='scan table. Default: bbm')
    parser.add_argument('--suites', type=_names, help='comma separated suite ids. Default: all')

    parser.add_argument('--in', dest='input', help='density basename (.fkh/.fkd)')
    parser.add_argument('--out', help='report directory (verify) or calibration cache file (calibrate)')
    parser.add_argument('--config', help='JSON or YAML file of defaults')
    parser.add_argument('--mem-cap-bytes', type=int, dest='mem_cap_bytes', help='memory cap. Default: 2 GiB')
    parser.add_argument('--workers', type=int, help='FFT and trial worker threads. Default: 1')
    parser.add_argument('--verbose', action='store_true', help='debug logging on standard error')

    args = parser.parse_args(argv)
    return vars(args)


def resolve_config(args: dict):
    args = dict(args)
    config_path = args.get('config')
    if config_path is None and args.get('command') == 'verify':
        config_path = os.path.join(config_data.get_data_path(), VERIFY_DEFAULT_CONFIG)
    file_values = read_config_file(config_path) if config_path is not None else {}
    file_values.pop('command', None)
    return RunConfig.from_sources(args, file_values)


def _fail(code, err):
    print(colored("fisher-kinetic: {}".format(err), 'red'), file=sys.stderr)
    return code


def run(args: dict, stdout=None):
    """Resolve the configuration, run the command and map exceptions to exit codes."""
    stdout = sys.stdout if stdout is None else stdout
    try:
        config = resolve_config(args)
        logging.getLogger('fisher_kinetic').setLevel(logging.DEBUG if config.verbose else logging.WARNING)
        return COMMAND_TABLE[config.command](config, stdout=stdout)
    except BudgetError as err:
        return _fail(EXIT_BUDGET, err)
    except DensityFormatError as err:
        return _fail(EXIT_FORMAT, err)
    except (ConfigError, GridError, SpecError, DensityError, UnknownSuiteError) as err:
        return _fail(EXIT_CONFIG, err)


def main(argv=None):
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter('%(levelname)s %(name)s: %(message)s'))
    logging.getLogger('fisher_kinetic').addHandler(handler)
    try:
        return run(parser_args(argv))
    finally:
        logging.getLogger('fisher_kinetic').removeHandler(handler)


if __name__ == '__main__':
    sys.exit(main())
