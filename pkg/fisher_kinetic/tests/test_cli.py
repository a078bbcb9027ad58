import io
import json

import numpy as np
import pandas as pd
import pytest

from fisher_kinetic.cli import (
    EXIT_BUDGET, EXIT_CONFIG, EXIT_FORMAT, EXIT_OK, RunConfig, main, parser_args, run,
)
from fisher_kinetic.densities import gaussian_density, product_density, save_density
from fisher_kinetic.errors import ConfigError
from fisher_kinetic.kinetic import gaussian_fisher_torus_series
from fisher_kinetic.kinetic.scans import DEFAULT_S_VALUES


def invoke(*argv):
    stdout = io.StringIO()
    code = run(parser_args(list(argv)), stdout=stdout)
    return code, stdout.getvalue()


def test_compute_gaussian():
    code, out = invoke('compute', '--builder', 'gaussian', '--m', '64', '--period', '16', '--s', '1')
    assert code == EXIT_OK
    result = json.loads(out)
    assert result['value'] == pytest.approx(0.25, rel=1e-6)
    assert result['functional'] == 'fisher'
    assert result['grid'] == {'d': 1, 'n_particles': 1, 'm': 64, 'period': 16.0}
    assert result['wall_time'] >= 0.0


def test_compute_is_deterministic():
    argv = ('compute', '--builder', 'random', '--particles', '2', '--m', '16', '--s', '0.5', '--seed', '3')
    first = json.loads(invoke(*argv)[1])
    second = json.loads(invoke(*argv)[1])
    assert first['value'] == second['value']
    assert first['per_axis'] == second['per_axis']


def test_compute_uniform_is_zero():
    code, out = invoke('compute', '--builder', 'uniform', '--particles', '2', '--m', '16')
    assert code == EXIT_OK
    assert json.loads(out)['value'] == pytest.approx(0.0, abs=1e-20)


def test_compute_salem():
    code, out = invoke('compute', '--functional', 'salem', '--s', '0.5', '--m', '32')
    assert code == EXIT_OK
    result = json.loads(out)
    assert result['functional'] == 'salem'
    assert result['value'] > 0.0


def test_compute_gradient_needs_s_one():
    code, out = invoke('compute', '--method', 'gradient', '--s', '0.5')
    assert code == EXIT_CONFIG
    assert out == ''


@pytest.mark.parametrize("argv",
                         (('compute', '--m', '1'),
                          ('compute', '--d', '0'),
                          ('compute', '--s', '1.5'),
                          ('compute', '--gamma', '0.5'),
                          ('compute', '--mean', '1,2'),
                          ('compute', '--functional', 'salem'),
                          ('calibrate', '--s', '1')))
def test_invalid_configuration(argv):
    assert invoke(*argv)[0] == EXIT_CONFIG


def test_compute_from_file(tmp_path, grid_1p):
    mu = product_density(gaussian_density(grid_1p, [8.0], 1.0), 2)
    save_density(mu, tmp_path / 'pair')
    code, out = invoke('compute', '--in', str(tmp_path / 'pair'))
    assert code == EXIT_OK
    result = json.loads(out)
    assert result['value'] == pytest.approx(0.5, rel=1e-6)
    assert result['grid']['n_particles'] == 2


def test_corrupted_file(tmp_path, gaussian):
    save_density(gaussian, tmp_path / 'g')
    payload = tmp_path / 'g.fkd'
    payload.write_bytes(payload.read_bytes()[:-16])
    assert invoke('compute', '--in', str(tmp_path / 'g'))[0] == EXIT_FORMAT
    assert invoke('verify', '--in', str(tmp_path / 'g'), '--trials', '0',
                  '--out', str(tmp_path / 'reports'))[0] == EXIT_FORMAT


def test_memory_cap():
    code, out = invoke('compute', '--particles', '4', '--m', '64', '--mem-cap-bytes', '1000')
    assert code == EXIT_BUDGET
    assert out == ''


def test_verify_writes_every_report(tmp_path):
    out_dir = tmp_path / 'reports'
    code, out = invoke('verify', '--trials', '0', '--out', str(out_dir))
    assert code == EXIT_OK
    summary = json.loads(out)
    assert summary['passed'] is True
    assert len(summary['suites']) == 10
    for suite_id in summary['suites']:
        assert (out_dir / '{}.json'.format(suite_id)).exists()
        assert (out_dir / '{}.csv'.format(suite_id)).exists()


def test_verify_selected_suite(tmp_path):
    code, out = invoke('verify', '--suites', 'split', '--trials', '2', '--out', str(tmp_path))
    assert code == EXIT_OK
    summary = json.loads(out)
    assert list(summary['suites']) == ['split']
    report = json.loads((tmp_path / 'split.json').read_text())
    assert report['trials'] == 2
    assert report['passed'] is True


def test_verify_unknown_suite(tmp_path):
    code, _ = invoke('verify', '--suites', 'split,nope', '--trials', '0', '--out', str(tmp_path))
    assert code == EXIT_CONFIG
    assert not (tmp_path / 'split.json').exists()


def test_bbm_scan_table():
    code, out = invoke('scan', '--scan-type', 'bbm', '--m', '64')
    assert code == EXIT_OK
    table = pd.read_csv(io.StringIO(out))
    assert list(table.columns) == ['s', 'spectral', 'scaled_singular']
    np.testing.assert_allclose(table['s'], DEFAULT_S_VALUES)
    oracle = [gaussian_fisher_torus_series(1, 1.0, s, 16.0) for s in DEFAULT_S_VALUES]
    np.testing.assert_allclose(table['spectral'], oracle, rtol=1e-6)


def test_bbm_scan_uniform_density():
    code, out = invoke('scan', '--builder', 'uniform', '--m', '32', '--s-values', '0.5,0.75')
    assert code == EXIT_OK
    table = pd.read_csv(io.StringIO(out))
    np.testing.assert_allclose(table[['spectral', 'scaled_singular']].to_numpy(), 0.0, atol=1e-20)


def test_mean_info_scan_of_a_single_atom():
    code, out = invoke('scan', '--scan-type', 'mean-info', '--builder', 'gaussian', '--m', '16', '--n-max', '3',
                       '--s', '0.5')
    assert code == EXIT_OK
    table = pd.read_csv(io.StringIO(out))
    assert list(table.columns) == ['n', 'g_n', 'affine', 'defect']
    assert list(table['n']) == [1, 2, 3]
    np.testing.assert_allclose(table['defect'], 0.0, atol=1e-10 * table['affine'].iloc[0])


def test_mean_entropy_scan_of_a_mixture():
    code, out = invoke('scan', '--scan-type', 'mean-entropy', '--builder', 'mixture', '--m', '16', '--n-max', '3')
    assert code == EXIT_OK
    table = pd.read_csv(io.StringIO(out))
    assert list(table.columns) == ['n', 'entropy_n', 'affine', 'defect']
    for n, defect in zip(table['n'], table['defect']):
        assert -np.log(2.0) / n - 1e-10 <= defect <= 1e-10


def test_mean_scan_rejects_the_product_builder():
    assert invoke('scan', '--scan-type', 'mean-info', '--builder', 'product', '--m', '16')[0] == EXIT_CONFIG


def test_calibrate_uses_the_cache(tmp_path):
    cache = tmp_path / 'cache.json'
    code, out = invoke('calibrate', '--s', '0.5', '--out', str(cache))
    assert code == EXIT_OK
    first = json.loads(out)
    assert first['C'] > 0.0
    assert first['held_out_relative_error'] < 0.01
    assert len(json.loads(cache.read_text())) == 1
    second = json.loads(invoke('calibrate', '--s', '0.5', '--out', str(cache))[1])
    assert second == first
    invoke('calibrate', '--s', '0.25', '--out', str(cache))
    assert len(json.loads(cache.read_text())) == 2


def test_flags_override_the_config_file(tmp_path):
    config = tmp_path / 'run.yaml'
    config.write_text('s: 0.5\nm: 32\nbuilder: uniform\n')
    code, out = invoke('compute', '--config', str(config), '--s', '1')
    assert code == EXIT_OK
    result = json.loads(out)
    assert result['s'] == 1.0
    assert result['grid']['m'] == 32


@pytest.mark.parametrize("text", ('mesh: 32\n', 'm: sixty\n', '- 1\n- 2\n', 'mean: 3.0\n', 's_values: 0.5\n',
                                  'suites: split\n'))
def test_bad_config_file(tmp_path, text):
    config = tmp_path / 'run.yaml'
    config.write_text(text)
    assert invoke('compute', '--config', str(config))[0] == EXIT_CONFIG


def test_missing_config_file(tmp_path):
    assert invoke('compute', '--config', str(tmp_path / 'absent.json'))[0] == EXIT_CONFIG


def test_run_config_validation():
    config = RunConfig.from_sources({'command': 'scan', 's_values': (0.5, 0.9)})
    assert config.s_values == (0.5, 0.9)
    with pytest.raises(ConfigError):
        RunConfig.from_sources({'command': 'scan', 'workers': 0})
    with pytest.raises(ConfigError):
        RunConfig.from_sources({'command': 'scan'}, {'speed': 1})
    with pytest.raises(ConfigError):
        RunConfig.from_sources({'command': 'compute'}, {'mean': 3.0})


def test_scalar_mean_in_a_json_config(tmp_path):
    config = tmp_path / 'run.json'
    config.write_text(json.dumps({'mean': 3.0}))
    code, out = invoke('compute', '--config', str(config))
    assert code == EXIT_CONFIG
    assert out == ''


def test_main_prints_to_stdout(capsys):
    assert main(['compute', '--builder', 'uniform', '--m', '16']) == EXIT_OK
    assert json.loads(capsys.readouterr().out)['value'] == pytest.approx(0.0, abs=1e-20)
