import json

import numpy as np
import pytest

from fisher_kinetic.densities import GridSpec, load_density, random_density, save_density
from fisher_kinetic.errors import DensityFormatError


@pytest.fixture
def stored(tmp_path):
    mu = random_density(GridSpec(d=1, n_particles=2, m=8, period=8.0), seed=3)
    base = tmp_path / 'mu'
    save_density(mu, base)
    return mu, base


def test_save_then_load_is_bit_identical(stored):
    mu, base = stored
    loaded = load_density(base)
    assert loaded.grid == mu.grid
    assert np.array_equal(loaded.values, mu.values)


def test_header_contents(stored):
    _, base = stored
    header = json.loads(base.with_name('mu.fkh').read_text())
    assert header == {'d': 1, 'n_particles': 2, 'm': 8, 'period': 8.0, 'dtype': 'f64', 'order': 'row-major'}


@pytest.mark.parametrize("suffix", ('.fkh', '.fkd'))
def test_suffix_is_stripped(stored, suffix):
    mu, base = stored
    loaded = load_density(str(base) + suffix)
    assert np.array_equal(loaded.values, mu.values)


def test_truncated_payload(stored):
    _, base = stored
    payload = base.with_name('mu.fkd')
    payload.write_bytes(payload.read_bytes()[:-8])
    with pytest.raises(DensityFormatError):
        load_density(base)


def test_missing_payload(stored):
    _, base = stored
    base.with_name('mu.fkd').unlink()
    with pytest.raises(DensityFormatError):
        load_density(base)


@pytest.mark.parametrize("field value".split(),
                         (('dtype', 'f32'),
                          ('order', 'column-major'),
                          ('m', 1),
                          ('m', '8'),
                          ('d', 0),
                          ('period', 'eight')))
def test_bad_header_field(stored, field, value):
    _, base = stored
    header_path = base.with_name('mu.fkh')
    header = json.loads(header_path.read_text())
    header[field] = value
    header_path.write_text(json.dumps(header))
    with pytest.raises(DensityFormatError):
        load_density(base)


def test_missing_header_field(stored):
    _, base = stored
    header_path = base.with_name('mu.fkh')
    header = json.loads(header_path.read_text())
    del header['period']
    header_path.write_text(json.dumps(header))
    with pytest.raises(DensityFormatError):
        load_density(base)


def test_header_is_not_json(stored):
    _, base = stored
    base.with_name('mu.fkh').write_text('d = 1')
    with pytest.raises(DensityFormatError):
        load_density(base)


def test_asymmetric_payload(stored):
    mu, base = stored
    values = mu.values.copy()
    values[0, 1] += 1e-3
    values[1, 0] -= 1e-3
    values.astype('<f8').tofile(str(base.with_name('mu.fkd')))
    with pytest.raises(DensityFormatError):
        load_density(base)
