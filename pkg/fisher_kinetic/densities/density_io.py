# Copyright (C) 2020 The fisher_kinetic developers
# This software may be modified and distributed under the terms of the
# LGPL-2.1+ license. See the accompanying LICENSE file for details.

"""Density file format.

A density is stored as two files sharing a basename: ``<basename>.fkh``, a JSON header with the
fields ``d``, ``n_particles``, ``m``, ``period``, ``dtype`` (always ``"f64"``) and ``order``
(always ``"row-major"``), and ``<basename>.fkd``, the raw little-endian float64 payload in
particle-major axis order.
"""

import json
import logging
from pathlib import Path

import numpy as np

from fisher_kinetic.densities.density import Density
from fisher_kinetic.densities.grid import GridSpec
from fisher_kinetic.errors import DensityError, DensityFormatError, GridError

logger = logging.getLogger(__name__)

HEADER_SUFFIX = '.fkh'
PAYLOAD_SUFFIX = '.fkd'
HEADER_FIELDS = ('d', 'n_particles', 'm', 'period', 'dtype', 'order')
PAYLOAD_DTYPE = np.dtype('<f8')


def _paths(basename):
    base = Path(basename)
    if base.suffix in (HEADER_SUFFIX, PAYLOAD_SUFFIX):
        base = base.with_suffix('')
    return base.with_name(base.name + HEADER_SUFFIX), base.with_name(base.name + PAYLOAD_SUFFIX)


def save_density(mu: Density, basename):
    header_path, payload_path = _paths(basename)
    header = dict(mu.grid.to_dict(), dtype='f64', order='row-major')
    header_path.write_text(json.dumps(header, indent=2))
    mu.values.astype(PAYLOAD_DTYPE).tofile(str(payload_path))
    logger.debug("save_density(): wrote %s", header_path)
    return header_path, payload_path


def _parse_header(header_path: Path):
    try:
        header = json.loads(header_path.read_text())
    except (OSError, ValueError) as err:
        raise DensityFormatError("load_density(): cannot read header {}: {}".format(header_path, err))
    if not isinstance(header, dict):
        raise DensityFormatError("load_density(): header must be a JSON object")
    missing = [f for f in HEADER_FIELDS if f not in header]
    if missing:
        raise DensityFormatError("load_density(): header misses fields {}".format(missing))
    if header['dtype'] != 'f64':
        raise DensityFormatError("load_density(): unsupported dtype {!r}".format(header['dtype']))
    if header['order'] != 'row-major':
        raise DensityFormatError("load_density(): unsupported order {!r}".format(header['order']))
    for field in ('d', 'n_particles', 'm'):
        if not isinstance(header[field], int) or isinstance(header[field], bool):
            raise DensityFormatError("load_density(): field {!r} must be an integer".format(field))
    if not isinstance(header['period'], (int, float)) or isinstance(header['period'], bool):
        raise DensityFormatError("load_density(): field 'period' must be a number")
    try:
        return GridSpec(header['d'], header['n_particles'], header['m'], header['period'])
    except GridError as err:
        raise DensityFormatError("load_density(): invalid grid in header: {}".format(err))


def load_density(basename):
    """
    Read a density and validate header, payload length and every Density invariant

    :param basename: (str or Path) path without extension (a .fkh/.fkd suffix is stripped)
    :return: (Density)
    """
    header_path, payload_path = _paths(basename)
    grid = _parse_header(header_path)
    try:
        raw = payload_path.read_bytes()
    except OSError as err:
        raise DensityFormatError("load_density(): cannot read payload {}: {}".format(payload_path, err))
    expected = grid.size * PAYLOAD_DTYPE.itemsize
    if len(raw) != expected:
        raise DensityFormatError("load_density(): payload has {} bytes, header implies {}".format(
            len(raw), expected))
    values = np.frombuffer(raw, dtype=PAYLOAD_DTYPE).astype(np.float64).reshape(grid.shape)
    try:
        return Density(grid, values)
    except DensityError as err:
        raise DensityFormatError("load_density(): payload is not a valid density: {}".format(err))
