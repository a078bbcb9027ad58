# Copyright (C) 2020 The fisher_kinetic developers
# This software may be modified and distributed under the terms of the
# LGPL-2.1+ license. See the accompanying LICENSE file for details.

import hashlib
import json
import warnings

import numpy as np
from gym.utils import seeding


def torus_offsets(nodes: np.ndarray, center: float, period: float):
    # signed minimum-image displacement of every node from center, in [-L/2, L/2)
    return (nodes - center + 0.5 * period) % period - 0.5 * period


def clamp_nonnegative(value: float, name: str, tol: float = 1e-12):
    """
    Assert a functional value is nonnegative up to tol, then clamp it to 0

    :param value: (float)
    :param name: (str) quantity name used in the message
    :param tol: (float) absolute slack
    :return: (float)
    """
    if value < -tol:
        raise AssertionError("clamp_nonnegative(): {} is negative ({:.3e})".format(name, value))
    if value < 0.0:
        warnings.warn("clamp_nonnegative(): {} = {:.3e} clamped to 0".format(name, value))
        return 0.0
    return float(value)


def make_rng(seed=None):
    np_random, _ = seeding.np_random(seed)
    return np_random


def derive_seed(master_seed: int, index: int):
    """
    Per-trial seed derived from (master seed, trial index), independent of scheduling
    """
    return int(np.random.SeedSequence([int(master_seed), int(index)]).generate_state(1)[0])


def inputs_digest(*arrays, **params):
    h = hashlib.sha256()
    for arr in arrays:
        arr = np.ascontiguousarray(arr)
        h.update(str(arr.shape).encode())
        h.update(arr.tobytes())
    h.update(json.dumps(params, sort_keys=True, default=str).encode())
    return h.hexdigest()[:16]
