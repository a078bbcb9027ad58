# Copyright (C) 2020 The fisher_kinetic developers
# This software may be modified and distributed under the terms of the
# LGPL-2.1+ license. See the accompanying LICENSE file for details.

"""Exception hierarchy.

Messages follow the ``"function_name(): what went wrong"`` convention. The CLI maps
each family onto one exit code (see ``fisher_kinetic.cli``).
"""


class FisherKineticError(Exception):
    """Base class of every error raised by the package."""


class GridError(FisherKineticError, ValueError):
    """Invalid grid parameters or out-of-range particle counts."""


class DensityError(FisherKineticError, ValueError):
    """A Density, WaveFunction or DensityMatrix invariant is broken."""


class SpecError(FisherKineticError, ValueError):
    """Invalid functional parameters (order s, method, cutoff, exponent offset)."""


class DensityFormatError(FisherKineticError, ValueError):
    """A density file header or payload cannot be parsed."""


class BudgetError(FisherKineticError, MemoryError):
    """An allocation would exceed the configured memory cap."""


class ConfigError(FisherKineticError, ValueError):
    """Invalid run configuration."""


class UnknownSuiteError(FisherKineticError, KeyError):
    """No suite is registered under the requested id."""
