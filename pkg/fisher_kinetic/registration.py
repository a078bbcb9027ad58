# Copyright (C) 2020 The fisher_kinetic developers
# This software may be modified and distributed under the terms of the
# LGPL-2.1+ license. See the accompanying LICENSE file for details.

"""Suite registry: ids mapped to 'module:Class' entry points with default constructor kwargs."""

import logging

from gym.envs.registration import load

from fisher_kinetic.errors import FisherKineticError, UnknownSuiteError

logger = logging.getLogger(__name__)


class SuiteSpec(object):
    """
    Registry entry for a particular suite instance

    Args:
        id (str): the suite id, e.g. 'superadd'
        entry_point (str): python entrypoint of the suite class, 'module:Class'
        kwargs (dict): default kwargs passed to the suite constructor
    """

    def __init__(self, id, entry_point, kwargs=None):
        self.id = id
        self.entry_point = entry_point
        self._kwargs = {} if kwargs is None else dict(kwargs)

    @property
    def kwargs(self):
        return dict(self._kwargs)

    def make(self, **kwargs):
        merged = self.kwargs
        merged.update(kwargs)
        cls = load(self.entry_point)
        suite = cls(**merged)
        suite.spec = self
        suite.name = self.id
        return suite

    def __repr__(self):
        return "SuiteSpec({})".format(self.id)


class SuiteRegistry(object):

    def __init__(self):
        self.suite_specs = {}

    def make(self, id, **kwargs):
        logger.debug("make(): building suite %s", id)
        return self.spec(id).make(**kwargs)

    def all(self):
        return self.suite_specs.values()

    def ids(self):
        return list(self.suite_specs.keys())

    def spec(self, id):
        try:
            return self.suite_specs[id]
        except KeyError:
            raise UnknownSuiteError("spec(): no suite registered with id {!r}, known: {}".format(
                id, ", ".join(self.suite_specs)))

    def register(self, id, **kwargs):
        if id in self.suite_specs:
            raise FisherKineticError("register(): cannot re-register id {!r}".format(id))
        self.suite_specs[id] = SuiteSpec(id, **kwargs)


registry = SuiteRegistry()


def register(id, **kwargs):
    return registry.register(id, **kwargs)


def make(id, **kwargs):
    return registry.make(id, **kwargs)


def spec(id):
    return registry.spec(id)
