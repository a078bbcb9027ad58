# Copyright (C) 2020 The fisher_kinetic developers
# This software may be modified and distributed under the terms of the
# LGPL-2.1+ license. See the accompanying LICENSE file for details.

import logging

from fisher_kinetic.registration import register, registry

__version__ = '0.1.0'

logging.getLogger(__name__).addHandler(logging.NullHandler())

register(
        id='superadd',
        entry_point='fisher_kinetic.theorems.suites:SuperadditivitySuite',
        kwargs={'trials': 100,
                'tolerance': 1e-9,
                'symbol': 'lattice',
                'structured_margin': 0.01},
)

register(
        id='monotone',
        entry_point='fisher_kinetic.theorems.suites:MonotonicitySuite',
        kwargs={'trials': 40,
                'tolerance': 1e-9,
                'symbol': 'lattice'},
)

register(
        id='affinity',
        entry_point='fisher_kinetic.theorems.suites:AffinitySuite',
        kwargs={'trials': 2,
                'tolerance': 1e-9,
                'n_max': 6,
                'm': 16,
                'symbol': 'lattice'},
)

register(
        id='diamagnetic',
        entry_point='fisher_kinetic.theorems.suites:DiamagneticSuite',
        kwargs={'trials': 1000,
                'tolerance': 1e-10},
)

register(
        id='convexity',
        entry_point='fisher_kinetic.theorems.suites:ConvexitySuite',
        kwargs={'trials': 1000,
                'tolerance': 1e-10},
)

register(
        id='split',
        entry_point='fisher_kinetic.theorems.suites:SplitSuite',
        kwargs={'trials': 20,
                'tolerance': 1e-9,
                'symbol': 'spectral'},
)

register(
        id='hoffmann',
        entry_point='fisher_kinetic.theorems.suites:HoffmannOstenhofSuite',
        kwargs={'trials': 20,
                'tolerance': 1e-9,
                'symbol': 'lattice',
                'identity_tolerance': 1e-10},
)

register(
        id='monomial',
        entry_point='fisher_kinetic.theorems.suites:MonomialSuite',
        kwargs={'trials': 20,
                'tolerance': 1e-10},
)

register(
        id='bbm',
        entry_point='fisher_kinetic.theorems.suites:BBMSuite',
        kwargs={'trials': 6,
                'tolerance': 1e-9,
                'continuity_bound': 0.02,
                'limit_bound': 0.05},
)

register(
        id='method-agreement',
        entry_point='fisher_kinetic.theorems.suites:MethodAgreementSuite',
        kwargs={'trials': 5,
                'tolerance': 1e-9,
                's_values': (0.25, 0.5, 0.75),
                'bound': 0.01},
)


# --------------------------- #
def get_suite_ids():
    return registry.ids()
