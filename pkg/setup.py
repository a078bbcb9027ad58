# Copyright (C) 2020 The fisher_kinetic developers
# This software may be modified and distributed under the terms of the
# LGPL-2.1+ license. See the accompanying LICENSE file for details.

import os
from setuptools import setup, find_packages

setup_py_dir = os.path.dirname(os.path.realpath(__file__))
need_files = []
datadir = "fisher_kinetic"

hh = setup_py_dir + "/" + datadir

for root, dirs, files in os.walk(hh):
    for fn in files:
        ext = os.path.splitext(fn)[1][1:]
        if ext and ext in 'json yaml'.split():
            fn = root + "/" + fn
            need_files.append(fn[1 + len(hh):])

setup(
    name='fisher_kinetic',
    version='0.1.0',
    description="Fisher Kinetic: fractional Fisher information of many-particle densities on periodic grids, "
                "with seeded property suites for superadditivity and affinity",
    license="LGPL",
    python_requires='>=3.8',
    install_requires=['numpy>=1.21,<2', 'scipy>=1.7', 'gym==0.26.2', 'pandas>=1.3',
                      'ruamel.yaml>=0.17', 'termcolor>=1.1'],
    extras_require={'test': ['pytest>=7', 'hypothesis>=6']},
    package_dir={'': '.'},
    packages=find_packages(),
    package_data={'fisher_kinetic': need_files},
    entry_points={'console_scripts': ['fisher-kinetic=fisher_kinetic.cli:main']},
)
