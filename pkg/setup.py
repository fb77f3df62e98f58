#!/usr/bin/env python
# -*- coding: utf-8 -*-

import os
from setuptools import setup, find_packages

def read(fname):
    return open(os.path.join(os.path.dirname(__file__), fname)).read()

__version__ = "0.1.0"

packages = find_packages(exclude=("PSpinOpt.testing", "PSpinOpt.testing.*"))
setup(name = 'PSpinOpt',
      version = __version__,
      author = read('AUTHORS.txt'),
      description = ("Ground states, Hessian spectra and interpolation bounds of spherical mixed p-spin glasses"),
      license = "BSD 3-clause",
      keywords = "spin-glasses parisi-formula random-matrices optimization",
      packages = packages,
      package_dir = {'PSpinOpt': 'PSpinOpt'},
      include_package_data = True,
      long_description = read('README.md'),
      install_requires = ['numpy>=1.17', 'scipy>=1.6', 'six>=1.10.0'],
      extras_require = {'plots':['matplotlib >=1.5.3'], 'tests':['mock>=2.0.0', 'matplotlib >=1.5.3']},
      classifiers=['License :: OSI Approved :: BSD License',
                   'Natural Language :: English',
                   'Operating System :: MacOS :: MacOS X',
                   'Operating System :: Microsoft :: Windows',
                   'Operating System :: POSIX :: Linux',
                   'Programming Language :: Python :: 3',
                   'Topic :: Scientific/Engineering :: Physics'],
      scripts=['pspinopt.py'],
     )
