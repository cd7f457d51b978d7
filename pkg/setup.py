#!/usr/bin/env python
"""The setuptools setup script.

To install tribuilding run
    $ ./setup.py install --home=~
which installs tribuilding to ~/lib/python.

Probably, you'll need to setup PYTHONPATH for python
to see your library
    $ export PYTHONPATH=~/lib/python/

You can run tests using
    $ ./tests/run-all.sh

"""

from setuptools import setup

setup(name = 'tribuilding',
      version = '0.1',
      description = 'Triangle presentations, their buildings and boundary measures',
      license = 'MIT',
      platforms = 'Linux',
      packages = ['tribuilding'],
      package_dir = {'tribuilding': 'tribuilding'},
      scripts = ['bin/tribuilding'],
      install_requires = ['numpy', 'networkx'],
      extras_require = {'json': ['simplejson']},
      data_files = [('/etc/tribuilding/', ['etc/tribuilding/run.config'])])
