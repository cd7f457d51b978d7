#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Run configuration: every option a tribuilding command consumes"""

import os

from .confdefaults import Config
from .confdefaults import ConfigWithDefaults


DEFAULT_RUN_CONFIG = '/etc/tribuilding/run.config'
SECTION = 'tribuilding'
BUDGET_PREFIX = 'budget '

FORMATS = ('json', 'gml', 'plain')


class RunConfig(Config):
    """Options of a run, read from an optional INI file and overridden
    by command line values through set_override()"""

    def __init__(self, config_file_=None, config=None):
        if config_file_ is None and config is None and \
                os.path.exists(DEFAULT_RUN_CONFIG):
            config_file_ = DEFAULT_RUN_CONFIG
        Config.__init__(self, config_file_, config)
        self.overrides = {}

    def set_override(self, option, value):
        """Command line values win over the file; None means unset"""
        if value is not None:
            self.overrides[option.lower()] = value

    def _get(self, option, default):
        if option.lower() in self.overrides:
            return self.overrides[option.lower()]
        return self.get(SECTION, option, default)

    def budgets(self):
        """Per-order budget sections ([budget DEFAULT], [budget 3], ...)"""
        return ConfigWithDefaults(self, BUDGET_PREFIX)

    def q(self):
        """Order of the projective plane"""
        return int(self._get('q', 2))

    def lambda_spec(self):
        """Point-line correspondence: 'standard', 'cyclic:<b>' or 'file:<path>'"""
        return str(self._get('lambda', 'standard'))

    def presentation(self):
        """Path (or fixture name) of the presentation file, None to search"""
        value = self._get('presentation', '')
        return value or None

    def radius(self):
        """Radius of the building ball"""
        return int(self._get('radius', 3))

    def seed(self):
        """Seed of every randomized choice"""
        return int(self._get('seed', 1))

    def output_format(self):
        """One of FORMATS"""
        fmt = str(self._get('format', 'json'))
        if fmt not in FORMATS:
            raise ValueError('Unknown output format %s' % repr(fmt))
        return fmt

    def threads(self):
        """Upper bound on worker threads; 1 keeps runs single threaded"""
        return max(1, int(self._get('threads', 1)))

    def fixture_root(self):
        """Directory holding stored presentation fixtures"""
        return os.path.expanduser(str(self._get('FixtureRoot', '~/.tribuilding')))

    def max_nodes(self):
        """Search node budget for the presentation search at this q"""
        if 'maxnodes' in self.overrides:
            return int(self.overrides['maxnodes'])
        return int(self.budgets().get(str(self.q()), 'MaxNodes', 2000000))

    def rewrite_budget(self):
        """Step budget of a single word normalization"""
        if 'rewritebudget' in self.overrides:
            return int(self.overrides['rewritebudget'])
        return int(self.budgets().get(str(self.q()), 'RewriteBudget', 100000))

    def stages(self):
        """Number of boundary map stages checked by verify-all"""
        return int(self._get('stages', 3))

    def lambda_pinned(self):
        """True when lambda was set explicitly; otherwise searches scan
        the whole correspondence family"""
        return 'lambda' in self.overrides or \
            self.config.has_option(SECTION, 'lambda')
