#!/usr/bin/env python

"""A module to interact with the list of named presentation fixtures"""

import os

from . import dirlocking


class FixtureList(object):
    """Maps short names (e.g. 'q2') to presentation files.

    The file holds one `name:path' entry per line; relative paths are
    taken relative to the list file.
    """
    def __init__(self, list_file):
        self.list_file = list_file
        fixtures = {}
        if os.path.exists(list_file):
            with open(list_file) as handle:
                for line in handle:
                    fields = line.split(':', 1)
                    if len(fields) == 2 and fields[0].strip():
                        fixtures[fields[0].strip()] = fields[1].strip()
        self.fixtures = fixtures

    def names(self):
        """Returns the sorted names of all fixtures"""
        return sorted(self.fixtures)

    def resolve(self, name_or_path):
        """Returns the file behind a fixture name; paths pass through"""
        if name_or_path in self.fixtures:
            path = self.fixtures[name_or_path]
            if not os.path.isabs(path):
                path = os.path.join(os.path.dirname(self.list_file), path)
            return path
        return name_or_path

    def register(self, name, path):
        """Adds or replaces an entry and rewrites the list file"""
        self.fixtures[name] = path
        lines = ['%s:%s\n' % (key, self.fixtures[key]) for key in self.names()]
        dirlocking.write_locked(self.list_file, ''.join(lines))
