#!/usr/bin/env python

"""A single file that holds all tribuilding relative-path info"""


import os


class FixturePaths(object):
    """A class that encompasses all the paths inside a fixture root"""

    def __init__(self, root):
        """Create a fixture paths object.
           Accepts only one argument
                - 'root'   - specify the path to the root directory
        """
        self.root = _normalize_path(root)

    def abspath(self, *segments):
        """Joins the path segments with the fixture root path"""
        return os.path.normpath(os.path.join(self.root, *segments))

    def root_path(self):
        """Return the path to the fixture root"""
        return self.root

    def dir_presentations(self):
        """Directory of stored triangle presentations"""
        return self.abspath('presentations')

    def dir_windows(self):
        """Directory of stored apartment windows"""
        return self.abspath('windows')

    def presentation_file(self, q, digest):
        """Where a presentation with the given order and hash lives"""
        return os.path.join(self.dir_presentations(),
                            'q%d-%s.tri' % (q, digest[:12]))

    def window_file(self, digest, m):
        """Where a constructed window for presentation `digest' lives"""
        return os.path.join(self.dir_windows(),
                            '%s-m%d.json' % (digest[:12], m))

    def fixture_list(self):
        """The name:path index of known presentations"""
        return self.abspath('fixtures.list')


def _normalize_path(path):
    """Expand ~ and make absolute"""
    return os.path.abspath(os.path.expanduser(path))
