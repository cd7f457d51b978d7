#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""INI file parsing with typed accessors and per-section defaults"""

import configparser
import os

LIST_SEPARATOR = ' '


class Config(object):
    """An object that encapsulates parsing of a tribuilding config file"""
    def __init__(self, config_file_=None, config=None):
        self.config_file = None
        if config is not None:
            # Copy the underlying RawConfigParser from the given instance
            self.config = config.config
            self.config_file = config.config_file
        else:
            self.config = configparser.RawConfigParser()
            if config_file_ is not None:
                self.config_file = config_file_
                with open(os.path.expanduser(config_file_)) as handle:
                    self.config.read_file(handle)

    def read_string(self, text):
        """Parse additional assignments from a string"""
        self.config.read_string(text)

    def get(self, section, option, default=None):
        """A convenient wrapper for config.get()"""
        if not self.config.has_option(section, option) and default is not None:
            return default
        return self.config.get(section, option)

    def get_boolean(self, section, option, default=None):
        val = str(self.get(section, option, default)).strip().lower()
        return (val == 'yes') or (val == 'y') or (val == 'true')

    def get_int(self, section, option, default=None):
        return int(self.get(section, option, default))

    def get_list(self, section, option, default=None):
        return str(self.get(section, option, default)).split(LIST_SEPARATOR)


class ConfigWithDefaults(Config):
    """Defines a class able to use configuration files with per-section defaults"""
    def __init__(self, config, section_prefix):
        """Parses the assignments from the Config object, `config'

        Permits writing of config files like this:

            [budget DEFAULT]
            MaxNodes = 2000000

            [budget 3]
            MaxNodes = 50000000

        For q=3 MaxNodes is 50000000, every other order gets 2000000.

        Keys are case insensitive.
        IDs are case sensitive!
        """
        Config.__init__(self, config=config)
        self.section_prefix = section_prefix
        self.section_ids = {}
        self.defaults = {}

        for section in config.config.sections():
            if section.startswith(self.section_prefix):
                section_id = section[len(self.section_prefix):]
                if section_id == 'DEFAULT':
                    # NOTE: the default section is not added to
                    # section_ids, so it never appears in __iter__
                    self.defaults = dict(config.config.items(section))
                else:
                    self.section_ids[section_id] = config.config.items(section)

        for section_id, items in self.section_ids.items():
            temp = self.defaults.copy()
            temp.update(items)
            self.section_ids[section_id] = temp

    def get(self, section_id, option, default=None):
        """Returns value of `option' for `section_id', falling back to
        the DEFAULT section and then to `default'"""
        values = self.section_ids.get(section_id, self.defaults)
        if option.lower() in values:
            return values[option.lower()]
        if default is None:
            raise KeyError('No option %s for section ID %s' %
                           (option, repr(section_id)))
        return default

    def has(self, section_id, option):
        """True if `option' is set for `section_id' or in DEFAULT"""
        return option.lower() in self.section_ids.get(section_id, self.defaults)

    def __iter__(self):
        """Returns an iterator over the section IDs"""
        return iter(self.section_ids)

    def __contains__(self, section_id):
        """Returns True if section_id is a valid section ID"""
        return section_id in self.section_ids
