#!/usr/bin/env python

"""High level json utilities"""

from fractions import Fraction

# Use simplejson or the standard json, prefer simplejson.
try:
    import simplejson as json
except ImportError:
    import json


def jsonify(obj):
    """Make a structure json can serialize deterministically.

    Fractions become "p/q" strings (integers stay integers), tuples
    and sets become lists (sets sorted), dict keys become strings.
    """
    if isinstance(obj, Fraction):
        if obj.denominator == 1:
            return str(obj.numerator)
        return '%d/%d' % (obj.numerator, obj.denominator)
    if isinstance(obj, dict):
        newobj = {}
        for key, value in obj.items():
            if isinstance(key, tuple):
                key = ','.join(str(k) for k in key)
            newobj[str(key)] = jsonify(value)
        return newobj
    if isinstance(obj, (set, frozenset)):
        return [jsonify(v) for v in sorted(obj)]
    if isinstance(obj, (list, tuple)):
        return [jsonify(v) for v in obj]
    if hasattr(obj, 'item') and not isinstance(obj, (str, bytes)):
        # numpy scalars
        return obj.item()
    return obj


def dumps(obj):
    """Byte-stable json text for obj"""
    return json.dumps(jsonify(obj), sort_keys=True, indent=2)


def loads(text):
    return json.loads(text)


def parse_fraction(text):
    """Inverse of the "p/q" rendering"""
    return Fraction(str(text))
