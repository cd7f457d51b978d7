"""Loggers of the tribuilding package.

Library modules log under 'tribuilding.<module>'.  The package logger
carries a NullHandler so that nothing is printed unless a script asks
for output with create_script_stdout_logger().
"""

import sys
import logging


PACKAGE = 'tribuilding'
FORMAT = '%(name)s %(levelname)s: %(message)s'

logging.getLogger(PACKAGE).addHandler(logging.NullHandler())


def create_module_logger(name):
    return logging.getLogger('%s.%s' % (PACKAGE, name))


def create_script_stdout_logger(verbose=False, stream=None):
    """Send the package's records to stream (stdout by default), debug
    records included when verbose.  Calling it again replaces the
    handler installed by the previous call."""
    logger = logging.getLogger(PACKAGE)
    logger.setLevel(logging.DEBUG if verbose else logging.INFO)
    for handler in list(logger.handlers):
        if getattr(handler, '_tribuilding_script', False):
            logger.removeHandler(handler)
    handler = logging.StreamHandler(stream or sys.stdout)
    handler.setFormatter(logging.Formatter(FORMAT))
    handler._tribuilding_script = True
    logger.addHandler(handler)
    return logger
