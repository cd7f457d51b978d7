#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Locking of fixture directories, so that concurrent runs storing
presentations or windows under one fixture root never interleave."""


import os
import fcntl
import tempfile

LOCK_NAME = '.tribuilding.lock'


class DirLock(object):
    """An exclusive lock on one fixture directory.

    The lock lives in a LOCK_NAME file inside the directory, created
    (together with the directory) when missing. The owner's pid is
    written into it while held.
    """
    def __init__(self, directory_to_lock):
        if not os.path.isdir(directory_to_lock):
            os.makedirs(directory_to_lock)
        self.directory = directory_to_lock
        self.path = os.path.join(directory_to_lock, LOCK_NAME)
        self._fd = os.open(self.path, os.O_CREAT | os.O_RDWR, 0o660)
        self.held = False

    def acquire(self, blocking=True):
        """Takes the lock; with blocking=False returns False instead of
        waiting for another holder"""
        flags = fcntl.LOCK_EX if blocking else fcntl.LOCK_EX | fcntl.LOCK_NB
        try:
            fcntl.flock(self._fd, flags)
        except BlockingIOError:
            return False
        os.ftruncate(self._fd, 0)
        os.write(self._fd, ('%d\n' % os.getpid()).encode('ascii'))
        self.held = True
        return True

    def __enter__(self):
        self.acquire()
        return self

    def release(self):
        if self.held:
            os.ftruncate(self._fd, 0)
            fcntl.flock(self._fd, fcntl.LOCK_UN)
            self.held = False

    def __exit__(self, type_, value, traceback):
        self.release()

    def __del__(self):
        os.close(self._fd)


def write_locked(path, text):
    """Replace the file at path with text while holding the lock of its
    directory; readers see either the old or the new contents"""
    directory = os.path.dirname(os.path.abspath(path))
    with DirLock(directory):
        fd, tmp = tempfile.mkstemp(dir=directory, prefix='.tmp-')
        with os.fdopen(fd, 'w') as handle:
            handle.write(text)
        os.replace(tmp, path)
