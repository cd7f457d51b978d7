#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Triangle presentations: validation, search and fixture files.

A triangle presentation over a plane with correspondence lam is a set
T of point triples such that
  (1) (x,y,z) in T for some z  iff  y is on lam(x)
  (2) (x,y,z) in T  implies  (y,z,x) in T
  (3) z is unique for every (x,y).
"""

import hashlib
import threading
from collections import namedtuple

from . import gfq
from . import tblogging
from . import dirlocking


_logger = tblogging.create_module_logger('presentation')

SEED_ORDERS = ('canonical', 'reverse')


class InvalidPresentation(Exception):
    """Raised when an operation needs a valid triangle presentation"""
    def __init__(self, message):
        Exception.__init__(self, message)


class FixtureFormatError(Exception):
    """Raised when a presentation file cannot be parsed"""
    def __init__(self, message):
        Exception.__init__(self, message)


ValidationReport = namedtuple('ValidationReport', ['passed', 'violations'])


class TrianglePresentation(object):
    """A set of triples over the points of plane"""

    def __init__(self, plane, triples, lambda_descriptor=None):
        self.plane = plane
        self.q = plane.q
        self.n = plane.n
        self.triples = frozenset(tuple(int(c) for c in t) for t in triples)
        self.lambda_descriptor = lambda_descriptor
        self.table = {}
        for x, y, z in sorted(self.triples):
            self.table.setdefault((x, y), z)

    def __len__(self):
        return len(self.triples)

    def __eq__(self, other):
        return (isinstance(other, TrianglePresentation) and
                self.plane.lam == other.plane.lam and
                self.q == other.q and self.triples == other.triples)

    def __hash__(self):
        return hash((self.q, self.plane.lam, self.triples))

    def third(self, x, y):
        """The z with (x,y,z) in T"""
        return self.table[(x, y)]

    def without(self, triple):
        """A copy with one triple removed"""
        return TrianglePresentation(self.plane, self.triples - set([triple]),
                                    self.lambda_descriptor)

    def to_text(self):
        """The fixture file contents; parse_presentation() inverts it"""
        body = ''.join('%d %d %d\n' % t for t in sorted(self.triples))
        head = 'q %d\nlambda %s\n' % (self.q, ' '.join(str(l) for l in self.plane.lam))
        digest = hashlib.sha1((head + body).encode('ascii')).hexdigest()
        return head + 'hash %s\n' % digest + body

    def digest(self):
        """Content hash embedded in fixtures and derived artifacts"""
        return self.to_text().split('\n')[2].split()[1]


def incident_pairs(plane):
    """All (x,y) with y on lam(x), canonical order"""
    return [(x, y) for x in range(plane.n) for y in sorted(plane.lam_sets[x])]


def validate(t):
    """Check the three axioms, collecting every violation with a witness"""
    plane = t.plane
    violations = []
    for triple in sorted(t.triples):
        if any(c < 0 or c >= plane.n for c in triple):
            violations.append(('range', triple))
    if violations:
        return ValidationReport(False, violations)

    zs = {}
    for x, y, z in sorted(t.triples):
        zs.setdefault((x, y), []).append(z)
    for pair in incident_pairs(plane):
        if pair not in zs:
            violations.append(('1', pair))
    for x, y, z in sorted(t.triples):
        if not plane.on_lambda(y, x):
            violations.append(('1', (x, y, z)))
    for x, y, z in sorted(t.triples):
        if (y, z, x) not in t.triples:
            violations.append(('2', (x, y, z)))
    for pair in sorted(zs):
        if len(zs[pair]) > 1:
            violations.append(('3', pair))
    return ValidationReport(not violations, violations)


def relations(t, collapse=True):
    """Relators a_x a_y a_z as lists of (generator, exponent).

    With collapse, one relator per cyclic orbit (its least triple).
    """
    report = validate(t)
    if not report.passed:
        raise InvalidPresentation('presentation fails validation: %s' %
                                  repr(report.violations[:3]))
    if collapse:
        reps = sorted(set(min([(x, y, z), (y, z, x), (z, x, y)])
                          for x, y, z in t.triples))
    else:
        reps = sorted(t.triples)
    return [[(x, 1), (y, 1), (z, 1)] for x, y, z in reps]


class PresentationSearch(object):
    """Backtracking search for triangle presentations over one plane.

    Variables are the incident pairs; choosing z for (x,y) fixes the
    whole cyclic orbit (x,y)->z, (y,z)->x, (z,x)->y.  After every
    choice each open pair must keep a consistent value.
    """

    def __init__(self, plane, seed_order='canonical', max_nodes=None):
        if seed_order not in SEED_ORDERS:
            raise ValueError('seed_order must be one of %s' % (SEED_ORDERS,))
        self.plane = plane
        self.seed_order = seed_order
        self.max_nodes = max_nodes
        self.nodes = 0
        self.complete = True
        self.pairs = incident_pairs(plane)
        self.domains = {}
        for x, y in self.pairs:
            dom = [z for z in sorted(plane.lam_sets[y]) if plane.on_lambda(x, z)]
            if seed_order == 'reverse':
                dom.reverse()
            self.domains[(x, y)] = dom

    def _orbit(self, pair, z, assigned):
        """Assignments implied by pair->z, or None on conflict"""
        x, y = pair
        implied = [((x, y), z), ((y, z), x), ((z, x), y)]
        for key, value in implied:
            old = assigned.get(key)
            if old is not None and old != value:
                return None
        return implied

    def _viable(self, pair, assigned):
        return any(self._orbit(pair, z, assigned) is not None
                   for z in self.domains[pair])

    def _budget_left(self):
        if self.max_nodes is not None and self.nodes >= self.max_nodes:
            if self.complete:
                _logger.warning('search budget of %d nodes exhausted',
                                self.max_nodes)
            self.complete = False
            return False
        return True

    def branches(self):
        """(first pair, value) choices at the top of the tree"""
        pair = self.pairs[0] if self.pairs else None
        if pair is None:
            return []
        return [(pair, z) for z in self.domains[pair]]

    def run(self, limit=None, prefix=None):
        """Yield complete assignments as triple sets.

        prefix, a (pair, z) choice, restricts the search to one top
        level branch.
        """
        if limit is not None and limit <= 0:
            return
        found = [0]
        assigned = {}
        if prefix is not None:
            implied = self._orbit(prefix[0], prefix[1], assigned)
            for key, value in implied:
                assigned[key] = value
            if not all(self._viable(p, assigned) for p in self.pairs
                       if p not in assigned):
                return
        for result in self._search(assigned, limit, found):
            yield result

    def _search(self, assigned, limit, found):
        if not self._budget_left():
            return
        self.nodes += 1
        open_pairs = [p for p in self.pairs if p not in assigned]
        if not open_pairs:
            found[0] += 1
            yield frozenset((x, y, z) for (x, y), z in assigned.items())
            return
        pair = open_pairs[0]
        for z in self.domains[pair]:
            implied = self._orbit(pair, z, assigned)
            if implied is None:
                continue
            added = [key for key, _ in implied if key not in assigned]
            for key, value in implied:
                assigned[key] = value
            if all(self._viable(p, assigned) for p in open_pairs
                   if p not in assigned):
                for result in self._search(assigned, limit, found):
                    yield result
                    if limit is not None and found[0] >= limit:
                        return
            for key in added:
                del assigned[key]
            if not self._budget_left():
                return


class _BranchWorker(threading.Thread):
    """Runs one top level branch of a search, noting the node count at
    which each result turned up"""
    def __init__(self, plane, seed_order, max_nodes, branch, limit):
        threading.Thread.__init__(self)
        self.search = PresentationSearch(plane, seed_order, max_nodes)
        self.branch = branch
        self.limit = limit
        self.results = []

    def run(self):
        for triples in self.search.run(self.limit, prefix=self.branch):
            self.results.append((self.search.nodes, triples))


def enumerate_presentations(plane, limit=None, seed_order='canonical',
                            max_nodes=None, threads=1, stats=None):
    """Yield valid presentations over plane in deterministic order.

    With threads > 1 the top level branches run in parallel and their
    results are merged back in branch order.  The node budget is then
    charged to the branches in that same order, so a truncated search
    yields what the serial one does.  stats, if given, is a dict
    receiving 'nodes' and 'complete'.
    """
    if limit is not None and limit <= 0:
        if stats is not None:
            stats.update(nodes=0, complete=True)
        return
    if threads <= 1:
        search = PresentationSearch(plane, seed_order, max_nodes)
        results = search.run(limit)
        for triples in results:
            yield TrianglePresentation(plane, triples)
        if stats is not None:
            stats.update(nodes=search.nodes, complete=search.complete)
        return

    # the root node is charged before any branch
    remaining = None if max_nodes is None else max(0, max_nodes - 1)
    top = PresentationSearch(plane, seed_order, max_nodes)
    workers = [_BranchWorker(plane, seed_order, remaining, branch, limit)
               for branch in top.branches()]
    pending = list(workers)
    while pending:
        batch, pending = pending[:threads], pending[threads:]
        for worker in batch:
            worker.start()
        for worker in batch:
            worker.join()
    complete = max_nodes is None or max_nodes > 0
    nodes = 1 if complete else 0
    emitted = 0
    for worker in workers:
        if not complete or (limit is not None and emitted >= limit):
            break
        for used, triples in worker.results:
            if remaining is not None and used > remaining:
                break
            if limit is not None and emitted >= limit:
                break
            emitted += 1
            yield TrianglePresentation(plane, triples)
        spent = worker.search.nodes
        if remaining is None:
            nodes += spent
        elif spent > remaining or not worker.search.complete:
            nodes += remaining
            complete = False
        else:
            nodes += spent
            remaining -= spent
    if stats is not None:
        stats.update(nodes=nodes, complete=complete)


LambdaOutcome = namedtuple('LambdaOutcome',
                           ['descriptor', 'found', 'nodes', 'complete'])


def lambda_family(field):
    """Descriptors scanned for a field: cyclic correspondences first,
    then the standard one"""
    n = field.q * field.q + field.q + 1
    return ['cyclic:%d' % b for b in range(n)] + ['standard']


def scan_lambda_family(field, limit=1, max_nodes=None, threads=1,
                       stop_at_first=True, family=None):
    """Search each correspondence of the family in turn.

    Returns the list of LambdaOutcome records, the found presentations
    in the 'found' field.
    """
    outcomes = []
    for descriptor in family or lambda_family(field):
        plane = gfq.make_plane(field, descriptor)
        stats = {}
        found = list(enumerate_presentations(plane, limit, max_nodes=max_nodes,
                                             threads=threads, stats=stats))
        for t in found:
            t.lambda_descriptor = descriptor
        outcomes.append(LambdaOutcome(descriptor, found, stats['nodes'],
                                      stats['complete']))
        _logger.info('lambda %s: %d presentation(s), %d nodes%s', descriptor,
                     len(found), stats['nodes'],
                     '' if stats['complete'] else ' (truncated)')
        if found and stop_at_first:
            break
    return outcomes


def cyclic_presentation(field):
    """A presentation invariant under a Singer cycle, from the first
    shift b whose difference set E = b + D splits into rotation closed
    triples summing to zero; None if no shift works"""
    base = gfq.make_plane(field)
    singer = gfq.singer_cycle(base)
    for shift in range(singer.n):
        diffs = gfq.difference_triples(singer, shift)
        if diffs is None:
            continue
        plane = base.with_lambda(gfq.cyclic_lambda(singer, shift))
        t = TrianglePresentation(plane, gfq.cyclic_triples(singer, diffs),
                                 'cyclic:%d' % shift)
        _logger.info('cyclic presentation for q=%d at shift %d, differences %s',
                     field.q, shift, repr(diffs))
        return t
    return None


def parse_presentation(text):
    """Inverse of TrianglePresentation.to_text()"""
    lines = text.splitlines()
    try:
        tag_q, q = lines[0].split()
        tag_l, lam = lines[1].split(None, 1)
        tag_h, digest = lines[2].split()
    except (IndexError, ValueError):
        raise FixtureFormatError('malformed presentation header')
    if (tag_q, tag_l, tag_h) != ('q', 'lambda', 'hash'):
        raise FixtureFormatError('malformed presentation header')
    triples = []
    for num, line in enumerate(lines[3:], 4):
        fields = line.split()
        if not fields:
            continue
        if len(fields) != 3:
            raise FixtureFormatError('line %d: expected three indices' % num)
        try:
            triples.append(tuple(int(f) for f in fields))
        except ValueError:
            raise FixtureFormatError('line %d: %s is not a triple of indices' %
                                     (num, ' '.join(fields)))
    try:
        plane = gfq.make_plane(gfq.make_field(int(q)), gfq.parse_lambda(lam))
    except ValueError:
        raise FixtureFormatError('q %s is not an integer' % q)
    except gfq.InvalidLambda as e:
        raise FixtureFormatError('bad lambda line: %s' % e)
    t = TrianglePresentation(plane, triples)
    if t.digest() != digest:
        raise FixtureFormatError('hash mismatch: file says %s, content is %s' %
                                 (digest, t.digest()))
    return t


def read_presentation(path):
    with open(path) as handle:
        return parse_presentation(handle.read())


def write_presentation(t, path):
    """Write t to path under a lock on its directory"""
    dirlocking.write_locked(path, t.to_text())
    _logger.info('stored presentation %s in %s', t.digest()[:12], path)
