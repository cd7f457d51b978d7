#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Finite windows of apartments and their periodicity.

A window labels lattice points (i,j) with group elements a_{i,j}.  Only
the edge labels are stored:

    h(i,j) = x   when  a_{i+1,j} = a_{i,j} a_x
    v(i,j) = y   when  a_{i,j+1} = a_{i,j} a_y^-1

together with the word of one base point.  The up triangle
{(i,j),(i+1,j),(i,j+1)} is a chamber when h(i,j) is on lam(v(i,j)); its
third edge (i+1,j) -> (i,j+1) is the positive letter
diag(i,j) = T(v(i,j), h(i,j)).  The down triangle
{(i+1,j),(i,j+1),(i+1,j+1)} is a chamber when
(diag(i,j), h(i,j+1), v(i+1,j)) is in T.

Steps along (1,0), (-1,1) and (0,-1) are positive letters, so the
distance between two points of an apartment is
max(|r|, |s|, |r+s|) for the displacement (r,s).
"""

from collections import namedtuple

import numpy as np

from . import tblogging
from .building import (normalizer_for, inverse, shape, format_word,
                       parse_word, word_length, OutOfBall)


_logger = tblogging.create_module_logger('apartment')


class WindowTooSmall(Exception):
    """Raised when a shift has no overlap with the window"""
    def __init__(self, message):
        Exception.__init__(self, message)


class NotPeriodic(Exception):
    """Raised when a window has no nonzero periodicity candidate"""
    def __init__(self, message):
        Exception.__init__(self, message)


class SearchFailed(Exception):
    """Raised when the periodic construction runs out of attempts"""
    def __init__(self, message):
        Exception.__init__(self, message)


class StripTooShort(Exception):
    """Raised when the strip walk finds no repeated hull labelling, or
    the window is too narrow to test the repeat found after steps"""
    def __init__(self, message, steps=None):
        Exception.__init__(self, message)
        self.steps = steps


class NotStabilizing(Exception):
    """Raised when an element does not map a window to itself"""
    def __init__(self, message):
        Exception.__init__(self, message)


class WindowFormatError(Exception):
    """Raised when a window document cannot be parsed"""
    def __init__(self, message):
        Exception.__init__(self, message)


PeriodicityReport = namedtuple('PeriodicityReport',
                               ['candidates', 'classification', 'rigid',
                                'minimal_period'])
SecondPeriod = namedtuple('SecondPeriod', ['shift', 'steps', 'element'])
StabilizerReport = namedtuple('StabilizerReport',
                              ['symmetry', 'shift', 'element_length',
                               'minimal_period', 'bound_holds'])
SectorClass = namedtuple('SectorClass', ['kind', 'direction', 'candidates'])


def translation_length(r, s):
    """Distance between (i,j) and (i+r,j+s) in an apartment"""
    return max(abs(r), abs(s), abs(r + s))


def _key(point):
    return '%d,%d' % point


def _unkey(text):
    i, j = text.split(',')
    return int(i), int(j)


class ApartmentWindow(object):
    """Edge labels of a finite part of an apartment"""

    def __init__(self, t, h, v, origin=(0, 0), base=(), info=None):
        self.t = t
        self.h = dict(h)
        self.v = dict(v)
        self.origin = tuple(origin)
        self.base = tuple(base)
        self.info = dict(info or {})
        points = set([self.origin])
        for i, j in self.h:
            points.update([(i, j), (i + 1, j)])
        for i, j in self.v:
            points.update([(i, j), (i, j + 1)])
        self.points = frozenset(points)
        self._words = None

    @property
    def normalizer(self):
        return normalizer_for(self.t)

    def bounds(self):
        """(i_min, i_max, j_min, j_max)"""
        ii = [p[0] for p in self.points]
        jj = [p[1] for p in self.points]
        return min(ii), max(ii), min(jj), max(jj)

    def diag(self, i, j):
        """Label of the edge (i+1,j) -> (i,j+1), None if unknown"""
        if (i, j) in self.h and (i, j) in self.v:
            return self.t.table.get((self.v[(i, j)], self.h[(i, j)]))
        return None

    def words(self):
        """Normal forms of all points, by search from the base point"""
        if self._words is None:
            push = self.normalizer.push
            words = {self.origin: self.base}
            frontier = [self.origin]
            while frontier:
                nxt = []
                for (i, j) in frontier:
                    word = words[(i, j)]
                    steps = []
                    if (i, j) in self.h:
                        steps.append(((i + 1, j), (self.h[(i, j)], 1)))
                    if (i - 1, j) in self.h:
                        steps.append(((i - 1, j), (self.h[(i - 1, j)], -1)))
                    if (i, j) in self.v:
                        steps.append(((i, j + 1), (self.v[(i, j)], -1)))
                    if (i, j - 1) in self.v:
                        steps.append(((i, j - 1), (self.v[(i, j - 1)], 1)))
                    for point, letter in steps:
                        if point not in words:
                            words[point] = push(word, letter)
                            nxt.append(point)
                frontier = sorted(nxt)
            self._words = words
        return self._words

    def word(self, i, j):
        return self.words()[(i, j)]

    def element(self, p, p2):
        """a_p^-1 a_p2 in normal form"""
        words = self.words()
        return self.normalizer.multiply(inverse(words[p]), words[p2])

    def point_of(self):
        """Map normal form -> point"""
        return dict((w, p) for p, w in self.words().items())

    def translated(self, g):
        """The window g A: same labels, base word g a_origin"""
        return ApartmentWindow(self.t, self.h, self.v, self.origin,
                               self.normalizer.multiply(tuple(g), self.base),
                               self.info)

    def crop(self, i0, i1, j0, j1):
        """Labels of edges inside [i0,i1]x[j0,j1]"""
        h = dict((p, x) for p, x in self.h.items()
                 if i0 <= p[0] < i1 and j0 <= p[1] <= j1)
        v = dict((p, y) for p, y in self.v.items()
                 if i0 <= p[0] <= i1 and j0 <= p[1] < j1)
        origin = (min(max(self.origin[0], i0), i1), min(max(self.origin[1], j0), j1))
        return ApartmentWindow(self.t, h, v, origin, self.word(*origin), self.info)

    def sector(self, origin, depth):
        """Triangle {i,j >= 0, i+j <= depth} based at origin, re-indexed
        so that origin becomes (0,0)"""
        oi, oj = origin
        h, v = {}, {}
        for a in range(depth + 1):
            for b in range(depth + 1 - a):
                if a + b < depth:
                    if (oi + a, oj + b) not in self.h or (oi + a, oj + b) not in self.v:
                        raise WindowTooSmall('sector of depth %d at %s leaves the window' %
                                             (depth, repr(origin)))
                    h[(a, b)] = self.h[(oi + a, oj + b)]
                    v[(a, b)] = self.v[(oi + a, oj + b)]
        return ApartmentWindow(self.t, h, v, (0, 0), self.word(oi, oj),
                               {'depth': depth})

    def bad_triangles(self):
        """Up/down triangles whose labels are not chambers"""
        plane = self.t.plane
        bad = []
        for (i, j), x in sorted(self.h.items()):
            if (i, j) in self.v:
                y = self.v[(i, j)]
                if not plane.on_lambda(x, y):
                    bad.append(('up', (i, j)))
                    continue
                d = self.t.table[(y, x)]
                if (i, j + 1) in self.h and (i + 1, j) in self.v:
                    if self.t.table.get((d, self.h[(i, j + 1)])) != self.v[(i + 1, j)]:
                        bad.append(('down', (i, j)))
        return bad

    def to_document(self):
        i0, i1, j0, j1 = self.bounds()
        return {
            'bounds': [i0, i1, j0, j1],
            'origin': list(self.origin),
            'base': format_word(self.base),
            'presentation': self.t.digest(),
            'h': dict((_key(p), x) for p, x in self.h.items()),
            'v': dict((_key(p), y) for p, y in self.v.items()),
            'info': self.info,
        }


def window_from_document(t, doc):
    """Inverse of ApartmentWindow.to_document()"""
    try:
        if doc['presentation'] != t.digest():
            raise WindowFormatError('window belongs to presentation %s, not %s' %
                                    (doc['presentation'], t.digest()))
        h = dict((_unkey(k), int(x)) for k, x in doc['h'].items())
        v = dict((_unkey(k), int(y)) for k, y in doc['v'].items())
        return ApartmentWindow(t, h, v, tuple(doc['origin']),
                               parse_word(doc['base']), doc.get('info'))
    except (KeyError, ValueError, TypeError) as e:
        raise WindowFormatError('malformed window document: %s' % e)


def hull_fill(t, base, g, origin=(0, 0)):
    """Labels of the convex hull of a_origin = base and base g.

    With g = a_{x_1}..a_{x_m} a_{y_1}^-1..a_{y_n}^-1 in normal form the
    hull is the parallelogram [0,m]x[0,n]; the bottom row reads the
    positive part and the right column the negative part.
    """
    norm = normalizer_for(t)
    g = norm.normalize(g)
    m, n = shape(g)
    oi, oj = origin
    h, v = {}, {}
    for i in range(m):
        h[(i, 0)] = g[i][0]
    for j in range(n):
        v[(m, j)] = g[m + j][0]
    for j in range(1, n + 1):
        for i in range(m - 1, -1, -1):
            s, w = norm.swap_pn[(h[(i, j - 1)], v[(i + 1, j - 1)])]
            v[(i, j - 1)] = s
            h[(i, j)] = w
    h = dict(((i + oi, j + oj), x) for (i, j), x in h.items())
    v = dict(((i + oi, j + oj), y) for (i, j), y in v.items())
    return ApartmentWindow(t, h, v, origin, norm.normalize(base))


def random_normal_form(t, m, n, rng):
    """Uniform letter by letter choice of a normal form of shape (m,n)"""
    plane = t.plane
    word = []
    prev = None
    for _ in range(m):
        options = [x for x in range(t.n) if prev is None or not plane.on_lambda(x, prev)]
        prev = options[int(rng.integers(len(options)))]
        word.append((prev, 1))
    last_pos = prev
    prev = None
    for k in range(n):
        if k == 0:
            options = [y for y in range(t.n) if y != last_pos]
        else:
            options = [y for y in range(t.n) if not plane.on_lambda(prev, y)]
        prev = options[int(rng.integers(len(options)))]
        word.append((prev, -1))
    return tuple(word)


def _layer_choices(t, h, v, k):
    """Options (wall letter, corner letter) for layer k of a sector, each
    with the labels they force"""
    plane = t.plane
    norm = normalizer_for(t)
    table = t.table
    out = []
    walls = [x for x in range(t.n) if not plane.on_lambda(x, h[(k - 2, 0)])]
    for x in walls:
        nh = {(k - 1, 0): x}
        nv = {}
        ok = True
        for i in range(k - 1, 0, -1):
            d = table[(v[(i - 1, k - i - 1)], h[(i - 1, k - i - 1)])]
            hi = nh.get((i, k - i - 1), h.get((i, k - i - 1)))
            if d == hi:
                ok = False
                break
            p, tt = norm.swap_np[(d, hi)]
            nh[(i - 1, k - i)] = p
            nv[(i, k - i - 1)] = table[(hi, tt)]
        if not ok:
            continue
        top = nh[(0, k - 1)]
        prev = v[(0, k - 2)]
        corners = [y for y in range(t.n)
                   if plane.on_lambda(top, y) and not plane.on_lambda(prev, y)]
        assert len(corners) == t.q, 'expected %d corner options' % t.q
        for y in corners:
            ch = dict(nh)
            cv = dict(nv)
            cv[(0, k - 1)] = y
            out.append((ch, cv))
    return out


def _first_layers(t):
    """Chambers at e as (h, v) label dicts"""
    return [({(0, 0): x}, {(0, 0): y}) for y in range(t.n)
            for x in sorted(t.plane.lam_sets[y])]


def enumerate_sector_windows(t, depth):
    """Every sector window of the given depth based at e, in a fixed order"""
    if depth < 1:
        raise WindowTooSmall('sector depth must be at least 1')

    def grow(h, v, k):
        if k > depth:
            yield ApartmentWindow(t, h, v, (0, 0), (), {'depth': depth})
            return
        for nh, nv in _layer_choices(t, h, v, k):
            h2 = dict(h)
            h2.update(nh)
            v2 = dict(v)
            v2.update(nv)
            for w in grow(h2, v2, k + 1):
                yield w

    for h, v in _first_layers(t):
        for w in grow(h, v, 2):
            yield w


def random_sector_window(t, depth, rng):
    """One sector window based at e chosen with rng"""
    if depth < 1:
        raise WindowTooSmall('sector depth must be at least 1')
    layers = _first_layers(t)
    h, v = layers[int(rng.integers(len(layers)))]
    h, v = dict(h), dict(v)
    for k in range(2, depth + 1):
        options = _layer_choices(t, h, v, k)
        nh, nv = options[int(rng.integers(len(options)))]
        h.update(nh)
        v.update(nv)
    return ApartmentWindow(t, h, v, (0, 0), (), {'depth': depth})


def random_square_window(t, d, rng, base=()):
    """The hull of e and a random element of shape (d,d)"""
    return hull_fill(t, base, random_normal_form(t, d, d, rng))


def _bound_pair(bound):
    if isinstance(bound, int):
        return bound, bound
    return tuple(bound)


def shift_agrees(w, r, s):
    """None if some label family has no overlap, else agreement"""
    result = True
    for labels in (w.h, w.v):
        overlap = [p for p in labels if (p[0] + r, p[1] + s) in labels]
        if not overlap:
            return None
        if any(labels[p] != labels[(p[0] + r, p[1] + s)] for p in overlap):
            result = False
    return result


def _classify(candidates):
    nonzero = [c for c in candidates if c != (0, 0)]
    if not nonzero:
        return 'trivial'
    rank = np.linalg.matrix_rank(np.array(nonzero, dtype=float))
    return 'doubly' if rank >= 2 else 'singly'


def _is_rigid_shift(r, s):
    return r != 0 and s != 0 and s != -r


def periodicity_candidates(w, bound, skip_empty=False):
    """Shifts (r,s), |r|,|s| <= bound, under which the labels agree on
    the whole overlap of the window with its shift"""
    ri, rj = _bound_pair(bound)
    candidates = []
    for r in range(-ri, ri + 1):
        for s in range(-rj, rj + 1):
            agrees = shift_agrees(w, r, s)
            if agrees is None:
                if skip_empty:
                    continue
                raise WindowTooSmall('shift (%d,%d) has no overlap with the window' % (r, s))
            if agrees:
                candidates.append((r, s))
    classification = _classify(candidates)
    rigid = classification == 'doubly' or any(_is_rigid_shift(r, s) for r, s in candidates)
    return PeriodicityReport(tuple(candidates), classification, rigid, None)


def _anchor(w, r, s):
    """A window point p with p + (r,s) also a point"""
    for p in sorted(w.points):
        if (p[0] + r, p[1] + s) in w.points:
            return p
    return None


def minimal_period(w, report, b):
    """Least word length of a_p^-1 a_{p+(r,s)} over nonzero candidates.

    Elements too long for the ball are longer than every length it
    measures, so they only matter when nothing else was measured.
    """
    lengths = []
    beyond = 0
    for r, s in report.candidates:
        if (r, s) == (0, 0):
            continue
        p = _anchor(w, r, s)
        if p is None:
            continue
        g = w.element(p, (p[0] + r, p[1] + s))
        try:
            lengths.append(word_length(b, g))
        except OutOfBall:
            beyond += 1
    if not lengths:
        if beyond:
            raise OutOfBall('%d candidate(s) longer than %d; use a larger ball' %
                            (beyond, 2 * b.radius))
        raise NotPeriodic('window has no nonzero periodicity candidate')
    return min(lengths)


def window_from_translation(t, base, u, period, repeats):
    """Hull of base u^-repeats and base u^repeats, re-indexed so base
    sits at (0,0); u must translate by (period, period)"""
    norm = normalizer_for(t)
    u = norm.normalize(u)
    span = norm.normalize(u * (2 * repeats))
    if shape(span) != (2 * repeats * period, 2 * repeats * period):
        return None
    start = norm.multiply(norm.normalize(base), norm.normalize(inverse(u) * repeats))
    half = repeats * period
    return hull_fill(t, start, span, origin=(-half, -half))


def construct_rigidly_periodic(t, m, seed=1, max_attempts=64, periods=1):
    """An apartment window with period (m+2, m+2) and minimal period at
    least m.

    A random region R = hull(e, v), v of shape (m+1, m+1), is closed up
    by a chamber D at e labelled (c, d) and a chamber D' at v labelled
    (d', c') sharing the letter b: (b,c,d), (b,c',d') in T, so that
    u = v a_d' a_d^-1 = v a_c'^-1 a_c translates R onto the next tile.
    The returned window spans [-k P, (k+1) P]^2 with P = m+2 and
    k = periods.
    """
    if m < 1:
        raise ValueError('target minimal period must be positive')
    norm = normalizer_for(t)
    plane = t.plane
    table = t.table
    side = m + 1
    period = side + 1
    rng = np.random.default_rng(seed)
    for attempt in range(max_attempts):
        g = random_normal_form(t, side, side, rng)
        region = hull_fill(t, (), g)
        short = [(r, s) for r, s in periodicity_candidates(region, side // 2).candidates
                 if (r, s) != (0, 0) and translation_length(r, s) < m]
        if short:
            _logger.debug('seed %d rejected: short periods %s', attempt, repr(short))
            continue
        x0, y0 = region.h[(0, 0)], region.v[(0, 0)]
        p, l = region.v[(side, side - 1)], region.h[(side - 1, side)]
        for b in range(t.n):
            for c in sorted(plane.lam_sets[b]):
                for c2 in sorted(plane.lam_sets[b]):
                    if c2 == c:
                        continue
                    d, d2 = table[(b, c)], table[(b, c2)]
                    if (plane.on_lambda(d, y0) or plane.on_lambda(x0, c) or
                            plane.on_lambda(d2, l) or plane.on_lambda(p, c2)):
                        continue
                    u = norm.multiply(g, ((d2, 1), (d, -1)))
                    if u != norm.multiply(g, ((c2, -1), (c, 1))):
                        continue
                    w = window_from_translation(t, (), u, period, periods + 1)
                    if w is None:
                        continue
                    chain = {(-1, 0, 'h'): c, (0, -1, 'v'): d,
                             (side, side, 'h'): d2, (side, side, 'v'): c2}
                    ok = all(w.h.get(pt) == x for pt, x in region.h.items()) and \
                        all(w.v.get(pt) == y for pt, y in region.v.items())
                    for (i, j, kind), letter in chain.items():
                        labels = w.h if kind == 'h' else w.v
                        ok = ok and labels.get((i, j)) == letter and \
                            labels.get((i + period, j + period)) == letter
                    if not ok:
                        continue
                    lo, hi = -periods * period, (periods + 1) * period
                    w = w.crop(lo, hi, lo, hi)
                    w.info.update({'period': [period, period],
                                   'translation': format_word(u),
                                   'seed': format_word(g),
                                   'chain': {'b': b, 'c': c, "c'": c2,
                                             'd': d, "d'": d2},
                                   'attempt': attempt})
                    _logger.info('periodic apartment for m=%d after %d seed(s): '
                                 'b=%d c=%d c\'=%d', m, attempt + 1, b, c, c2)
                    return w
    raise SearchFailed('no rigidly periodic apartment for m=%d within %d seeds' %
                       (m, max_attempts))


def reconstruct_from_sector(w, period, origin=(0, 0)):
    """Points whose word differs from the rebuild out of sector words.

    a_{i,j} = a_o a_{o+k(r,s)}^-1 a_{(i,j)+k(r,s)} with the least k >= 0
    putting (i,j)+k(r,s) in the sector {i >= o_i, j >= o_j}.
    """
    norm = w.normalizer
    words = w.words()
    r, s = period
    oi, oj = origin
    mismatches = []
    for (i, j), word in sorted(words.items()):
        k = 0
        while (i + k * r < oi or j + k * s < oj) and k <= 64:
            k += 1
        shifted = (i + k * r, j + k * s)
        anchor = (oi + k * r, oj + k * s)
        if shifted not in words or anchor not in words:
            continue
        rebuilt = norm.multiply(norm.multiply(words[origin], inverse(words[anchor])),
                                words[shifted])
        if rebuilt != word:
            mismatches.append((i, j))
    return mismatches


def find_second_period(w, primary, max_steps=256):
    """Walk the hull of a_{0,0}, a_{r,s} along (1,-1) until its labelling
    repeats; returns the shift (n,-n) of the repeat.

    The step from (k,-k) to (k+1,-k-1) is a_z^-1 with z the letter of the
    edge (k+1,-k-1) -> (k,-k); the next hull element is a_z g a_z^-1.
    """
    r, s = primary
    if r <= 0 or s <= 0:
        raise ValueError('primary period must have r, s > 0')
    if shift_agrees(w, r, s) is not True:
        raise NotPeriodic('window is not (%d,%d)-periodic' % (r, s))
    norm = w.normalizer
    plane = w.t.plane
    o = w.origin
    g0 = w.element(o, (o[0] + r, o[1] + s))
    g = g0
    steps = []
    for k in range(max_steps):
        h0 = g[0][0]
        options = []
        for z in range(w.t.n):
            if not plane.on_lambda(h0, z):
                continue
            if len(norm.multiply(((z, 1),), g)) == len(g) - 1:
                continue
            conj = norm.multiply(norm.multiply(((z, 1),), g), ((z, -1),))
            if shape(conj) == (r, s):
                options.append((z, conj))
        if not options:
            raise StripTooShort('strip walk stuck after %d steps' % k)
        if len(options) > 1:
            known = w.diag(o[0] + k, o[1] - k - 1)
            chosen = [opt for opt in options if opt[0] == known]
            options = chosen or options
            _logger.debug('strip step %d: %d choices, taking %d', k, len(options),
                          options[0][0])
        z, g = options[0]
        steps.append(z)
        if g == g0:
            n = len(steps)
            element = norm.normalize(tuple((x, -1) for x in steps))
            if norm.multiply(element, g0) != norm.multiply(g0, element):
                raise StripTooShort('repeat at %d does not commute with the '
                                    'primary translation' % n)
            checked = shift_agrees(w, n, -n)
            if checked is None:
                raise StripTooShort('window too narrow to test the shift (%d,%d)' %
                                    (n, -n), steps=n)
            if not checked:
                raise StripTooShort('repeat at %d is not a period of the window' % n)
            return SecondPeriod((n, -n), n, element)
    raise StripTooShort('no repeated hull labelling within %d steps' % max_steps)


def construct_with_second_period(t, m, seed=1, max_periods=12):
    """A rigidly periodic window wide enough along (1,-1) to test its
    second period; returns (window, SecondPeriod).

    Starts from two periods on each side and rebuilds with as many as
    the strip walk asks for.
    """
    size = m + 2
    periods = 2
    while True:
        w = construct_rigidly_periodic(t, m, seed=seed, periods=periods)
        try:
            return w, find_second_period(w, tuple(w.info['period']))
        except StripTooShort as e:
            if e.steps is None:
                raise
            # (n,-n) overlaps [-kP, (k+1)P] once (2k+1)P > n
            wanted = max(periods + 1, -(-(e.steps + 1 - size) // (2 * size)))
            if wanted > max_periods:
                raise StripTooShort('second period %d needs more than %d periods' %
                                    (e.steps, max_periods), steps=e.steps)
            _logger.info('second period %d: widening to %d periods', e.steps, wanted)
            periods = wanted


def stabilizer_period_bound(g, w, b, bound=None):
    """Check minimal period <= 2|g| for an element g mapping the window
    into itself, and name the induced symmetry.

    Every point at least |g| from the border of the window must be sent
    into the window, all by one affine map of the lattice.
    """
    norm = w.normalizer
    g = norm.normalize(g)
    if not g:
        raise NotStabilizing('the identity is excluded')
    length = word_length(b, g)
    words = w.words()
    where = w.point_of()
    i0, i1, j0, j1 = w.bounds()
    interior = set(p for p in words
                   if min(p[0] - i0, i1 - p[0], p[1] - j0, j1 - p[1]) >= length)
    chamber = next(([p, (p[0] + 1, p[1]), (p[0], p[1] + 1)] for p in sorted(interior)
                    if (p[0] + 1, p[1]) in interior and (p[0], p[1] + 1) in interior),
                   None)
    if chamber is None:
        raise WindowTooSmall('no chamber of the window is %d away from its border' %
                             length)
    image = {}
    for p in sorted(interior):
        q = where.get(norm.multiply(g, words[p]))
        if q is None:
            raise NotStabilizing('%s sends %s out of the window' % (format_word(g), p))
        image[p] = q
    p0, p1, p2 = [np.array(image[p]) for p in chamber]
    sigma = np.column_stack([p1 - p0, p2 - p0])
    offset = p0 - sigma.dot(np.array(chamber[0]))
    for p, q in image.items():
        if tuple(sigma.dot(np.array(p)) + offset) != q:
            raise NotStabilizing('%s does not act affinely on the window' % format_word(g))
    det = int(round(np.linalg.det(sigma)))
    if np.array_equal(sigma, np.eye(2, dtype=int)):
        symmetry = 'translation'
        shift = (int(offset[0]), int(offset[1]))
    elif det == -1:
        symmetry = 'glide-reflection'
        shift = None
    else:
        raise NotStabilizing('%s induces a rotation of the window' % format_word(g))
    if bound is None:
        bound = (max(1, (i1 - i0) // 2), max(1, (j1 - j0) // 2))
    report = periodicity_candidates(w, bound, skip_empty=True)
    period = minimal_period(w, report, b)
    return StabilizerReport(symmetry, shift, length, period, period <= 2 * length)


_DIRECTIONS = ((1, 0), (0, 1), (1, -1))


def classify_sector_periodicity(w, bound=None):
    """rigid, wall-parallel (with its direction) or trivial"""
    i0, i1, j0, j1 = w.bounds()
    if bound is None:
        bound = (i1 - i0) // 2, (j1 - j0) // 2
    ri, rj = _bound_pair(bound)
    if ri < 1 or rj < 1:
        raise WindowTooSmall('sector window too small to classify')
    report = periodicity_candidates(w, (ri, rj), skip_empty=True)
    nonzero = [c for c in report.candidates if c != (0, 0)]
    if report.rigid:
        return SectorClass('rigid', None, report.candidates)
    if not nonzero:
        return SectorClass('trivial', None, report.candidates)
    for d in _DIRECTIONS:
        if all(r * d[1] - s * d[0] == 0 for r, s in nonzero):
            return SectorClass('wall-parallel', d, report.candidates)
    return SectorClass('rigid', None, report.candidates)


def periodic_strip(t, g_letters, rows, copies=3):
    """A window whose bottom row repeats the positive word g and whose
    rows are built upwards, each (R,0)-periodic.

    For every row the letter of its first diagonal edge is chosen to keep
    the row period as short as possible.
    """
    plane = t.plane
    table = t.table
    norm = normalizer_for(t)
    row = list(g_letters)
    size = len(row)
    if not size or any(plane.on_lambda(row[(k + 1) % size], row[k]) for k in range(size)):
        raise ValueError('%s is not a cyclically normal positive word' % repr(g_letters))
    rows_h = [row]
    rows_d = []
    prev_v = None
    for j in range(rows):
        cur = rows_h[-1]
        period = len(cur)
        best = None
        for y in sorted(plane.lam_sets[cur[0]]):
            v0 = table[(cur[0], y)]
            if prev_v is not None and plane.on_lambda(prev_v, v0):
                continue
            d = y
            new_row, diags = [], []
            ok = True
            for step in range(period * t.n):
                diags.append(d)
                nxt = cur[(step + 1) % period]
                if d == nxt:
                    ok = False
                    break
                p, d = norm.swap_np[(d, nxt)]
                new_row.append(p)
                if (step + 1) % period == 0 and d == y:
                    break
            else:
                ok = False
            if not ok:
                continue
            length = len(new_row)
            if any(plane.on_lambda(new_row[(k + 1) % length], new_row[k])
                   for k in range(length)):
                continue
            if best is None or length < len(best[1]):
                best = (y, new_row, diags)
        if best is None:
            raise SearchFailed('no periodic continuation of row %d' % j)
        y, new_row, diags = best
        rows_d.append(diags)
        rows_h.append(new_row)
        prev_v = table[(cur[0], y)]
    period = len(rows_h[-1])
    width = copies * period
    h, v = {}, {}
    for j, cur in enumerate(rows_h):
        for i in range(width):
            h[(i, j)] = cur[i % len(cur)]
    for j, diags in enumerate(rows_d):
        cur = rows_h[j]
        for i in range(width + 1):
            v[(i, j)] = table[(cur[i % len(cur)], diags[i % len(diags)])]
    return ApartmentWindow(t, h, v, (0, 0), (), {'period': [period, 0]})
