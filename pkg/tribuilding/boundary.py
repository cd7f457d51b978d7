#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Cylinder sets of the boundary and their exact measures.

All values are fractions.Fraction; nothing here uses floating point.
"""

from collections import namedtuple, Counter
from fractions import Fraction

import networkx as nx

from . import tblogging
from . import apartment
from .building import inverse, shape, format_word, word_length


_logger = tblogging.create_module_logger('boundary')


class TooShallow(Exception):
    """Raised when a derivative value cannot be certified"""
    def __init__(self, message):
        Exception.__init__(self, message)


class Unsupported(Exception):
    """Raised for orders the boundary map construction does not cover"""
    def __init__(self, message):
        Exception.__init__(self, message)


class NoMatch(Exception):
    """Raised when source and target chambers cannot be matched"""
    def __init__(self, message):
        Exception.__init__(self, message)


class PrefixTooShallow(Exception):
    """Raised when a sector prefix is shorter than requested"""
    def __init__(self, message):
        Exception.__init__(self, message)


class DepthTooSmall(Exception):
    """Raised when a scan depth does not exceed the element length"""
    def __init__(self, message):
        Exception.__init__(self, message)


class TrivialElement(Exception):
    """Raised when the identity is passed where it is excluded"""
    def __init__(self, message):
        Exception.__init__(self, message)


CylinderMeasure = namedtuple('CylinderMeasure', ['value', 'basepoint', 'coordinates'])
KMapMatch = namedtuple('KMapMatch', ['source_vertex', 'target_vertex', 'element',
                                     'chambers', 'mass'])
KMapStage = namedtuple('KMapStage', ['index', 'matches', 'matched_mass', 'live_fraction'])
PartialBoundaryMap = namedtuple('PartialBoundaryMap',
                                ['source', 'target', 'stages', 'unmatched_fraction',
                                 'law_fraction', 'source_mass', 'target_mass',
                                 'disjoint'])
RNSweep = namedtuple('RNSweep', ['values', 'certified', 'skipped'])
FreenessWitness = namedtuple('FreenessWitness', ['window', 'shift', 'symmetric'])


def alpha(q):
    """Number of chambers at a vertex"""
    return (q + 1) * (q * q + q + 1)


def n_mn(q, m, n):
    """Number of vertices with coordinates (m,n) from a base point"""
    if m < 0 or n < 0:
        raise ValueError('coordinates must be nonnegative')
    points = q * q + q + 1
    if m == 0 and n == 0:
        return 1
    if n == 0:
        return points * q ** (2 * (m - 1))
    if m == 0:
        return points * q ** (2 * (n - 1))
    return points * (q * q + q) * q ** (2 * (m + n - 2))


def cylinder_measure(q, m, n, basepoint='e'):
    """nu_v of a vertex cylinder at coordinates (m,n)"""
    return CylinderMeasure(Fraction(1, n_mn(q, m, n)), basepoint, (m, n))


def class_masses(q, d):
    """(m,n) -> total mass of the N_{m,n} cylinders, for m+n = d"""
    return dict(((m, d - m), n_mn(q, m, d - m) * cylinder_measure(q, m, d - m).value)
                for m in range(d + 1))


def diagonal_growth(q, count):
    """N_{i,i} for i = 0 .. count-1"""
    return [n_mn(q, i, i) for i in range(count)]


def chamber_partition(t):
    """Chambers at e, as (x,y) labels of {e, a_x^-1, a_y}, with the
    measure q / N_{1,1} of their cylinder"""
    q = t.q
    mass = Fraction(q, n_mn(q, 1, 1))
    return [((x, y), mass) for x, y, _ in sorted(t.triples)]


def _in_hull(lengths):
    a, b, c = lengths
    return a + b == c


def rn_derivative(b, x, u):
    """nu_x(Omega_e^u) / nu_e(Omega_e^u) = N(e coords) / N(x coords).

    Certified when both coordinate pairs have the same zero pattern and
    x lies on a geodesic from e to u, or e on one from x to u.
    """
    norm = b.normalizer
    x = norm.normalize(x)
    u = norm.normalize(u)
    if not x:
        return Fraction(1)
    xu = norm.multiply(inverse(x), u)
    m, n = shape(u)
    m2, n2 = shape(xu)
    lx, lu, lxu = word_length(b, x), word_length(b, u), word_length(b, xu)
    same_pattern = (m == 0) == (m2 == 0) and (n == 0) == (n2 == 0)
    if not same_pattern or not (_in_hull((lx, lxu, lu)) or _in_hull((lx, lu, lxu))):
        raise TooShallow('Omega_e^u and Omega_x^u are not certified equal '
                         '(coordinates %s and %s)' % ((m, n), (m2, n2)))
    return Fraction(n_mn(b.q, m, n), n_mn(b.q, m2, n2))


def rn_sweep(b, basepoints, d):
    """Derivative values over sphere(d) for every base point"""
    values = Counter()
    certified = skipped = 0
    for x in basepoints:
        for u in b.sphere(d):
            try:
                value = rn_derivative(b, b.words[x], b.words[u])
            except TooShallow:
                skipped += 1
                continue
            certified += 1
            values[value] += 1
    return RNSweep(values, certified, skipped)


def is_power_of_q2(value, q):
    """True if value = q^(2k) for an integer k"""
    value = Fraction(value)
    if value <= 0:
        return False
    num, den = value.numerator, value.denominator
    if num != 1 and den != 1:
        return False
    rest = num if den == 1 else den
    while rest % (q * q) == 0:
        rest //= q * q
    return rest == 1


def _chamber_vertices(norm, g, label):
    x, y = label
    return frozenset([g, norm.push(g, (x, -1)), norm.push(g, (y, 1))])


def _forward_labels(t, norm, g):
    """Chambers at g whose other vertices are further from e"""
    size = len(g)
    out = []
    for x, y, _ in sorted(t.triples):
        if len(norm.push(g, (x, -1))) == size + 1 and len(norm.push(g, (y, 1))) == size + 1:
            out.append((x, y))
    return out


def _beyond(t, norm, g, label):
    """The q vertices beyond the edge of chamber (g, label) opposite g,
    sorted, with that edge"""
    x, y = label
    edge = (norm.push(g, (x, -1)), norm.push(g, (y, 1)))
    beyond = set()
    for letter in norm.letters:
        w = norm.push(edge[0], letter)
        if len(w) == len(g) + 2 and \
                any(norm.push(w, l2) == edge[1] for l2 in norm.letters):
            beyond.add(w)
    beyond = sorted(beyond)
    assert len(beyond) == t.q, 'expected %d vertices beyond the edge' % t.q
    return beyond, edge


def _back_label(t, norm, w, edge):
    """Label of the chamber {w} + edge at w"""
    ends = set(edge)
    for x, y, _ in sorted(t.triples):
        if set([norm.push(w, (x, -1)), norm.push(w, (y, 1))]) == ends:
            return x, y
    raise AssertionError('edge is not opposite %r' % (w,))


def _admissible(t, back):
    """Labels of chambers opposite the back chamber in the residue"""
    plane = t.plane
    bx, by = back
    out = [(x, y) for x, y, _ in sorted(t.triples)
           if not plane.on_lambda(y, bx) and not plane.on_lambda(by, x)]
    assert len(out) == t.q ** 3, 'expected q^3 opposite chambers'
    return out


def _refinements(t, norm, label, cache):
    """(b, admissible labels at b) for the vertices b beyond the chamber
    (e, label).  Left translation carries them to any chamber with the
    same label."""
    if label not in cache:
        beyond, edge = _beyond(t, norm, (), label)
        cache[label] = [(w, _admissible(t, _back_label(t, norm, w, edge)))
                        for w in beyond]
    return cache[label]


def _piece_mass(q, v):
    """Measure of the cylinder of a chamber pointing away from e at v"""
    m, n = shape(v)
    return Fraction(q, n_mn(q, m + 1, n + 1))


def build_k_map(b, x, y, stages):
    """Stage-wise matching of Omega_x^C onto Omega_y^D, C and D the least
    chambers at x and y pointing away from e.

    A stage refines every unmatched pair of chambers (x_k, C_k),
    (y_k, D_k).  The q vertices beyond the far edge of C_k are paired in
    order with those beyond D_k, each carrying q^3 chambers that point
    away from e.  Chambers with a common label are matched by
    g = y_{k+1} x_{k+1}^-1 and the others are paired in label order for
    the next stage.

    unmatched_fraction is measured from the masses matched;
    law_fraction is ((alpha-1)/alpha)^stages.
    """
    t = b.t
    q = t.q
    a = alpha(q)
    if q == 2:
        raise Unsupported('boundary maps need q >= 3')
    if 2 * q ** 3 <= a:
        raise NoMatch('2q^3 = %d does not exceed %d' % (2 * q ** 3, a))
    if stages < 0:
        raise ValueError('number of stages must not be negative')
    norm = b.normalizer
    x = norm.normalize(x)
    y = norm.normalize(y)
    if shape(x) != shape(y):
        raise ValueError('%s and %s lie in different coordinate classes' %
                         (shape(x), shape(y)))
    for v in (x, y):
        if v not in b.index:
            raise TooShallow('%s is outside the radius %d ball' %
                             (format_word(v), b.radius))
    total = _piece_mass(q, x)
    pieces = [(x, _forward_labels(t, norm, x)[0], y, _forward_labels(t, norm, y)[0])]
    cache = {}
    used_src, used_dst = set(), set()
    disjoint = True
    source_mass = target_mass = Fraction(0)
    stage_list = []
    for k in range(1, stages + 1):
        matches = []
        matched = Fraction(0)
        rest = []
        for xs, cs, ys, ds in pieces:
            for (bx, A), (by, B) in zip(_refinements(t, norm, cs, cache),
                                        _refinements(t, norm, ds, cache)):
                x1 = norm.multiply(xs, bx)
                y1 = norm.multiply(ys, by)
                common = set(A) & set(B)
                if not common:
                    raise NoMatch('no common chamber at stage %d' % k)
                g = norm.multiply(y1, inverse(x1))
                for c in common:
                    for used, key in ((used_src, (x1, c)), (used_dst, (y1, c))):
                        if key in used:
                            disjoint = False
                        used.add(key)
                mass = len(common) * _piece_mass(q, x1)
                matches.append(KMapMatch(x1, y1, g, tuple(sorted(common)), mass))
                matched += mass
                target_mass += len(common) * _piece_mass(q, y1)
                if k < stages:
                    rest.extend((x1, c, y1, d) for c, d in
                                zip([c for c in A if c not in common],
                                    [d for d in B if d not in common]))
        source_mass += matched
        stage_list.append(KMapStage(k, matches, matched, 1 - source_mass / total))
        _logger.debug('stage %d: %d matches, %d pieces left', k, len(matches), len(rest))
        pieces = rest
    return PartialBoundaryMap(x, y, stage_list, 1 - source_mass / total,
                              Fraction(a - 1, a) ** stages,
                              source_mass, target_mass, disjoint)


def verify_k_map(b, kmap):
    """True if every match sends its source chambers onto chambers at the
    target vertex, all pointing away from e, with equal masses on both
    sides and no piece used twice"""
    t = b.t
    norm = b.normalizer
    for stage in kmap.stages:
        for match in stage.matches:
            x1, y1, g = match.source_vertex, match.target_vertex, match.element
            if shape(x1) != shape(y1) or norm.multiply(g, x1) != y1:
                return False
            ahead = set(_forward_labels(t, norm, x1)) & set(_forward_labels(t, norm, y1))
            for c in match.chambers:
                if c not in ahead:
                    return False
                image = frozenset(norm.multiply(g, v)
                                  for v in _chamber_vertices(norm, x1, c))
                if image != _chamber_vertices(norm, y1, c):
                    return False
    return kmap.disjoint and kmap.source_mass == kmap.target_mass


def kmap_transitivity(b, m, n, stages=1):
    """Directed graph on V_e^{m,n}: x -> y when a k-map from x to y is
    built and verified.

    Returns (graph, strongly connected)."""
    members = sorted(b.words[v] for v in b.sphere(m + n) if shape(b.words[v]) == (m, n))
    graph = nx.DiGraph()
    graph.add_nodes_from(members)
    for x in members:
        for y in members:
            if x == y:
                continue
            try:
                kmap = build_k_map(b, x, y, stages)
            except NoMatch:
                continue
            if kmap.source_mass > 0 and verify_k_map(b, kmap):
                graph.add_edge(x, y, unmatched=kmap.unmatched_fraction)
    connected = len(members) > 0 and nx.is_strongly_connected(graph)
    return graph, connected


def wall_cylinder_split(b, u):
    """Refinements of Omega_e^u, u on a wall (coordinates (m,0)), one
    step deeper, grouped by the chamber of the sector on the last wall
    edge.  Returns (groups, mass of the refinements)."""
    t = b.t
    norm = b.normalizer
    u = norm.normalize(u)
    m, n = shape(u)
    if m < 1 or n != 0:
        raise ValueError('%s is not on the positive wall' % (shape(u),))
    groups = {}
    total = Fraction(0)
    for z in range(t.n):
        w = norm.push(u, (z, -1))
        if shape(w) != (m, 1):
            continue
        hull = apartment.hull_fill(t, (), w)
        groups.setdefault(hull.word(m - 1, 1), []).append(w)
        total += cylinder_measure(t.q, m, 1).value
    return groups, total


def amenability_support_count(b, window, i):
    """Vertices g of a sector window based at e with |g| <= i-1"""
    depth = window.info.get('depth')
    if depth is None:
        i0, i1, j0, j1 = window.bounds()
        depth = min(i1, j1)
    if i < 1:
        raise ValueError('index must be positive')
    if depth < i - 1:
        raise PrefixTooShallow('sector prefix of depth %d, need %d' % (depth, i - 1))
    return sum(1 for word in window.words().values() if word_length(b, word) <= i - 1)


def freeness_scan(b, g, depth, windows=None):
    """Sector windows S at e of the given depth whose sub-sector of depth
    depth-|g| is carried by g onto a sub-sector of S pointing the same
    way, i.e. by one shift (r,s) with r,s >= 0.  Each witness records
    whether the labels of that sub-sector repeat under the shift.

    Placements of the sub-sector inside S by any other map are not
    witnesses; they are only counted in the log.
    """
    norm = b.normalizer
    g = norm.normalize(g)
    if not g:
        raise TrivialElement('the identity fixes every boundary point')
    size = word_length(b, g)
    if depth <= size:
        raise DepthTooSmall('depth %d does not exceed |g| = %d' % (depth, size))
    inner = depth - size
    if windows is None:
        windows = apartment.enumerate_sector_windows(b.t, depth)
    memo = {}
    witnesses = []
    placed = 0
    for index, w in enumerate(windows):
        words = w.words()
        where = dict((word, p) for p, word in words.items())
        shifts = set()
        for p, word in words.items():
            if p[0] + p[1] > inner:
                continue
            image = memo.get(word)
            if image is None:
                image = norm.multiply(g, word)
                memo[word] = image
            target = where.get(image)
            if target is None:
                shifts = None
                break
            shifts.add((target[0] - p[0], target[1] - p[1]))
        if shifts is None:
            continue
        placed += 1
        if len(shifts) != 1:
            continue
        shift = shifts.pop()
        if shift[0] < 0 or shift[1] < 0:
            continue
        witnesses.append(FreenessWitness(index, shift,
                                         witness_labels_agree(w, shift, inner)))
    _logger.debug('freeness scan of %d letters at depth %d: %d witnesses, '
                  '%d other placements', size, depth, len(witnesses),
                  placed - len(witnesses))
    return witnesses


def witness_labels_agree(window, shift, inner):
    """Edge labels of the inner sub-sector {i+j <= inner} equal those at
    the points shifted by shift"""
    r, s = shift
    for labels in (window.h, window.v):
        for (i, j), x in labels.items():
            if i + j + 1 > inner:
                continue
            if labels.get((i + r, j + s)) != x:
                return False
    return True
