#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Finite fields GF(q) and the Desarguesian projective plane PG(2,q).

Field elements are small integers: the element with index a stands
for the polynomial whose coefficients are the base-p digits of a
(lowest degree first).  Points and lines of the plane are normalized
homogeneous triples (first nonzero coordinate 1) numbered in
lexicographic order; a line with coefficient vector (a,b,c) holds the
points (x:y:z) with ax+by+cz = 0.
"""

import itertools

import numpy as np
import networkx as nx

from . import tblogging


_logger = tblogging.create_module_logger('gfq')


SUPPORTED_ORDERS = (2, 3, 4, 5, 7, 8, 9)

# q -> (p, k, monic irreducible polynomial of degree k over GF(p),
# coefficients lowest degree first)
IRREDUCIBLE_POLYNOMIALS = {
    4: (2, 2, (1, 1, 1)),       # x^2 + x + 1
    8: (2, 3, (1, 1, 0, 1)),    # x^3 + x + 1
    9: (3, 2, (1, 0, 1)),       # x^2 + 1
}


class UnsupportedOrder(Exception):
    """Raised for field orders outside SUPPORTED_ORDERS"""
    def __init__(self, message):
        Exception.__init__(self, message)


class InvalidLambda(Exception):
    """Raised when a point-line correspondence is not a bijection"""
    def __init__(self, message):
        Exception.__init__(self, message)


class NotIncident(Exception):
    """Raised when a flag is requested for a non incident point/line"""
    def __init__(self, message):
        Exception.__init__(self, message)


def _digits(a, p, k):
    """Base-p digits of a, lowest first, padded to k"""
    out = []
    for _ in range(k):
        out.append(a % p)
        a //= p
    return out


def _undigits(digits, p):
    return sum(d * p ** i for i, d in enumerate(digits))


def _poly_mulmod(a, b, p, modulus):
    """Multiply two coefficient lists over GF(p) modulo a monic modulus"""
    k = len(modulus) - 1
    prod = [0] * (2 * k - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            prod[i + j] = (prod[i + j] + ai * bj) % p
    for deg in range(len(prod) - 1, k - 1, -1):
        coef = prod[deg]
        if coef:
            for i, mi in enumerate(modulus):
                prod[deg - k + i] = (prod[deg - k + i] - coef * mi) % p
    return prod[:k]


class FiniteField(object):
    """GF(q) given by its addition and multiplication tables"""

    def __init__(self, q, characteristic, add_table, mul_table):
        self.q = q
        self.characteristic = characteristic
        self.add_table = add_table
        self.mul_table = mul_table
        self.zero = 0
        self.one = 1
        self.neg_table = np.array([int(np.where(add_table[a] == 0)[0][0])
                                   for a in range(q)], dtype=int)
        inv = [0] * q
        for a in range(1, q):
            inv[a] = int(np.where(mul_table[a] == 1)[0][0])
        self.inv_table = np.array(inv, dtype=int)

    def __repr__(self):
        return 'GF(%d)' % self.q

    def add(self, a, b):
        return int(self.add_table[a, b])

    def sub(self, a, b):
        return int(self.add_table[a, self.neg_table[b]])

    def mul(self, a, b):
        return int(self.mul_table[a, b])

    def neg(self, a):
        return int(self.neg_table[a])

    def inv(self, a):
        """Multiplicative inverse; a must be nonzero"""
        if a == 0:
            raise ZeroDivisionError('0 has no inverse in %r' % self)
        return int(self.inv_table[a])

    def dot(self, u, v):
        """Bilinear form sum(u_i * v_i)"""
        acc = 0
        for a, b in zip(u, v):
            acc = self.add_table[acc, self.mul_table[a, b]]
        return int(acc)

    def check_axioms(self):
        """Exhaustive field axiom check, returns a list of failed axioms"""
        q = self.q
        add, mul = self.add_table, self.mul_table
        failed = []
        elems = range(q)
        if not (np.array_equal(add, add.T) and np.array_equal(mul, mul.T)):
            failed.append('commutativity')
        for a, b, c in itertools.product(elems, elems, elems):
            if add[add[a, b], c] != add[a, add[b, c]]:
                failed.append('additive associativity')
                break
            if mul[mul[a, b], c] != mul[a, mul[b, c]]:
                failed.append('multiplicative associativity')
                break
            if mul[a, add[b, c]] != add[mul[a, b], mul[a, c]]:
                failed.append('distributivity')
                break
        if any(add[0, a] != a or mul[1, a] != a for a in elems):
            failed.append('identities')
        if any(add[a, self.neg_table[a]] != 0 for a in elems):
            failed.append('additive inverses')
        if any(mul[a, self.inv_table[a]] != 1 for a in range(1, q)):
            failed.append('multiplicative inverses')
        return failed


def _prime_power(q):
    """(p, k) with q = p**k, or None"""
    for p in range(2, q + 1):
        if q % p == 0:
            k, rest = 0, q
            while rest % p == 0:
                rest //= p
                k += 1
            return (p, k) if rest == 1 else None
    return None


def make_field(q):
    """Build GF(q) for q in SUPPORTED_ORDERS"""
    if q not in SUPPORTED_ORDERS:
        raise UnsupportedOrder('GF(%s) is not supported (choose one of %s)' %
                               (q, ', '.join(str(o) for o in SUPPORTED_ORDERS)))
    p, k = _prime_power(q)
    add = np.zeros((q, q), dtype=int)
    mul = np.zeros((q, q), dtype=int)
    if k == 1:
        elems = np.arange(q)
        add[:, :] = np.add.outer(elems, elems) % q
        mul[:, :] = np.multiply.outer(elems, elems) % q
    else:
        _, _, modulus = IRREDUCIBLE_POLYNOMIALS[q]
        for a in range(q):
            da = _digits(a, p, k)
            for b in range(q):
                db = _digits(b, p, k)
                add[a, b] = _undigits([(x + y) % p for x, y in zip(da, db)], p)
                mul[a, b] = _undigits(_poly_mulmod(da, db, p, modulus), p)
    return FiniteField(q, p, add, mul)


class ProjectivePlane(object):
    """PG(2,q) with a point-line correspondence lam.

    points[i], lines[j]   normalized homogeneous triples
    incidence[i, j]       point i lies on line j
    line_points[j]        frozenset of points on line j
    point_lines[i]        frozenset of lines through point i
    lam[i]                line index of lambda(point i)
    """

    def __init__(self, field, points, lines, incidence, lam):
        self.field = field
        self.q = field.q
        self.n = len(points)
        self.points = points
        self.lines = lines
        self.incidence = incidence
        self.point_index = dict((pt, i) for i, pt in enumerate(points))
        self.line_points = [frozenset(int(i) for i in np.nonzero(incidence[:, j])[0])
                            for j in range(self.n)]
        self.point_lines = [frozenset(int(j) for j in np.nonzero(incidence[i, :])[0])
                            for i in range(self.n)]
        self.line_index = dict((pts, j) for j, pts in enumerate(self.line_points))
        self._set_lambda(lam)

    def _set_lambda(self, lam):
        lam = tuple(int(l) for l in lam)
        if len(lam) != self.n or sorted(lam) != list(range(self.n)):
            raise InvalidLambda('lambda %s is not a bijection of %d elements' %
                                (repr(lam), self.n))
        self.lam = lam
        lam_inv = [0] * self.n
        for x, l in enumerate(lam):
            lam_inv[l] = x
        self.lam_inv = tuple(lam_inv)
        self.lam_sets = [self.line_points[l] for l in lam]

    def with_lambda(self, lam):
        """Same geometry, another correspondence"""
        return ProjectivePlane(self.field, self.points, self.lines,
                               self.incidence, lam)

    def on_lambda(self, y, x):
        """True if point y is incident to lambda(x)"""
        return y in self.lam_sets[x]

    def incident(self, point, line):
        return bool(self.incidence[point, line])

    def join(self, p1, p2):
        """The line through two distinct points"""
        common = self.point_lines[p1] & self.point_lines[p2]
        assert p1 != p2 and len(common) == 1
        return next(iter(common))

    def meet(self, l1, l2):
        """The point on two distinct lines"""
        common = self.line_points[l1] & self.line_points[l2]
        assert l1 != l2 and len(common) == 1
        return next(iter(common))

    def lambda_join(self, p1, p2):
        """The point w with lambda(w) through p1 and p2"""
        return self.lam_inv[self.join(p1, p2)]

    def check_axioms(self):
        """Exhaustive incidence axiom check, returns a list of failures"""
        q, n = self.q, self.n
        failed = []
        if n != q * q + q + 1:
            failed.append('point count %d' % n)
        if any(len(s) != q + 1 for s in self.line_points):
            failed.append('points per line')
        if any(len(s) != q + 1 for s in self.point_lines):
            failed.append('lines per point')
        for a, b in itertools.combinations(range(n), 2):
            if len(self.point_lines[a] & self.point_lines[b]) != 1:
                failed.append('join of points %d %d' % (a, b))
                break
            if len(self.line_points[a] & self.line_points[b]) != 1:
                failed.append('meet of lines %d %d' % (a, b))
                break
        return failed

    def flag_count(self):
        return int(self.incidence.sum())

    def incidence_graph(self):
        """Bipartite point-line incidence graph"""
        graph = nx.Graph()
        graph.add_nodes_from((('p', i) for i in range(self.n)), bipartite=0)
        graph.add_nodes_from((('l', j) for j in range(self.n)), bipartite=1)
        for i in range(self.n):
            for j in self.point_lines[i]:
                graph.add_edge(('p', i), ('l', j))
        return graph

    def to_document(self):
        """The plane as plain data, for export"""
        return {
            'q': self.q,
            'points': [list(pt) for pt in self.points],
            'lines': [list(ln) for ln in self.lines],
            'incidence': [''.join('1' if b else '0' for b in row)
                          for row in self.incidence],
            'lambda': list(self.lam),
        }


def _normalized_triples(field):
    """All triples whose first nonzero coordinate is 1, lexicographic"""
    return [t for t in itertools.product(range(field.q), repeat=3)
            if next(c for c in t + (1,) if c != 0) == 1 and any(t)]


def _normalize(field, vec):
    lead = next(c for c in vec if c != 0)
    inv = field.inv(lead)
    return tuple(field.mul(inv, c) for c in vec)


def parse_lambda(text):
    """A permutation written as space separated line indices"""
    try:
        return [int(tok) for tok in text.split()]
    except ValueError:
        raise InvalidLambda('lambda %s is not a list of line indices' % repr(text.strip()))


def make_plane(field, lambda_spec='standard'):
    """Build PG(2,q) over field.

    lambda_spec is 'standard' (point (a:b:c) to the line with
    coefficients (a,b,c)), 'cyclic:<b>' (a Singer cycle correspondence)
    or an explicit permutation (sequence of line indices).
    """
    points = _normalized_triples(field)
    lines = list(points)
    n = len(points)
    incidence = np.zeros((n, n), dtype=bool)
    for i, pt in enumerate(points):
        for j, ln in enumerate(lines):
            incidence[i, j] = field.dot(pt, ln) == 0
    plane = ProjectivePlane(field, points, lines, incidence, range(n))
    if isinstance(lambda_spec, str):
        if lambda_spec == 'standard':
            return plane
        if lambda_spec.startswith('cyclic:'):
            shift = int(lambda_spec[len('cyclic:'):])
            return plane.with_lambda(cyclic_lambda(singer_cycle(plane), shift))
        raise InvalidLambda('Unknown lambda descriptor %s' % repr(lambda_spec))
    return plane.with_lambda(lambda_spec)


class SingerCycle(object):
    """A collineation of order q^2+q+1, regular on points and on lines.

    P_k = sigma^k(P_0), L_j = sigma^j(L_0) with P_0, L_0 the first point
    and line.  difference_set holds D = {k : P_k on L_0}, a perfect
    difference set modulo n.
    """
    def __init__(self, polynomial, point_order, line_order, difference_set):
        self.polynomial = polynomial
        self.n = len(point_order)
        self.point_order = point_order
        self.point_exponent = dict((p, k) for k, p in enumerate(point_order))
        self.line_order = line_order
        self.line_exponent = dict((l, k) for k, l in enumerate(line_order))
        self.difference_set = difference_set


def singer_cycle(plane):
    """First companion matrix (in lexicographic order of (c0,c1,c2))
    whose projectivity cycles all points"""
    field = plane.field
    n = plane.n
    for c0, c1, c2 in itertools.product(range(field.q), repeat=3):
        if c0 == 0:
            continue
        # columns of x^3 = c0 + c1 x + c2 x^2
        def apply(pt, c0=c0, c1=c1, c2=c2):
            x, y, z = pt
            image = (field.mul(c0, z),
                     field.add(x, field.mul(c1, z)),
                     field.add(y, field.mul(c2, z)))
            return _normalize(field, image)

        orbit = [0]
        pt = plane.points[0]
        for _ in range(n):
            pt = apply(pt)
            idx = plane.point_index[pt]
            if idx == 0:
                break
            orbit.append(idx)
        if len(orbit) != n:
            continue
        sigma = dict((orbit[k], orbit[(k + 1) % n]) for k in range(n))
        line_order = [0]
        for _ in range(n - 1):
            image = frozenset(sigma[p] for p in plane.line_points[line_order[-1]])
            line_order.append(plane.line_index[image])
        diffs = tuple(k for k in range(n) if orbit[k] in plane.line_points[0])
        _logger.debug('Singer cycle for q=%d from x^3 = %d + %dx + %dx^2',
                      field.q, c0, c1, c2)
        return SingerCycle((c0, c1, c2), orbit, line_order, diffs)
    raise UnsupportedOrder('no Singer cycle found for q=%d' % field.q)


def cyclic_lambda(singer, shift):
    """lambda_b : P_k -> L_{k+b}"""
    n = singer.n
    lam = [0] * n
    for k in range(n):
        lam[singer.point_order[k]] = singer.line_order[(k + shift) % n]
    return lam


def lambda_differences(singer, shift):
    """E = b + D: y on lambda_b(x) iff exponent(y) - exponent(x) in E"""
    return tuple(sorted((shift + d) % singer.n for d in singer.difference_set))


def difference_triples(singer, shift):
    """Rotation closed triples (e1,e2,e3) over E summing to 0 mod n with
    every element of E first in exactly one triple, or None"""
    n = singer.n
    elems = lambda_differences(singer, shift)
    allowed = frozenset(elems)
    chosen = {}

    def orbit(e1, e2):
        e3 = (-e1 - e2) % n
        if e3 not in allowed:
            return None
        return [(e1, e2, e3), (e2, e3, e1), (e3, e1, e2)]

    def backtrack():
        free = [e for e in elems if e not in chosen]
        if not free:
            return True
        e1 = free[0]
        for e2 in elems:
            triples = orbit(e1, e2)
            if triples is None:
                continue
            added = []
            ok = True
            for t in triples:
                old = chosen.get(t[0])
                if old is None:
                    chosen[t[0]] = t
                    added.append(t[0])
                elif old != t:
                    ok = False
                    break
            if ok and backtrack():
                return True
            for key in added:
                del chosen[key]
        return False

    if backtrack():
        return sorted(set(chosen.values()))
    return None


def cyclic_triples(singer, triples):
    """Point triples (P_k, P_{k+e1}, P_{k+e1+e2}) for all k"""
    n = singer.n
    out = set()
    for k in range(n):
        for e1, e2, _ in triples:
            out.add((singer.point_order[k],
                     singer.point_order[(k + e1) % n],
                     singer.point_order[(k + e1 + e2) % n]))
    return out


def opposite_choice_counts(plane, p1, l1):
    """(number of p2 off l1, number of p3 on l1 other than p1)"""
    if not plane.incident(p1, l1):
        raise NotIncident('point %d is not on line %d' % (p1, l1))
    p2_choices = plane.n - len(plane.line_points[l1])
    p3_choices = len(plane.line_points[l1]) - 1
    return p2_choices, p3_choices


def opposite_chamber_count(plane, p1, l1):
    """Count flags {p2,l2} opposite the flag {p1,l1}: p2 off l1 and l2
    through p2 missing p1 (l2 then meets l1 at some p3 != p1)"""
    if not plane.incident(p1, l1):
        raise NotIncident('point %d is not on line %d' % (p1, l1))
    count = 0
    for p2 in range(plane.n):
        if plane.incident(p2, l1):
            continue
        for l2 in plane.point_lines[p2]:
            if plane.incident(p1, l2):
                continue
            p3 = plane.meet(l1, l2)
            assert p3 != p1
            count += 1
    return count
