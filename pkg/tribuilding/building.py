#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Balls in the Cayley graph of the group of a triangle presentation.

Group elements are words of letters (x, 1) for a_x and (x, -1) for its
inverse.  Every element has a unique normal form

    a_{x_1} ... a_{x_m} a_{y_1}^-1 ... a_{y_n}^-1

with x_{i+1} not on lam(x_i), y_i not on lam(y_{i+1}) and x_m != y_1.
It is a geodesic and (m, n) are the sector coordinates of the element
seen from e.  Appending a letter to a normal form is done by a small
stack machine built from the relations a_x a_y a_z = e:

    a_x a_y        = a_z^-1            (x,y,z) in T
    a_y^-1 a_x^-1  = a_z               (x,y,z) in T
    a_y^-1 a_z     = a_v a_t^-1        y != z, see swap_np
"""

import threading
from collections import namedtuple, Counter, OrderedDict

import networkx as nx

from . import tblogging
from .presentation import validate, InvalidPresentation


_logger = tblogging.create_module_logger('building')

DEFAULT_REWRITE_BUDGET = 100000
MEMO_LIMIT = 200000
SHARED_NORMALIZERS = 8


class BudgetExceeded(Exception):
    """Raised when a normalization needs more rewrite steps than allowed"""
    def __init__(self, message):
        Exception.__init__(self, message)


class BoundaryVertex(Exception):
    """Raised when a vertex is too close to the edge of the ball"""
    def __init__(self, message):
        Exception.__init__(self, message)


class OutOfBall(Exception):
    """Raised when a vertex or geodesic leaves the ball"""
    def __init__(self, message):
        Exception.__init__(self, message)


def inverse(word):
    """Inverse of a word"""
    return tuple((x, -s) for x, s in reversed(word))


def shape(word):
    """(number of positive letters, number of negative letters)"""
    pos = sum(1 for _, s in word if s > 0)
    return pos, len(word) - pos


def vertex_type(word):
    """Type in Z/3: right multiplication by a_x raises it by one"""
    pos, neg = shape(word)
    return (pos - neg) % 3


def format_word(word):
    """a3.A5 stands for a_3 a_5^-1; the empty word is e"""
    if not word:
        return 'e'
    return '.'.join(('a%d' if s > 0 else 'A%d') % x for x, s in word)


def parse_word(text):
    """Inverse of format_word()"""
    text = text.strip()
    if text in ('', 'e'):
        return ()
    word = []
    for token in text.split('.'):
        token = token.strip()
        if len(token) < 2 or token[0] not in 'aA' or not token[1:].isdigit():
            raise ValueError('bad letter %s in word %s' % (repr(token), repr(text)))
        word.append((int(token[1:]), 1 if token[0] == 'a' else -1))
    return tuple(word)


class Normalizer(object):
    """Rewriting to normal form for one triangle presentation"""

    def __init__(self, t, budget=DEFAULT_REWRITE_BUDGET):
        self.t = t
        self.plane = t.plane
        self.n = t.n
        self.third = t.table
        self.budget = budget
        self.memo = {}
        self.swap_np = {}
        for y in range(self.n):
            for z in range(self.n):
                if y == z:
                    continue
                w0 = self.plane.lambda_join(y, z)
                self.swap_np[(y, z)] = (self.third[(w0, y)], self.third[(w0, z)])
        self.swap_pn = dict((vt, yz) for yz, vt in self.swap_np.items())
        self.letters = tuple([(x, 1) for x in range(self.n)] +
                             [(x, -1) for x in range(self.n)])

    def push(self, word, letter):
        """Normal form of word * letter, word already normal"""
        stack = list(word)
        pending = [letter]
        steps = 0
        while pending:
            steps += 1
            if steps > self.budget:
                raise BudgetExceeded('more than %d rewrite steps appending %s to %s' %
                                     (self.budget, repr(letter), format_word(word)))
            z, sign = pending.pop()
            top = stack[-1] if stack else None
            if sign < 0:
                if top is not None and top[1] < 0 and self.plane.on_lambda(top[0], z):
                    stack.pop()
                    pending.append((self.third[(z, top[0])], 1))
                elif top is not None and top[1] > 0 and top[0] == z:
                    stack.pop()
                else:
                    stack.append((z, -1))
            else:
                if top is not None and top[1] < 0:
                    stack.pop()
                    if top[0] != z:
                        v, t = self.swap_np[(top[0], z)]
                        pending.append((t, -1))
                        pending.append((v, 1))
                elif top is not None and self.plane.on_lambda(z, top[0]):
                    stack.pop()
                    pending.append((self.third[(top[0], z)], -1))
                else:
                    stack.append((z, 1))
        return tuple(stack)

    def normalize(self, word):
        """Normal form of an arbitrary word"""
        word = tuple(word)
        cached = self.memo.get(word)
        if cached is not None:
            return cached
        result = ()
        for letter in word:
            result = self.push(result, letter)
        if len(self.memo) > MEMO_LIMIT:
            self.memo.clear()
        self.memo[word] = result
        return result

    def multiply(self, g, h):
        """Normal form of g h, g already normal"""
        for letter in h:
            g = self.push(g, letter)
        return g

    def is_normal(self, word):
        """True if word has the shape of a normal form"""
        pos, neg = shape(word)
        if any(s < 0 for _, s in word[:pos]) or any(s > 0 for _, s in word[pos:]):
            return False
        for (a, _), (b, _) in zip(word[:pos], word[1:pos]):
            if self.plane.on_lambda(b, a):
                return False
        for (a, _), (b, _) in zip(word[pos:], word[pos + 1:]):
            if self.plane.on_lambda(a, b):
                return False
        if pos and neg and word[pos - 1][0] == word[pos][0]:
            return False
        return True


_normalizers = OrderedDict()
_normalizers_lock = threading.Lock()


def normalizer_for(t, budget=DEFAULT_REWRITE_BUDGET):
    """Shared Normalizer per (presentation, budget); the least recently
    used one is dropped once SHARED_NORMALIZERS are held"""
    key = (t, budget)
    with _normalizers_lock:
        normalizer = _normalizers.pop(key, None)
        if normalizer is None:
            normalizer = Normalizer(t, budget)
        _normalizers[key] = normalizer
        while len(_normalizers) > SHARED_NORMALIZERS:
            _normalizers.popitem(last=False)
        return normalizer


def normalize(word, t, budget=DEFAULT_REWRITE_BUDGET):
    """Normal form of word in the group of t"""
    return normalizer_for(t, budget).normalize(word)


Chamber = namedtuple('Chamber', ['vertices', 'pair'])


class _LevelWorker(threading.Thread):
    """Computes the neighbours of a slice of one BFS level"""
    def __init__(self, normalizer, words):
        threading.Thread.__init__(self)
        self.normalizer = normalizer
        self.words = words
        self.results = []

    def run(self):
        push = self.normalizer.push
        letters = self.normalizer.letters
        self.results = [[push(w, letter) for letter in letters]
                        for w in self.words]


class BuildingBall(object):
    """The radius r ball around e.

    words[i]        normal form of vertex i (ids are BFS ordinals)
    dist[i]         distance from e
    vtype[i]        type in Z/3
    neighbors[i]    letter -> id, for neighbours inside the ball
    edges           (u, x, v) with v = u a_x
    chambers        Chamber(vertices, (x, y)) = {g, g a_x^-1, g a_y}
    """

    def __init__(self, t, radius, normalizer):
        self.t = t
        self.q = t.q
        self.radius = radius
        self.normalizer = normalizer
        self.words = []
        self.index = {}
        self.dist = []
        self.vtype = []
        self.neighbors = []
        self.edges = []
        self.chambers = []
        self.chambers_at = []
        self._rim = None

    def __len__(self):
        return len(self.words)

    def _add(self, word, dist):
        vid = len(self.words)
        self.words.append(word)
        self.index[word] = vid
        self.dist.append(dist)
        self.vtype.append(vertex_type(word))
        self.neighbors.append({})
        self.chambers_at.append([])
        return vid

    def vertex_id(self, word):
        """Id of the element represented by word (any word)"""
        vid = self.index.get(self.normalizer.normalize(word))
        if vid is None:
            raise OutOfBall('%s is not in the radius %d ball' %
                            (format_word(word), self.radius))
        return vid

    def contains(self, word):
        return self.normalizer.normalize(word) in self.index

    def sphere(self, d):
        """Ids at distance d"""
        return [i for i, di in enumerate(self.dist) if di == d]

    def rim(self):
        """sphere(radius), computed once"""
        if self._rim is None:
            self._rim = self.sphere(self.radius)
        return self._rim

    def sphere_sizes(self):
        sizes = Counter(self.dist)
        return [sizes[d] for d in range(self.radius + 1)]

    def _build_chambers(self):
        seen = set()
        for g, word in enumerate(self.words):
            for x, y, _ in sorted(self.t.triples):
                a = self.index.get(self.normalizer.push(word, (x, -1)))
                b = self.index.get(self.normalizer.push(word, (y, 1)))
                if a is None or b is None:
                    continue
                key = frozenset((g, a, b))
                if key in seen:
                    continue
                seen.add(key)
                cid = len(self.chambers)
                self.chambers.append(Chamber((g, a, b), (x, y)))
                for v in (g, a, b):
                    self.chambers_at[v].append(cid)

    def edge_thickness(self, max_dist=None):
        """Number of chambers on each edge with both ends within
        max_dist of e (default radius - 1)"""
        if max_dist is None:
            max_dist = self.radius - 1
        counts = {}
        for u, _, v in self.edges:
            if self.dist[u] <= max_dist and self.dist[v] <= max_dist:
                counts[(u, v)] = len(set(self.chambers_at[u]) &
                                     set(self.chambers_at[v]))
        return counts

    def to_graph(self):
        """Directed labelled graph of the ball"""
        graph = nx.DiGraph()
        for vid, word in enumerate(self.words):
            graph.add_node(vid, word=format_word(word), type=self.vtype[vid],
                           distance=self.dist[vid])
        for u, x, v in self.edges:
            graph.add_edge(u, v, label=x)
        return graph


def ball(t, radius, budget=DEFAULT_REWRITE_BUDGET, threads=1):
    """Breadth first construction of the radius ball around e.

    Generators are tried in the order a_0 .. a_{n-1}, a_0^-1 .. a_{n-1}^-1,
    so ids are reproducible.  Neighbour computation of a level may be
    spread over threads; ids are committed serially.
    """
    report = validate(t)
    if not report.passed:
        raise InvalidPresentation('presentation fails validation: %s' %
                                  repr(report.violations[:3]))
    if radius < 0:
        raise ValueError('radius must be nonnegative')
    normalizer = normalizer_for(t, budget)
    b = BuildingBall(t, radius, normalizer)
    b._add((), 0)
    frontier = [0]
    for d in range(radius + 1):
        ids = list(frontier)
        words = [b.words[i] for i in ids]
        if threads > 1 and len(words) > threads:
            chunk = (len(words) + threads - 1) // threads
            workers = [_LevelWorker(normalizer, words[k:k + chunk])
                       for k in range(0, len(words), chunk)]
            for worker in workers:
                worker.start()
            for worker in workers:
                worker.join()
            images = [row for worker in workers for row in worker.results]
        else:
            worker = _LevelWorker(normalizer, words)
            worker.run()
            images = worker.results
        frontier = []
        for u, row in zip(ids, images):
            for letter, word in zip(normalizer.letters, row):
                v = b.index.get(word)
                if v is None:
                    if d == radius:
                        continue
                    v = b._add(word, d + 1)
                    frontier.append(v)
                b.neighbors[u][letter] = v
                if letter[1] > 0:
                    b.edges.append((u, letter[0], v))
        _logger.debug('ball level %d: %d vertices', d, len(ids))
    b.edges.sort()
    b._build_chambers()
    _logger.info('ball of radius %d: %d vertices, %d edges, %d chambers',
                 radius, len(b), len(b.edges), len(b.chambers))
    return b


def link(b, v):
    """Neighbours of v as a bipartite graph, adjacent when they span a
    chamber with v.  Node ('p', x) is v a_x, node ('l', lam(x)) is
    v a_x^-1."""
    if b.dist[v] > b.radius - 1:
        raise BoundaryVertex('vertex %d at distance %d is on the edge of a '
                             'radius %d ball' % (v, b.dist[v], b.radius))
    plane = b.t.plane
    name = {}
    graph = nx.Graph()
    for letter, w in b.neighbors[v].items():
        x, s = letter
        node = ('p', x) if s > 0 else ('l', plane.lam[x])
        name[w] = node
        graph.add_node(node, bipartite=0 if s > 0 else 1, vertex=w)
    for cid in b.chambers_at[v]:
        others = [w for w in b.chambers[cid].vertices if w != v]
        graph.add_edge(name[others[0]], name[others[1]])
    return graph


def link_is_plane(b, v):
    """True if the link of v is isomorphic to the incidence graph"""
    return nx.is_isomorphic(link(b, v), b.t.plane.incidence_graph())


def word_length(b, word):
    """|g| from the BFS distances of the ball.

    Outside the ball a geodesic from e to g leaves through some v on
    sphere(radius), so |g| = radius + min |v^-1 g| over those v with
    v^-1 g in the ball.  Lengths up to twice the radius are reached.
    """
    norm = b.normalizer
    nf = norm.normalize(word)
    vid = b.index.get(nf)
    if vid is not None:
        return b.dist[vid]
    best = None
    for v in b.rim():
        rest = b.index.get(norm.multiply(inverse(b.words[v]), nf))
        if rest is not None and (best is None or b.dist[rest] < best):
            best = b.dist[rest]
    if best is None:
        raise OutOfBall('%s is longer than %d, twice the radius' %
                        (format_word(nf), 2 * b.radius))
    return b.radius + best


def distance(b, u, v):
    """Graph distance between two vertices of the ball"""
    for w in (u, v):
        if w < 0 or w >= len(b):
            raise OutOfBall('no vertex %d in the ball' % w)
    if u == v:
        return 0
    g = b.normalizer.multiply(inverse(b.words[u]), b.words[v])
    return word_length(b, g)


def geodesic_hull(b, u):
    """Vertices on geodesics from e to u (ids)"""
    hull = set([u])
    frontier = [u]
    while frontier:
        nxt = []
        for w in frontier:
            for p in b.neighbors[w].values():
                if b.dist[p] == b.dist[w] - 1 and p not in hull:
                    hull.add(p)
                    nxt.append(p)
        frontier = nxt
    return hull


def coordinates(b, u):
    """(m, n) with u = a_{m,n} in a sector based at e.

    Counts positive steps along geodesics inside the hull of {e, u};
    all geodesics must agree and the hull must be an (m+1)x(n+1)
    parallelogram.
    """
    if u < 0 or u >= len(b):
        raise OutOfBall('no vertex %d in the ball' % u)
    hull = geodesic_hull(b, u)
    pos = {0: 0}
    for w in sorted(hull, key=lambda i: (b.dist[i], i)):
        if w == 0:
            continue
        counts = set()
        for p in b.neighbors[w].values():
            if p in hull and b.dist[p] == b.dist[w] - 1:
                step = (b.vtype[w] - b.vtype[p]) % 3
                counts.add(pos[p] + (1 if step == 1 else 0))
        assert len(counts) == 1, 'inconsistent geodesic hull at %d' % w
        pos[w] = counts.pop()
    m = pos[u]
    n = b.dist[u] - m
    assert len(hull) == (m + 1) * (n + 1), 'hull of %d is not a parallelogram' % u
    assert (m, n) == shape(b.words[u])
    return m, n


def sphere_classes(b, d):
    """Counter of coordinates over sphere(d)"""
    return Counter(coordinates(b, u) for u in b.sphere(d))


def generate_gml(b):
    """Lines of the GML export of the ball"""
    return nx.generate_gml(b.to_graph())
