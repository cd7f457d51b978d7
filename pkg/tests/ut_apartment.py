#!/usr/bin/env python

import unittest

import numpy as np

from tribuilding import gfq, presentation, building, apartment


_cache = {}


def q2_presentation():
    if 'q2' not in _cache:
        outcomes = presentation.scan_lambda_family(gfq.make_field(2), limit=1)
        _cache['q2'] = [t for o in outcomes for t in o.found][0]
    return _cache['q2']


def q2_ball():
    if 'ball' not in _cache:
        _cache['ball'] = building.ball(q2_presentation(), 3)
    return _cache['ball']


def periodic_window(periods=1):
    key = ('window', periods)
    if key not in _cache:
        _cache[key] = apartment.construct_rigidly_periodic(q2_presentation(), 1,
                                                           seed=1, periods=periods)
    return _cache[key]


class TestWindows(unittest.TestCase):
    def setUp(self):
        self.t = q2_presentation()
        self.rng = np.random.default_rng(1)

    def test_translation_length(self):
        self.assertEqual(apartment.translation_length(0, 0), 0)
        self.assertEqual(apartment.translation_length(1, 1), 2)
        self.assertEqual(apartment.translation_length(1, -1), 1)
        self.assertEqual(apartment.translation_length(2, -3), 3)
        self.assertEqual(apartment.translation_length(3, 3), 6)

    def test_random_normal_form(self):
        norm = building.normalizer_for(self.t)
        for m, n in ((0, 3), (2, 1), (3, 3)):
            g = apartment.random_normal_form(self.t, m, n, self.rng)
            self.assertEqual(building.shape(g), (m, n))
            self.assertTrue(norm.is_normal(g))
            self.assertEqual(norm.normalize(g), g)

    def test_hull(self):
        g = apartment.random_normal_form(self.t, 2, 1, self.rng)
        w = apartment.hull_fill(self.t, (), g)
        self.assertEqual(w.bounds(), (0, 2, 0, 1))
        self.assertEqual(w.bad_triangles(), [])
        self.assertEqual(w.word(0, 0), ())
        self.assertEqual(w.word(2, 1), g)
        for (i, j), word in w.words().items():
            self.assertEqual(building.shape(word), (i, j))

    def test_document(self):
        w = apartment.random_square_window(self.t, 2, self.rng)
        doc = w.to_document()
        self.assertEqual(doc['presentation'], self.t.digest())
        back = apartment.window_from_document(self.t, doc)
        self.assertEqual(back.h, w.h)
        self.assertEqual(back.v, w.v)
        self.assertEqual(back.base, w.base)

    def test_document_of_another_presentation(self):
        doc = apartment.random_square_window(self.t, 1, self.rng).to_document()
        doc['presentation'] = '0' * 40
        self.assertRaises(apartment.WindowFormatError,
                          apartment.window_from_document, self.t, doc)
        del doc['h']
        self.assertRaises(apartment.WindowFormatError,
                          apartment.window_from_document, self.t, doc)

    def test_window_too_small(self):
        g = apartment.random_normal_form(self.t, 1, 0, self.rng)
        w = apartment.hull_fill(self.t, (), g)
        self.assertRaises(apartment.WindowTooSmall,
                          apartment.periodicity_candidates, w, 1)


class TestSectors(unittest.TestCase):
    def setUp(self):
        self.t = q2_presentation()

    def test_sector_counts(self):
        self.assertEqual(len(list(apartment.enumerate_sector_windows(self.t, 1))), 21)
        self.assertEqual(len(list(apartment.enumerate_sector_windows(self.t, 2))), 21 * 8)

    def test_sector_words(self):
        b = q2_ball()
        for w in apartment.enumerate_sector_windows(self.t, 2):
            self.assertEqual(w.bad_triangles(), [])
            words = w.words()
            self.assertEqual(len(set(words.values())), len(words))
            for (i, j), word in words.items():
                self.assertEqual(building.word_length(b, word), i + j)

    def test_random_sector(self):
        w = apartment.random_sector_window(self.t, 4, np.random.default_rng(7))
        self.assertEqual(w.info['depth'], 4)
        self.assertEqual(len(w.words()), 15)
        self.assertEqual(w.bad_triangles(), [])

    def test_depth_zero(self):
        self.assertRaises(apartment.WindowTooSmall, list,
                          apartment.enumerate_sector_windows(self.t, 0))


class TestPeriodicConstruction(unittest.TestCase):
    def setUp(self):
        self.t = q2_presentation()
        self.w = periodic_window()

    def test_period(self):
        self.assertEqual(self.w.info['period'], [3, 3])
        self.assertEqual(apartment.translation_length(*self.w.info['period']), 6)
        self.assertEqual(self.w.bounds(), (-3, 6, -3, 6))
        self.assertEqual(self.w.word(0, 0), ())
        self.assertEqual(self.w.bad_triangles(), [])

    def test_translation(self):
        u = building.parse_word(self.w.info['translation'])
        self.assertEqual(self.w.element((0, 0), (3, 3)), u)
        self.assertEqual(self.w.element((-3, -3), (0, 0)), u)
        self.assertEqual(building.shape(u), (3, 3))

    def test_closing_chambers(self):
        chain = self.w.info['chain']
        b, c, c2, d, d2 = [chain[k] for k in ('b', 'c', "c'", 'd', "d'")]
        self.assertIn((b, c, d), self.t.triples)
        self.assertIn((b, c2, d2), self.t.triples)
        self.assertNotEqual(c, c2)
        self.assertNotEqual(d, d2)
        self.assertEqual((self.w.h[(-1, 0)], self.w.v[(0, -1)]), (c, d))
        self.assertEqual((self.w.h[(2, 2)], self.w.v[(2, 2)]), (d2, c2))
        # the b edges of D and D' face e and v
        a_b = building.normalize(((b, 1),), self.t)
        self.assertEqual(self.w.element((0, -1), (-1, 0)), a_b)
        self.assertEqual(self.w.element((3, 2), (2, 3)), a_b)

    def test_candidates(self):
        report = apartment.periodicity_candidates(self.w, 3, skip_empty=True)
        self.assertIn((3, 3), report.candidates)
        self.assertIn((0, 0), report.candidates)
        self.assertTrue(report.rigid)
        short = [c for c in report.candidates
                 if c != (0, 0) and apartment.translation_length(*c) < 1]
        self.assertEqual(short, [])
        self.assertTrue(apartment.minimal_period(self.w, report, q2_ball()) >= 1)

    def test_candidates_ignore_left_translation(self):
        b = q2_ball()
        report = apartment.periodicity_candidates(self.w, 3, skip_empty=True)
        period = apartment.minimal_period(self.w, report, b)
        for v in b.sphere(1)[:4] + b.sphere(2)[:4]:
            moved = self.w.translated(b.words[v])
            self.assertEqual(moved.word(0, 0), b.words[v])
            moved_report = apartment.periodicity_candidates(moved, 3, skip_empty=True)
            self.assertEqual(moved_report.candidates, report.candidates)
            self.assertEqual(apartment.minimal_period(moved, moved_report, b), period)

    def test_longer_period(self):
        w = apartment.construct_rigidly_periodic(self.t, 2, seed=1)
        self.assertEqual(w.info['period'], [4, 4])
        self.assertEqual(w.bad_triangles(), [])
        report = apartment.periodicity_candidates(w, 4, skip_empty=True)
        self.assertIn((4, 4), report.candidates)
        short = [c for c in report.candidates
                 if c != (0, 0) and apartment.translation_length(*c) < 2]
        self.assertEqual(short, [])

    def test_generic_window_has_no_period(self):
        w = apartment.random_square_window(self.t, 4, np.random.default_rng(5))
        report = apartment.periodicity_candidates(w, 2, skip_empty=True)
        self.assertEqual(report.candidates, ((0, 0),))
        self.assertEqual(report.classification, 'trivial')
        self.assertRaises(apartment.NotPeriodic, apartment.minimal_period, w, report,
                          q2_ball())

    def test_sector_classes(self):
        sector = periodic_window(periods=2).sector((0, 0), 8)
        self.assertEqual(apartment.classify_sector_periodicity(sector).kind, 'rigid')
        generic = apartment.random_sector_window(self.t, 8, np.random.default_rng(3))
        self.assertEqual(apartment.classify_sector_periodicity(generic, (2, 2)).kind,
                         'trivial')

    def test_reconstruct(self):
        self.assertEqual(apartment.reconstruct_from_sector(self.w, (3, 3)), [])

    def test_stabilizer(self):
        w = periodic_window(periods=2)
        u = building.parse_word(w.info['translation'])
        report = apartment.stabilizer_period_bound(u, w, q2_ball())
        self.assertEqual(report.symmetry, 'translation')
        self.assertEqual(report.shift, (3, 3))
        self.assertEqual(report.element_length, 6)
        self.assertTrue(report.bound_holds)

    def test_stabilizer_needs_an_interior(self):
        u = building.parse_word(self.w.info['translation'])
        self.assertRaises(apartment.WindowTooSmall, apartment.stabilizer_period_bound,
                          u, self.w, q2_ball())

    def test_short_elements_do_not_stabilize(self):
        w = periodic_window(periods=2)
        b = q2_ball()
        u = building.parse_word(w.info['translation'])
        period = apartment.stabilizer_period_bound(u, w, b).minimal_period
        for d in (1, 2):
            if 2 * d >= period:
                continue
            for v in b.sphere(d):
                self.assertRaises(apartment.NotStabilizing,
                                  apartment.stabilizer_period_bound, b.words[v], w, b)

    def test_identity_is_not_a_stabilizer(self):
        self.assertRaises(apartment.NotStabilizing, apartment.stabilizer_period_bound,
                          (), self.w, q2_ball())

    def test_second_period(self):
        w, second = apartment.construct_with_second_period(self.t, 1, seed=1)
        n = second.steps
        self.assertTrue(n > 0)
        self.assertEqual(second.shift, (n, -n))
        self.assertTrue(apartment.shift_agrees(w, n, -n))
        self.assertEqual(apartment.shift_agrees(w, 3, 3), True)
        i0, i1, _, _ = w.bounds()
        self.assertTrue(i1 - i0 > n)

    def test_narrow_window_refuses_second_period(self):
        with self.assertRaises(apartment.StripTooShort) as ctx:
            apartment.find_second_period(periodic_window(periods=2), (3, 3))
        self.assertEqual(ctx.exception.steps, 21)

    def test_second_period_needs_a_period(self):
        self.assertRaises(ValueError, apartment.find_second_period, self.w, (0, 3))
        candidates = apartment.periodicity_candidates(self.w, 3, skip_empty=True).candidates
        other = next((r, s) for r in range(1, 4) for s in range(1, 4)
                     if (r, s) not in candidates)
        self.assertRaises(apartment.NotPeriodic, apartment.find_second_period,
                          self.w, other)

    def test_bad_target(self):
        self.assertRaises(ValueError, apartment.construct_rigidly_periodic, self.t, 0)


class TestStrip(unittest.TestCase):
    def test_wall_parallel_strip(self):
        t = q2_presentation()
        plane = t.plane
        strips = []
        for x in range(t.n):
            for y in range(t.n):
                if plane.on_lambda(y, x) or plane.on_lambda(x, y):
                    continue
                try:
                    strips.append(apartment.periodic_strip(t, [x, y], rows=2))
                except apartment.SearchFailed:
                    continue
                break
            if strips:
                break
        self.assertTrue(strips)
        w = strips[0]
        period = w.info['period'][0]
        self.assertEqual(w.bad_triangles(), [])
        report = apartment.periodicity_candidates(w, (period, 1), skip_empty=True)
        self.assertIn((period, 0), report.candidates)
        kind = apartment.classify_sector_periodicity(w, (period, 1))
        self.assertEqual(kind.kind, 'wall-parallel')
        self.assertEqual(kind.direction, (1, 0))

    def test_not_cyclically_normal(self):
        t = q2_presentation()
        x, y, _ = sorted(t.triples)[0]
        self.assertRaises(ValueError, apartment.periodic_strip, t, [x, y], 2)


if __name__ == '__main__':
    unittest.main()
