#!/usr/bin/env python

import hashlib
import os
import shutil
import tempfile
import unittest

from tribuilding import gfq, presentation


_found = {}


def q2_presentation():
    """First presentation of the lambda scan for q=2"""
    if 'q2' not in _found:
        outcomes = presentation.scan_lambda_family(gfq.make_field(2), limit=1)
        _found['q2'] = [t for o in outcomes for t in o.found][0]
    return _found['q2']


class TestValidation(unittest.TestCase):
    def setUp(self):
        self.t = q2_presentation()

    def test_found_presentation_is_valid(self):
        report = presentation.validate(self.t)
        self.assertTrue(report.passed)
        self.assertEqual(report.violations, [])
        self.assertEqual(len(self.t), 21)

    def test_table(self):
        for x, y, z in self.t.triples:
            self.assertEqual(self.t.third(x, y), z)
            self.assertTrue(self.t.plane.on_lambda(y, x))

    def test_removed_triple_breaks_closure(self):
        triple = next(tr for tr in sorted(self.t.triples) if len(set(tr)) == 3)
        x, y, z = triple
        report = presentation.validate(self.t.without(triple))
        self.assertFalse(report.passed)
        self.assertIn(('2', (z, x, y)), report.violations)
        self.assertIn(('1', (x, y)), report.violations)

    def test_duplicate_third_point(self):
        x, y, z = sorted(self.t.triples)[0]
        other = next(w for w in range(self.t.n) if w != z)
        broken = presentation.TrianglePresentation(
            self.t.plane, set(self.t.triples) | set([(x, y, other)]))
        report = presentation.validate(broken)
        self.assertIn(('3', (x, y)), report.violations)

    def test_out_of_range(self):
        broken = presentation.TrianglePresentation(
            self.t.plane, set(self.t.triples) | set([(0, 1, 99)]))
        report = presentation.validate(broken)
        self.assertEqual(report.violations, [('range', (0, 1, 99))])

    def test_relations(self):
        full = presentation.relations(self.t, collapse=False)
        self.assertEqual(len(full), 21)
        collapsed = presentation.relations(self.t)
        self.assertTrue(len(collapsed) < len(full))
        for relator in collapsed:
            self.assertEqual(len(relator), 3)
            self.assertTrue(all(s == 1 for _, s in relator))

    def test_relations_of_invalid_set(self):
        triple = sorted(self.t.triples)[0]
        self.assertRaises(presentation.InvalidPresentation,
                          presentation.relations, self.t.without(triple))


class TestSearch(unittest.TestCase):
    def test_scan_reports_every_lambda_tried(self):
        outcomes = presentation.scan_lambda_family(gfq.make_field(2), limit=1)
        self.assertTrue(outcomes[-1].found)
        self.assertTrue(all(not o.found for o in outcomes[:-1]))
        for outcome in outcomes:
            self.assertTrue(outcome.nodes > 0)

    def test_lambda_family(self):
        family = presentation.lambda_family(gfq.make_field(2))
        self.assertEqual(len(family), 8)
        self.assertEqual(family[0], 'cyclic:0')
        self.assertEqual(family[-1], 'standard')

    def test_zero_budget(self):
        plane = gfq.make_plane(gfq.make_field(2))
        stats = {}
        found = list(presentation.enumerate_presentations(plane, max_nodes=0,
                                                          stats=stats))
        self.assertEqual(found, [])
        self.assertFalse(stats['complete'])

    def test_threads_do_not_change_results(self):
        t = q2_presentation()
        plane = t.plane
        serial = list(presentation.enumerate_presentations(plane, limit=2))
        parallel = list(presentation.enumerate_presentations(plane, limit=2, threads=3))
        self.assertEqual(serial, parallel)

    def test_truncated_search_ignores_threads(self):
        plane = q2_presentation().plane
        for budget in (1, 5, 40, 400):
            serial_stats, parallel_stats = {}, {}
            serial = list(presentation.enumerate_presentations(
                plane, max_nodes=budget, stats=serial_stats))
            for threads in (2, 3):
                parallel = list(presentation.enumerate_presentations(
                    plane, max_nodes=budget, threads=threads, stats=parallel_stats))
                self.assertEqual(serial, parallel)
                self.assertEqual(serial_stats['complete'], parallel_stats['complete'])

    def test_reverse_order(self):
        plane = q2_presentation().plane
        for t in presentation.enumerate_presentations(plane, limit=1,
                                                      seed_order='reverse'):
            self.assertTrue(presentation.validate(t).passed)

    def test_bad_seed_order(self):
        plane = gfq.make_plane(gfq.make_field(2))
        self.assertRaises(ValueError, presentation.PresentationSearch, plane, 'random')

    def test_cyclic_presentation(self):
        for q in (2, 3):
            t = presentation.cyclic_presentation(gfq.make_field(q))
            self.assertNotEqual(t, None)
            self.assertTrue(presentation.validate(t).passed)
            self.assertEqual(len(t), t.n * (q + 1))
            self.assertTrue(t.lambda_descriptor.startswith('cyclic:'))


class TestFixtures(unittest.TestCase):
    def setUp(self):
        self.t = q2_presentation()
        self.tmpdir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmpdir)

    def test_text_round_trip(self):
        text = self.t.to_text()
        parsed = presentation.parse_presentation(text)
        self.assertEqual(parsed, self.t)
        self.assertEqual(parsed.to_text(), text)
        self.assertEqual(len(self.t.digest()), 40)

    def test_hash_covers_the_header(self):
        reversed_lam = tuple(reversed(self.t.plane.lam))
        other = presentation.TrianglePresentation(self.t.plane.with_lambda(reversed_lam),
                                                  self.t.triples)
        self.assertNotEqual(other.digest(), self.t.digest())
        q_line, lambda_line, _, body = self.t.to_text().split('\n', 3)
        hashed = '%s\n%s\n%s' % (q_line, lambda_line, body)
        self.assertEqual(self.t.digest(), hashlib.sha1(hashed.encode('ascii')).hexdigest())

    def test_write_and_read(self):
        path = os.path.join(self.tmpdir, 'q2.tri')
        presentation.write_presentation(self.t, path)
        self.assertEqual(presentation.read_presentation(path), self.t)

    def test_hash_mismatch(self):
        lines = self.t.to_text().splitlines(True)
        lines[2] = 'hash %s\n' % ('0' * 40)
        self.assertRaises(presentation.FixtureFormatError,
                          presentation.parse_presentation, ''.join(lines))

    def test_malformed(self):
        self.assertRaises(presentation.FixtureFormatError,
                          presentation.parse_presentation, '')
        self.assertRaises(presentation.FixtureFormatError,
                          presentation.parse_presentation, 'p 2\nlambda 0\nhash 0\n')
        lines = self.t.to_text().splitlines(True)
        lines.append('1 2\n')
        self.assertRaises(presentation.FixtureFormatError,
                          presentation.parse_presentation, ''.join(lines))

    def test_non_integer_fields(self):
        lines = self.t.to_text().splitlines(True)
        bad_triple = lines + ['0 1 x\n']
        self.assertRaises(presentation.FixtureFormatError,
                          presentation.parse_presentation, ''.join(bad_triple))
        bad_q = ['q two\n'] + lines[1:]
        self.assertRaises(presentation.FixtureFormatError,
                          presentation.parse_presentation, ''.join(bad_q))
        bad_lambda = lines[:1] + ['lambda 0 1 two\n'] + lines[2:]
        self.assertRaises(presentation.FixtureFormatError,
                          presentation.parse_presentation, ''.join(bad_lambda))
        short_lambda = lines[:1] + ['lambda 0 1\n'] + lines[2:]
        self.assertRaises(presentation.FixtureFormatError,
                          presentation.parse_presentation, ''.join(short_lambda))


if __name__ == '__main__':
    unittest.main()
