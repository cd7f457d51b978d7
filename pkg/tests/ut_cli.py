#!/usr/bin/env python

import io
import os
import shutil
import tempfile
import unittest

from tribuilding import cli, gfq, presentation, boundary, jsonutil
from tribuilding.config import RunConfig


def q2_presentation():
    outcomes = presentation.scan_lambda_family(gfq.make_field(2), limit=1)
    return [t for o in outcomes for t in o.found][0]


class CliTestCase(unittest.TestCase):
    def setUp(self):
        self.tmpdir = tempfile.mkdtemp()
        path = os.path.join(self.tmpdir, 'run.config')
        with open(path, 'w') as handle:
            handle.write('[tribuilding]\nq = 2\nradius = 2\nFixtureRoot = %s\n'
                         % self.tmpdir)
        self.config = RunConfig(path)

    def tearDown(self):
        shutil.rmtree(self.tmpdir)

    def run_command(self, subcommand, **params):
        out = io.StringIO()
        status = cli.run(subcommand, self.config, cli.default_params(**params), out)
        return status, out.getvalue()


class TestSimpleCommands(CliTestCase):
    def test_measure(self):
        status, text = self.run_command('measure', m=1, n=1)
        doc = jsonutil.loads(text)
        self.assertEqual(status, 0)
        self.assertEqual(doc['N'], 42)
        self.assertEqual(doc['measure'], '1/42')
        self.assertEqual(sorted(doc['class_masses']), ['0,2', '1,1', '2,0'])

    def test_measure_plain(self):
        self.config.set_override('format', 'plain')
        status, text = self.run_command('measure', m=2, n=0)
        self.assertEqual(status, 0)
        self.assertIn('N: 28\n', text)

    def test_plane(self):
        status, text = self.run_command('plane')
        doc = jsonutil.loads(text)
        self.assertEqual(status, 0)
        self.assertEqual(len(doc['points']), 7)
        self.assertEqual(doc['axiom_failures'], [])
        self.assertEqual(doc['descriptor'], 'standard')

    def test_plane_gml(self):
        self.config.set_override('format', 'gml')
        status, text = self.run_command('plane')
        self.assertEqual(status, 0)
        self.assertTrue(text.startswith('graph ['))
        self.assertEqual(text.count('node ['), 14)

    def test_unknown_subcommand(self):
        self.assertRaises(ValueError, cli.run, 'bogus', self.config)


class TestCommandLine(unittest.TestCase):
    def assertExits(self, argv, code):
        with self.assertRaises(SystemExit) as ctx:
            cli.main(argv)
        self.assertEqual(ctx.exception.code, code)

    def test_usage_errors(self):
        self.assertExits([], 2)
        self.assertExits(['bogus'], 2)
        self.assertExits(['ball', '--bogus'], 2)
        self.assertExits(['presentation'], 2)
        self.assertExits(['presentation', 'validate'], 2)
        self.assertExits(['measure', '--m', '1'], 2)
        self.assertExits(['ball', '--format', 'gml'], 2)
        self.assertExits(['ball', '--emit', 'everything'], 2)
        self.assertExits(['ball', '--name', 'q2'], 2)
        self.assertExits(['measure', '--m', '-1', '--n', '0'], 2)

    def test_full_command_names(self):
        import optparse
        cmdline = optparse.OptionParser()
        cli.add_optparse_group(cmdline)
        options, args = cmdline.parse_args(['apartment', 'build-periodic', '--m', '1'])
        self.assertEqual(cli.check_arguments(cmdline, options, args),
                         'apartment build-periodic')
        options, args = cmdline.parse_args(['ball', '--emit', 'graph', '--format', 'gml'])
        self.assertEqual(cli.check_arguments(cmdline, options, args), 'ball')


class TestPresentationCommands(CliTestCase):
    def setUp(self):
        CliTestCase.setUp(self)
        self.t = q2_presentation()
        self.fixture = os.path.join(self.tmpdir, 'q2.tri')
        presentation.write_presentation(self.t, self.fixture)

    def test_validate(self):
        status, text = self.run_command('presentation validate', file=self.fixture)
        doc = jsonutil.loads(text)
        self.assertEqual(status, 0)
        self.assertTrue(doc['passed'])
        self.assertEqual(doc['size'], 21)
        self.assertEqual(doc['hash'], self.t.digest())

    def test_validate_broken(self):
        broken = os.path.join(self.tmpdir, 'broken.tri')
        presentation.write_presentation(self.t.without(sorted(self.t.triples)[0]), broken)
        status, text = self.run_command('presentation validate', file=broken)
        self.assertEqual(status, 1)
        self.assertFalse(jsonutil.loads(text)['passed'])

    def test_ball_spheres(self):
        self.config.set_override('presentation', self.fixture)
        status, text = self.run_command('ball', emit='spheres')
        doc = jsonutil.loads(text)
        self.assertEqual(status, 0)
        self.assertEqual(doc['sizes'], [1, 14, 98])
        self.assertEqual(doc['sizes'], doc['expected'])

    def test_ball_chambers(self):
        self.config.set_override('presentation', self.fixture)
        status, text = self.run_command('ball', emit='chambers')
        doc = jsonutil.loads(text)
        self.assertEqual(status, 0)
        self.assertEqual(doc['chambers_at_e'], 21)
        self.assertTrue(doc['link_is_plane'])

    def test_named_fixture(self):
        status, text = self.run_command('presentation search', store=True, name='q2')
        self.assertEqual(status, 0)
        stored = jsonutil.loads(text)['stored']
        self.assertEqual(len(stored), 1)
        self.assertTrue(os.path.exists(stored[0]))
        self.config.set_override('presentation', 'q2')
        self.assertEqual(cli.load_presentation(self.config).digest(),
                         presentation.read_presentation(stored[0]).digest())


class TestBuildingCommands(CliTestCase):
    def setUp(self):
        CliTestCase.setUp(self)
        self.fixture = os.path.join(self.tmpdir, 'q2.tri')
        presentation.write_presentation(q2_presentation(), self.fixture)
        self.config.set_override('presentation', self.fixture)

    def test_build_and_analyze(self):
        status, text = self.run_command('apartment build-periodic', m=1, periods=2)
        self.assertEqual(status, 0)
        doc = jsonutil.loads(text)
        self.assertEqual(doc['info']['period'], [3, 3])
        path = os.path.join(self.tmpdir, 'window.json')
        with open(path, 'w') as handle:
            handle.write(text)
        status, text = self.run_command('apartment analyze', window=path, bound=3)
        report = jsonutil.loads(text)
        self.assertEqual(status, 0)
        self.assertIn([3, 3], report['candidates'])
        self.assertEqual(report['bad_triangles'], [])
        self.assertTrue(1 <= report['minimal_period'] <= 6)

    def test_rn(self):
        status, text = self.run_command('rn', x='a0', depth=2)
        doc = jsonutil.loads(text)
        self.assertEqual(status, 0)
        self.assertEqual(doc['certified'] + doc['skipped'], 98)
        self.assertTrue(set(doc['values']) <= set(['1/4', '1', '4']))

    def test_freeness(self):
        status, text = self.run_command('freeness', g='a0', depth=3)
        doc = jsonutil.loads(text)
        self.assertEqual(status, 0)
        self.assertEqual(doc['windows'], 1344)
        self.assertTrue(doc['symmetric'])
        self.assertEqual(sum(doc['shifts'].values()), doc['witnesses'])

    def test_kmap_refuses_q2(self):
        self.assertRaises(boundary.Unsupported, self.run_command, 'kmap', x='a0', y='a1')

    def test_kmap(self):
        t3 = presentation.cyclic_presentation(gfq.make_field(3))
        path = os.path.join(self.tmpdir, 'q3.tri')
        presentation.write_presentation(t3, path)
        self.config.set_override('presentation', path)
        self.config.set_override('stages', 2)
        status, text = self.run_command('kmap', x='a0', y='a1')
        doc = jsonutil.loads(text)
        self.assertEqual(status, 0)
        self.assertTrue(doc['verified'])
        self.assertEqual(len(doc['stages']), 2)
        self.assertEqual(doc['law_fraction'], '2601/2704')
        self.assertTrue(jsonutil.parse_fraction(doc['unmatched_fraction']) <
                        jsonutil.parse_fraction(doc['law_fraction']))

    def test_bad_lambda_file(self):
        path = os.path.join(self.tmpdir, 'lambda.txt')
        with open(path, 'w') as handle:
            handle.write('0 1 two\n')
        self.assertRaises(gfq.InvalidLambda, cli.lambda_descriptor, 'file:' + path)
        self.assertTrue(issubclass(gfq.InvalidLambda, cli.DOMAIN_ERRORS))


class TestVerifyAll(CliTestCase):
    def test_missing_presentation(self):
        empty = os.path.join(self.tmpdir, 'empty.tri')
        open(empty, 'w').close()
        self.config.set_override('presentation', empty)
        self.config.set_override('stages', 1)
        report = cli.verify_all(self.config)
        self.assertEqual(report.status('plane-axioms'), cli.PASS)
        self.assertEqual(report.status('opposite-chambers'), cli.PASS)
        self.assertEqual(report.status('presentation'), cli.FAIL)
        self.assertEqual(report.status('measures'), cli.PASS)
        for name in ('spheres', 'coordinate-classes', 'rn-derivative', 'freeness'):
            self.assertEqual(report.status(name), cli.SKIP)
        self.assertTrue(report.failed())
        self.assertIn('FAIL presentation: no presentation', report.to_text())

    def test_every_check_passes(self):
        fixture = os.path.join(self.tmpdir, 'q2.tri')
        presentation.write_presentation(q2_presentation(), fixture)
        self.config.set_override('presentation', fixture)
        self.config.set_override('radius', 3)
        self.config.set_override('stages', 2)
        report = cli.verify_all(self.config)
        self.assertEqual([line for line in report.lines if line.status != cli.PASS], [])
        self.assertFalse(report.failed())
        for name in ('second-period', 'stabilizer-bound', 'kmap', 'freeness'):
            self.assertEqual(report.status(name), cli.PASS)


if __name__ == '__main__':
    unittest.main()
