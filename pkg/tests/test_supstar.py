# -*- coding: utf-8 -*-
"""Unit Test Suite for supstar's configuration and batch front end"""

__author__ = "Stephan Sokolow (deitarion/SSokolow)"
__license__ = "GNU GPL 2.0 or later"

import configparser, errno, io, json, logging, os, shutil, tempfile
import unittest
from argparse import Namespace
from contextlib import redirect_stdout

# Ensure code coverage counts modules not yet imported by tests.
from supstar import config, __main__  # NOQA pylint: disable=unused-import
from supstar.commands import Report, commands, load_document
from supstar.util import ParseError

log = logging.getLogger(__name__)

TORSIONFUL = json.dumps({
    'dim_m': 2, 'omega': [[0, 1], [-1, 0]], 'lambda': [[0, 1], [-1, 0]],
    'gamma': [[[0, 1], [0, 0]], [[0, 0], [0, 0]]]})
ZERO_DENOMINATOR = json.dumps({
    'dim_m': 2, 'lambda': [[0, 1], [-1, 0]],
    'omega': [[0, [{'exps': [0, 0], 're': '3/0'}]], [-1, 0]]})


def unset_args(**kwargs) -> Namespace:
    """An argparse result with every computation flag unset"""
    values = dict(order=None, trunc=None, seed=None, trials=None,
                  probe_degree=None, out=None)
    values.update(kwargs)
    return Namespace(**values)


class ConfigV1Test(unittest.TestCase):
    """Tests for parsing ConfigParser-era supstar.cfg files"""

    def setUp(self):
        """Set up scratch space for config files at the start of each unit"""
        self.testdir = tempfile.mkdtemp(prefix='supstar-config-test-')
        self.testpath = os.path.join(self.testdir, 'test.config')

    def tearDown(self):
        """Delete the scratch space when each test is finished"""
        shutil.rmtree(self.testdir)

    def test_creates_on_first_run(self):
        """Config file is created if it doesn't exist"""
        self.assertFalse(os.path.exists(self.testpath))
        with self.assertLogs('supstar.config', 'INFO'):
            parsed = config.load_config(self.testpath)
        self.assertTrue(os.path.exists(self.testpath))

        # Verify all defaults were put in correctly
        for section, lines in config.DEFAULTS.items():
            for key, value in lines.items():
                self.assertEqual(str(value), parsed.get(section, key))

        # Verify nothing but defaults and cfg_schema were put in
        for section in parsed.sections():
            for option in parsed.options(section):
                if option == 'cfg_schema':
                    self.assertEqual(parsed.get(section, option), '1')
                else:
                    self.assertEqual(
                        parsed.get(section, option),
                        str(config.DEFAULTS[section][option]))

    def test_keys_are_case_sensitive(self):
        """Config keys are case-sensitive"""
        parsed = config.load_config(self.testpath)

        self.assertEqual('2', parsed.get('general', 'ProbeDegree'))
        self.assertRaises(configparser.NoSectionError,
            parsed.get, 'General', 'probedegree')
        self.assertRaises(configparser.NoOptionError,
            parsed.get, 'general', 'probedegree')

    def test_fills_missing_keys(self):
        """Existing files keep their values and gain missing keys"""
        with open(self.testpath, 'w') as fobj:
            fobj.write("[general]\ncfg_schema = 1\nTrials = 3\n")
        parsed = config.load_config(self.testpath)
        self.assertEqual(parsed.get('general', 'Trials'), '3')
        self.assertEqual(parsed.get('general', 'Trunc'), '6')

    def test_settings_precedence(self):
        """Flags beat the environment, which beats the config file"""
        with open(self.testpath, 'w') as fobj:
            fobj.write("[general]\nOrder = 2\nOutputDir = from-config\n")
        parsed = config.load_config(self.testpath)

        settings = config.Settings.from_sources(unset_args(), parsed, {})
        self.assertEqual((settings.order, settings.trunc), (2, 6))
        self.assertEqual(settings.output_dir, 'from-config')

        env = {config.OUTPUT_DIR_ENV: 'from-env'}
        settings = config.Settings.from_sources(unset_args(), parsed, env)
        self.assertEqual(settings.output_dir, 'from-env')

        settings = config.Settings.from_sources(
            unset_args(order=0, out='from-flag'), parsed, env)
        self.assertEqual((settings.order, settings.output_dir),
                         (0, 'from-flag'))

    def test_bad_integers(self):
        """Non-integer and negative config values are ParseErrors"""
        for value in ('three', '-1'):
            with open(self.testpath, 'w') as fobj:
                fobj.write("[general]\nSeed = %s\n" % value)
            parsed = config.load_config(self.testpath)
            with self.assertRaises(ParseError):
                config.Settings.from_sources(unset_args(), parsed, {})


class TestCommandRegistry(unittest.TestCase):
    """Tests for the `CommandRegistry` class and input loading"""

    def test_registered(self):
        """Every batch command is registered with help text"""
        self.assertEqual(sorted(commands), [
            'bracket', 'brst', 'check', 'fedosov-r', 'star', 'taylor',
            'validate'])
        self.assertIn('Star product of two sections', str(commands))

    def test_unknown_command(self):
        """Unknown names log an error and return None"""
        with self.assertLogs('supstar.commands', 'ERROR'):
            self.assertIsNone(commands.call('frobnicate',
                                            config.Settings()))

    def test_load_document(self):
        """Presets, inline JSON and JSON errors with their position"""
        doc, label = load_document('{"dim_m": 2}')
        self.assertEqual((doc, label), ({'dim_m': 2}, '<inline>'))
        with self.assertRaises(ParseError) as ctx:
            load_document('{"dim_m": ')
        self.assertEqual(ctx.exception.path, '<inline>')
        self.assertEqual(ctx.exception.position[0], 1)
        with self.assertRaises(ParseError):
            load_document('builtin:no-such-preset')

    def test_report_dumps(self):
        """Reports serialize deterministically"""
        report = Report(True, {'b': 1, 'a': [1, 2]}, [])
        self.assertEqual(report.dumps(), Report(True, {'a': [1, 2], 'b': 1},
                                                []).dumps())
        self.assertEqual(json.loads(report.dumps()), {'a': [1, 2], 'b': 1})

    def test_report_elapsed(self):
        """Commands come back timed and the JSON only carries it on request"""
        report = commands.call('validate', config.Settings(),
                               'builtin:darboux-plane')
        self.assertGreaterEqual(report.elapsed, 0.0)
        self.assertIn('Finished in', report.table())
        self.assertNotIn('elapsed', json.loads(report.dumps()))
        self.assertEqual(json.loads(report.dumps(timing=True))['elapsed'],
                         report.elapsed)


class TestFrontEnd(unittest.TestCase):
    """Tests for the exit statuses and output of ``supstar.__main__``"""

    def setUp(self):
        """Point the CLI at a scratch config file"""
        self.testdir = tempfile.mkdtemp(prefix='supstar-cli-test-')
        self.cfg = os.path.join(self.testdir, 'supstar.cfg')
        self.outdir = os.path.join(self.testdir, 'out')

    def tearDown(self):
        """Delete the scratch space when each test is finished"""
        shutil.rmtree(self.testdir)

    def run_cli(self, *argv: str) -> int:
        """Run the front end with stdout captured"""
        with redirect_stdout(io.StringIO()):
            return __main__.run(['--config', self.cfg] + list(argv))

    def test_show_commands(self):
        """--show-commands succeeds and a missing command does not"""
        self.assertEqual(self.run_cli('--show-commands'), 0)
        self.assertEqual(self.run_cli(), errno.ENOENT)
        self.assertEqual(self.run_cli('frobnicate'), errno.EINVAL)

    def test_validate(self):
        """validate exits 0 on a valid preset and 1 on a failed check"""
        self.assertEqual(self.run_cli('validate', 'builtin:darboux-plane'), 0)
        self.assertEqual(self.run_cli('validate', TORSIONFUL), 1)
        self.assertEqual(self.run_cli('validate',
                                      'builtin:brst-classical-affine'), 0)

    def test_input_errors(self):
        """Malformed input is EINVAL and missing files are ENOENT"""
        self.assertEqual(self.run_cli('validate', ZERO_DENOMINATOR),
                         errno.EINVAL)
        self.assertEqual(self.run_cli('validate', '{"dim_m": '),
                         errno.EINVAL)
        self.assertEqual(self.run_cli('validate'), errno.EINVAL)
        self.assertEqual(self.run_cli(
            'validate', os.path.join(self.testdir, 'missing.json')),
            errno.ENOENT)
        self.assertEqual(self.run_cli('star', 'builtin:darboux-plane',
                                      '{"frames": {"": "x1"}}'),
                         errno.EINVAL)

    def test_writes_report(self):
        """--out writes <command>.json and nothing is written without it"""
        self.assertEqual(self.run_cli('validate', 'builtin:curved-plane'), 0)
        self.assertFalse(os.path.exists(self.outdir))

        self.assertEqual(self.run_cli('--out', self.outdir, 'validate',
                                      'builtin:curved-plane'), 0)
        with open(os.path.join(self.outdir, 'validate.json')) as fobj:
            report = json.load(fobj)
        self.assertEqual(report['command'], 'validate')
        self.assertTrue(report['ok'])
        self.assertEqual(report['spec'], 'builtin:curved-plane')

    def test_star(self):
        """star reports M_0 and M_1 for a pair of frame elements"""
        self.assertEqual(self.run_cli(
            '--out', self.outdir, '--order', '1', 'star',
            'builtin:darboux-plane', '{"frames": {"1": "x1"}}',
            '{"frames": {"1": "x2"}}'), 0)
        with open(os.path.join(self.outdir, 'star.json')) as fobj:
            report = json.load(fobj)
        self.assertEqual((report['T'], report['K']), (1, 4))
        self.assertEqual(len(report['M']), 2)

    def test_check_and_brst(self):
        """check and brst exit 0 on passing presets"""
        self.assertEqual(self.run_cli('--trials', '1', '--suite', 'algebra',
                                      'check'), 0)
        self.assertEqual(self.run_cli('--trials', '1', '--probe-degree', '1',
                                      '--mode', 'classical', 'brst',
                                      'builtin:brst-classical-single'), 0)
        self.assertEqual(self.run_cli('--mode', 'quantum', 'brst',
                                      'builtin:brst-classical-single'),
                         errno.EINVAL)

# vim: set sw=4 sts=4 expandtab :
