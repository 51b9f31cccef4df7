import os
import tempfile
from fractions import Fraction
from io import StringIO
from pathlib import Path
from unittest import mock

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from apps.Orbits.case_analyzer import GridKey, SweepReport, Verdict, VerdictKind
from apps.Orbits.conf import Config
from apps.Orbits.exceptions import ConfigParseError, ConfigurationError
from apps.Orbits.models import Case1, Case2, Case3, Case4, CriticalTypeVector, NonDegenerate, OrbitConfig
from apps.Orbits.reports import emit_report, render_config
from apps.Orbits.serializers import RunConfig, parse_config


class ConfigFileMixin:
    def write_config(self, text):
        handle = tempfile.NamedTemporaryFile('w', suffix='.cfg', delete=False, encoding='utf-8')
        with handle:
            handle.write(text)
        self.addCleanup(os.unlink, handle.name)
        return handle.name

    def run_command(self, **options):
        out = StringIO()
        call_command('maslovkit', stdout=out, **options)
        return out.getvalue()


class ParseConfigTests(SimpleTestCase):
    def test_orbit_and_run_keys(self):
        run = parse_config("mode=analyze\ntruncation=400\n\ncase=2\ntheta=1/2\ni1=0\n")
        self.assertEqual(run.mode, 'analyze')
        self.assertEqual(run.truncation, 400)
        self.assertEqual(run.orbits, [OrbitConfig(Case2(Fraction(1, 2)), 0)])

    def test_comments_and_k_vectors(self):
        run = parse_config("# orbit\ncase=4   # degenerate\ni1=1\nk1=0,?\n")
        (config,) = run.orbits
        self.assertEqual(config.k_vectors, {1: CriticalTypeVector.of(0, None)})

    def test_parity_error_names_the_line(self):
        with self.assertRaises(ConfigParseError) as raised:
            parse_config("case=4\ni1=2\n")
        self.assertEqual(raised.exception.line, 2)
        self.assertIn("Case 4 requires odd i1", str(raised.exception))

    def test_unknown_key(self):
        with self.assertRaises(ConfigParseError) as raised:
            parse_config("case=3\ni1=0\ncolour=red\n")
        self.assertEqual(raised.exception.line, 3)

    def test_malformed_rotations(self):
        for theta in ('1/0', 'abc'):
            with self.subTest(theta=theta):
                with self.assertRaises(ConfigParseError) as raised:
                    parse_config(f"case=2\ntheta={theta}\ni1=0\n")
                self.assertEqual(raised.exception.line, 2)
                self.assertIn('Malformed fraction', raised.exception.message)

    def test_rotation_outside_the_range(self):
        with self.assertRaises(ConfigParseError):
            parse_config("case=2\ntheta=1\ni1=0\n")

    def test_duplicate_keys(self):
        with self.assertRaises(ConfigParseError):
            parse_config("case=3\ni1=0\ni1=2\n")
        with self.assertRaises(ConfigParseError):
            parse_config("truncation=10\n\ntruncation=20\n")

    def test_orbit_mode_without_orbits(self):
        with self.assertRaises(ConfigParseError) as raised:
            parse_config("q_max=5\nmode=table\n")
        self.assertEqual(raised.exception.line, 2)

    def test_missing_case(self):
        with self.assertRaises(ConfigParseError):
            parse_config("i1=0\n")

    def test_k_vector_length_must_match_the_nullity(self):
        with self.assertRaises(ConfigParseError) as raised:
            parse_config("case=4\ni1=1\nk1=0,1,0\n")
        self.assertEqual(raised.exception.line, 3)
        self.assertIn('k1', raised.exception.message)
        with self.assertRaises(ConfigParseError) as raised:
            parse_config("case=3\nk1=1\ni1=0\n")
        self.assertEqual(raised.exception.line, 2)

    def test_render_then_parse(self):
        run = RunConfig(
            mode='resonance',
            truncation=120,
            format='kv',
            orbits=[
                OrbitConfig(Case1(0), 2, {1: CriticalTypeVector.of(1), 2: CriticalTypeVector.of(0, None, 0)}),
                OrbitConfig(Case2(Fraction(5, 7)), 4),
                OrbitConfig(NonDegenerate(elliptic=False, jump_odd=True, mean_index=Fraction(5, 2)), 1),
            ],
        )
        self.assertEqual(parse_config(render_config(run)), run)


class CommandTests(ConfigFileMixin, SimpleTestCase):
    def test_analyze_text(self):
        output = self.run_command(config=self.write_config("case=3\ni1=0\n"))
        self.assertIn('Case3(b=0) i1=0: SDM', output)
        self.assertIn('mean_index=2', output)
        self.assertIn('trace:', output)

    def test_analyze_kv(self):
        output = self.run_command(config=self.write_config("case=3\ni1=0\n"), format='kv')
        lines = output.splitlines()
        self.assertIn('verdict=SDM', lines)
        self.assertIn('case=3', lines)
        self.assertIn('intermediates.alternating_sum(y)=1', lines)

    def test_analyze_reports_first_violation(self):
        output = self.run_command(config=self.write_config("case=1\nb=1\ni1=0\n"), format='kv')
        self.assertIn('verdict=MorseSeriesContradiction', output)
        self.assertIn('first_violation_degree=-1', output)
        self.assertIn('first_violation_value=-1', output)

    def test_two_orbits_make_two_records(self):
        path = self.write_config("case=4\ni1=1\n\ncase=4\ni1=3\n")
        records = self.run_command(config=path, format='kv').strip().split('\n\n')
        self.assertEqual(len(records), 2)

    def test_small_sweep(self):
        output = self.run_command(mode='sweep', i1_min=-2, i1_max=2, q_max=4)
        self.assertIn('feasible=0', output)
        self.assertIn('inconclusive=0', output)
        self.assertIn('case=3 b=0 i1=0: SDM', output)

    def test_sweep_kv_summary(self):
        output = self.run_command(mode='sweep', i1_min=0, i1_max=1, q_max=3, format='kv', workers=2)
        summary = output.strip().split('\n\n')[-1].splitlines()
        self.assertIn('record=summary', summary)
        self.assertIn('certified=true', summary)

    def test_table(self):
        path = self.write_config("case=4\ni1=1\n")
        self.assertEqual(len(self.run_command(mode='table', config=path, m_max=5).splitlines()), 6)
        records = self.run_command(mode='table', config=path, m_max=5, format='kv').strip().split('\n\n')
        self.assertEqual(len(records), 5)
        self.assertIn('morse=3', records[2].splitlines())

    def test_resonance(self):
        output = self.run_command(config=self.write_config("mode=resonance\n\ncase=3\ni1=0\nk1=1,0,0\n"))
        self.assertIn('= 1/2 (holds, target 1/2)', output)

    def test_parse_error_becomes_command_error(self):
        with self.assertRaises(CommandError) as raised:
            self.run_command(config=self.write_config("case=4\ni1=2\n"))
        self.assertIn('line 2', str(raised.exception))
        self.assertEqual(raised.exception.returncode, 1)

    def test_inconclusive_truncation(self):
        with self.assertRaises(CommandError) as raised:
            self.run_command(config=self.write_config("case=3\ni1=0\n"), truncation=2)
        self.assertEqual(raised.exception.returncode, 1)
        self.assertIn('inconclusive', str(raised.exception))

    def test_missing_config_file(self):
        missing = Path(tempfile.gettempdir()) / 'maslovkit-no-such-file.cfg'
        with self.assertRaises(CommandError):
            self.run_command(config=str(missing))

    def test_table_needs_orbits(self):
        with self.assertRaises(CommandError):
            self.run_command(mode='table')

    def test_flag_wins_over_a_malformed_environment(self):
        path = self.write_config("case=4\ni1=1\n")
        with mock.patch.dict(os.environ, {'MASLOVKIT_TRUNCATION': 'many', 'MASLOVKIT_FORMAT': 'xml'}):
            output = self.run_command(config=path, truncation=400, format='text')
        self.assertIn('Case4 i1=1: SDM', output)

    def test_config_key_wins_over_a_malformed_environment(self):
        path = self.write_config("truncation=400\nformat=kv\n\ncase=4\ni1=1\n")
        with mock.patch.dict(os.environ, {'MASLOVKIT_TRUNCATION': 'many', 'MASLOVKIT_FORMAT': 'xml'}):
            output = self.run_command(config=path)
        self.assertIn('verdict=SDM', output.splitlines())

    def test_malformed_environment_without_a_flag(self):
        with mock.patch.dict(os.environ, {'MASLOVKIT_TRUNCATION': 'many'}):
            with self.assertRaises(CommandError) as raised:
                self.run_command(config=self.write_config("case=4\ni1=1\n"))
        self.assertIn('MASLOVKIT_TRUNCATION', str(raised.exception))

    def feasible_verdict(self, config):
        return Verdict(
            kind=VerdictKind.FEASIBLE,
            config=config,
            trace=["no constraint excludes this orbit"],
            mean_index=Fraction(2),
            period=1,
            truncation=400,
            guard=4,
        )

    def test_feasible_verdict_fails_the_analysis(self):
        config = OrbitConfig(Case3(0), 0)
        with mock.patch('apps.Orbits.management.commands.maslovkit.analyze_single_orbit',
                        return_value=self.feasible_verdict(config)):
            out = StringIO()
            with self.assertRaises(CommandError) as raised:
                call_command('maslovkit', config=self.write_config("case=3\ni1=0\n"), format='kv', stdout=out)
        self.assertEqual(raised.exception.returncode, 1)
        self.assertIn('feasible', str(raised.exception))
        self.assertIn('verdict=Feasible', out.getvalue().splitlines())

    def test_feasible_grid_point_fails_the_sweep(self):
        config = OrbitConfig(Case4(), 1)
        report = SweepReport(
            grid={'i1_min': 1, 'i1_max': 1, 'q_max': 2, 'truncation': 400},
            verdicts=[(GridKey('4', '', 1), self.feasible_verdict(config))],
        )
        with mock.patch('apps.Orbits.management.commands.maslovkit.sweep_theorem_1_1', return_value=report):
            out = StringIO()
            with self.assertRaises(CommandError) as raised:
                call_command('maslovkit', mode='sweep', i1_min=1, i1_max=1, q_max=2, format='kv', stdout=out)
        self.assertEqual(raised.exception.returncode, 1)
        self.assertIn('not certified', str(raised.exception))
        summary = out.getvalue().strip().split('\n\n')[-1].splitlines()
        self.assertIn('certified=false', summary)
        self.assertIn('feasible=1', summary)


class ReportTests(SimpleTestCase):
    def test_unknown_format(self):
        with self.assertRaises(ValueError):
            emit_report([], format='xml')

    def test_unknown_object(self):
        with self.assertRaises(TypeError):
            emit_report(OrbitConfig(Case4(), 1))


class ConfigTests(SimpleTestCase):
    def test_defaults(self):
        with mock.patch.dict(os.environ, {}, clear=True):
            self.assertEqual(Config.default_truncation(), 400)
            self.assertEqual(Config.default_q_max(), 12)
            self.assertEqual(Config.default_i1_range(), (-4, 40))
            self.assertEqual(Config.default_format(), 'text')

    def test_environment_overrides(self):
        with mock.patch.dict(os.environ, {'MASLOVKIT_TRUNCATION': '50', 'MASLOVKIT_FORMAT': 'KV'}):
            self.assertEqual(Config.default_truncation(), 50)
            self.assertEqual(Config.default_format(), 'kv')

    def test_malformed_overrides(self):
        with mock.patch.dict(os.environ, {'MASLOVKIT_TRUNCATION': 'many'}):
            with self.assertRaises(ConfigurationError):
                Config.default_truncation()
        with mock.patch.dict(os.environ, {'MASLOVKIT_Q_MAX': '1'}):
            with self.assertRaises(ConfigurationError):
                Config.default_q_max()
        with mock.patch.dict(os.environ, {'MASLOVKIT_FORMAT': 'xml'}):
            with self.assertRaises(ConfigurationError):
                Config.default_format()
