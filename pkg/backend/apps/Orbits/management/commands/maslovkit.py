"""
maslovkit management command

Usage:
    python manage.py maslovkit --mode sweep
    python manage.py maslovkit --mode analyze --config orbit.cfg --format kv
    python manage.py maslovkit --mode table --config orbit.cfg --m-max 20

Settings are resolved flag first, then config file key, then environment
(MASLOVKIT_TRUNCATION, MASLOVKIT_Q_MAX, MASLOVKIT_FORMAT, MASLOVKIT_WORKERS),
then settings.MASLOVKIT. The command fails with exit status 1 when a sweep or
an analysis finds a Feasible world or cannot decide within the truncation.
"""

import logging
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from apps.Orbits.case_analyzer import VerdictKind, analyze_single_orbit, sweep_theorem_1_1
from apps.Orbits.conf import Config
from apps.Orbits.exceptions import InconclusiveTruncationError, MaslovKitError
from apps.Orbits.index_iteration import iterate_table
from apps.Orbits.reports import emit_report
from apps.Orbits.resonance import resonance_sums
from apps.Orbits.serializers import MODES, ORBIT_MODES, RunConfig, parse_config

logger = logging.getLogger(__name__)


def _first(*values, default=None):
    """First value that is not None; default is a lookup called only when every value is None"""
    found = next((value for value in values if value is not None), None)
    if found is None and default is not None:
        return default()
    return found


class Command(BaseCommand):
    help = 'Replay the single closed characteristic case analysis in R^4'

    def add_arguments(self, parser):
        parser.add_argument('--mode', choices=MODES, help='analyze, sweep, table or resonance')
        parser.add_argument('--config', help='path to a key=value run configuration')
        parser.add_argument('--truncation', type=int, help='Morse series truncation degree N')
        parser.add_argument('--i1-min', type=int, help='smallest i(y,1) in the sweep')
        parser.add_argument('--i1-max', type=int, help='largest i(y,1) in the sweep')
        parser.add_argument('--q-max', type=int, help='largest rotation denominator in the sweep')
        parser.add_argument('--format', choices=Config.OUTPUT_FORMATS, help='report format')
        parser.add_argument('--m-max', type=int, help='number of iterates in table mode')
        parser.add_argument('--workers', type=int, help='threads used by the sweep')

    def _load(self, path) -> RunConfig:
        if path is None:
            return RunConfig()
        try:
            text = Path(path).read_text(encoding='utf-8')
        except OSError as e:
            raise CommandError(f"cannot read config {path}: {e}")
        return parse_config(text)

    def handle(self, *args, **options):
        try:
            self._run(options)
        except MaslovKitError as e:
            logger.error(f"maslovkit failed: {e}")
            raise CommandError(str(e), returncode=1)

    def _run(self, options):
        run = self._load(options['config'])
        mode = _first(options['mode'], run.mode, 'analyze' if run.orbits else 'sweep')
        truncation = _first(options['truncation'], run.truncation, default=Config.default_truncation)
        report_format = _first(options['format'], run.format, default=Config.default_format)
        if truncation < 1:
            raise CommandError(f"truncation must be positive, got {truncation}")
        if mode in ORBIT_MODES and not run.orbits:
            raise CommandError(f"mode {mode} needs --config with at least one orbit record")
        logger.info(f"maslovkit mode={mode} N={truncation} format={report_format}")

        if mode == 'sweep':
            self._sweep(options, run, truncation, report_format)
        elif mode == 'analyze':
            self._analyze(run, truncation, report_format)
        elif mode == 'table':
            m_max = _first(options['m_max'], run.m_max, default=Config.default_m_max)
            if m_max < 1:
                raise CommandError(f"m_max must be positive, got {m_max}")
            for index, config in enumerate(run.orbits):
                if report_format == 'kv' and index:
                    self.stdout.write('\n', ending='')
                if report_format == 'text' and len(run.orbits) > 1:
                    self.stdout.write(f"{config.label}\n", ending='')
                self.stdout.write(emit_report(iterate_table(config, m_max), report_format), ending='')
        else:
            self.stdout.write(emit_report(resonance_sums(run.orbits), report_format), ending='')

    def _sweep(self, options, run: RunConfig, truncation: int, report_format: str):
        default_min, default_max = Config.default_i1_range()
        i1_range = (
            _first(options['i1_min'], run.i1_min, default_min),
            _first(options['i1_max'], run.i1_max, default_max),
        )
        q_max = _first(options['q_max'], run.q_max, default=Config.default_q_max)
        workers = _first(options['workers'], default=Config.default_workers)
        if workers < 1:
            raise CommandError(f"workers must be positive, got {workers}")
        report = sweep_theorem_1_1(i1_range, q_max, truncation, workers=workers)
        self.stdout.write(emit_report(report, report_format), ending='')
        if not report.certified:
            raise CommandError(
                f"sweep not certified: feasible={report.feasible_count} inconclusive={len(report.inconclusive)}",
                returncode=1,
            )

    def _analyze(self, run: RunConfig, truncation: int, report_format: str):
        feasible = []
        for index, config in enumerate(run.orbits):
            try:
                verdict = analyze_single_orbit(config, truncation)
            except InconclusiveTruncationError as e:
                raise CommandError(f"inconclusive: {e}", returncode=1)
            if index and report_format == 'kv':
                self.stdout.write('\n', ending='')
            self.stdout.write(emit_report(verdict, report_format), ending='')
            if verdict.kind is VerdictKind.FEASIBLE:
                feasible.append(config.label)
        if feasible:
            raise CommandError(f"feasible: {', '.join(feasible)}", returncode=1)
