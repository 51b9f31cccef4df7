"""
Report rendering for the maslovkit command.

Two formats are supported: 'text' for people, with the derivation trace of
each verdict, and 'kv', a stable key=value serialization with one record per
analyzed orbit or grid point and blank lines between records. The kv schema
is documented in CLI_DOCUMENTATION.md.
"""

import logging
from typing import Any, Dict, List, Sequence, Union

from .case_analyzer import SweepReport, Verdict, VerdictKind
from .models import IterationData
from .resonance import ResonanceReport
from .serializers import (
    RUN_KEYS,
    IterationDataSerializer,
    ResonanceReportSerializer,
    RunConfig,
    VerdictSerializer,
    orbit_fields,
)

logger = logging.getLogger(__name__)

Reportable = Union[Verdict, SweepReport, ResonanceReport, Sequence[IterationData]]


def _kv_value(value: Any) -> str:
    if isinstance(value, bool):
        return 'true' if value else 'false'
    return str(value)


def _kv_lines(record: Dict[str, Any]) -> List[str]:
    """Flatten one record; nested dicts and lists become dotted keys"""
    lines = []
    for key, value in record.items():
        if value is None:
            continue
        if isinstance(value, dict):
            lines.extend(f"{key}.{name}={_kv_value(item)}" for name, item in value.items())
        elif isinstance(value, list):
            for index, item in enumerate(value, start=1):
                lines.extend(f"{key}.{index}.{name}={_kv_value(v)}" for name, v in item.items())
        else:
            lines.append(f"{key}={_kv_value(value)}")
    return lines


def _kv_records(records: List[Dict[str, Any]]) -> str:
    return '\n\n'.join('\n'.join(_kv_lines(record)) for record in records) + '\n'


def _summary_counts(report: SweepReport) -> Dict[str, int]:
    counts = {'points': len(report.verdicts) + len(report.inconclusive)}
    counts.update({kind.name.lower(): count for kind, count in report.counts.items()})
    counts['inconclusive'] = len(report.inconclusive)
    return counts


def _verdict_record(verdict: Verdict) -> Dict[str, Any]:
    record = {'record': 'verdict'}
    record.update(VerdictSerializer(verdict).data)
    return record


def _verdict_text(verdict: Verdict) -> str:
    lines = [f"{verdict.config.label}: {verdict.kind.value}"]
    facts = []
    if verdict.mean_index is not None:
        facts.append(f"mean_index={verdict.mean_index}")
    if verdict.period is not None:
        facts.append(f"K(y)={verdict.period}")
    if verdict.guard is not None:
        facts.append(f"N={verdict.truncation} G={verdict.guard}")
    if facts:
        lines.append('  ' + ' '.join(facts))
    if verdict.first_violation is not None:
        degree, value = verdict.first_violation
        lines.append(f"  first violation: u_{degree} = {value}")
    lines.append('  trace:')
    lines.extend(f"    {number}. {step}" for number, step in enumerate(verdict.trace, start=1))
    return '\n'.join(lines) + '\n'


def _sweep_text(report: SweepReport) -> str:
    grid = report.grid
    lines = [f"sweep: i1 in [{grid['i1_min']}, {grid['i1_max']}], q_max={grid['q_max']}, N={grid['truncation']}"]
    for key, verdict in report.verdicts:
        suffix = ''
        if verdict.kind is VerdictKind.MORSE_SERIES_CONTRADICTION and verdict.first_violation:
            suffix = f" (u_{verdict.first_violation[0]} = {verdict.first_violation[1]})"
        elif verdict.kind is VerdictKind.SDM:
            suffix = f" (mean_index={verdict.mean_index})"
        lines.append(f"{key}: {verdict.kind.value}{suffix}")
    for key, message in report.inconclusive:
        lines.append(f"{key}: inconclusive, {message}")
    summary = ' '.join(f"{name}={count}" for name, count in _summary_counts(report).items())
    lines.append(f"summary: {summary}")
    return '\n'.join(lines) + '\n'


def _sweep_records(report: SweepReport) -> List[Dict[str, Any]]:
    records = []
    for _, verdict in report.verdicts:
        records.append(_verdict_record(verdict))
    for key, message in report.inconclusive:
        records.append({'record': 'inconclusive', 'point': str(key), 'message': message})
    summary: Dict[str, Any] = {'record': 'summary'}
    summary.update(report.grid)
    summary.update(_summary_counts(report))
    summary['certified'] = report.certified
    records.append(summary)
    return records


def _table_text(rows: Sequence[IterationData]) -> str:
    lines = [f"{'m':>6} {'i(y,m)':>8} {'i(y^m)':>8} {'nu(y^m)':>8}"]
    lines.extend(f"{row.m:>6} {row.maslov:>8} {row.morse:>8} {row.nullity:>8}" for row in rows)
    return '\n'.join(lines) + '\n'


def _resonance_text(report: ResonanceReport) -> str:
    positive, negative = report.holds
    return (
        f"resonance over {report.orbit_count} orbits\n"
        f"  sum over i_hat > 0 of chi_hat/i_hat = {report.sum_positive} "
        f"({'holds' if positive else 'fails'}, target 1/2)\n"
        f"  sum over i_hat < 0 of chi_hat/i_hat = {report.sum_negative} "
        f"({'holds' if negative else 'fails'}, target 0)\n"
    )


def emit_report(obj: Reportable, format: str = 'text') -> str:
    """
    Render a Verdict, SweepReport, ResonanceReport or iterate table.

    Args:
        obj: the analysis result
        format (str): 'text' or 'kv'

    Raises:
        ValueError: for an unknown format
        TypeError: for an object that is not an analysis result
    """
    if format not in ('text', 'kv'):
        raise ValueError(f"unknown report format {format!r}")
    text = format == 'text'

    if isinstance(obj, Verdict):
        return _verdict_text(obj) if text else _kv_records([_verdict_record(obj)])
    if isinstance(obj, SweepReport):
        return _sweep_text(obj) if text else _kv_records(_sweep_records(obj))
    if isinstance(obj, ResonanceReport):
        if text:
            return _resonance_text(obj)
        record = {'record': 'resonance'}
        record.update(ResonanceReportSerializer(obj).data)
        return _kv_records([record])
    if isinstance(obj, (list, tuple)) and all(isinstance(row, IterationData) for row in obj):
        if text:
            return _table_text(obj)
        return _kv_records([{'record': 'iterate', **IterationDataSerializer(row).data} for row in obj])
    raise TypeError(f"cannot report on {type(obj).__name__}")


def render_config(run: RunConfig) -> str:
    """Write a RunConfig back in the config format; parse_config reads it back unchanged"""
    records = []
    header = [f"{key}={getattr(run, key)}" for key in RUN_KEYS if getattr(run, key) is not None]
    if header:
        records.append('\n'.join(header))
    for config in run.orbits:
        records.append('\n'.join(f"{key}={value}" for key, value in orbit_fields(config)))
    logger.debug(f"render_config: {len(run.orbits)} orbit records")
    return '\n\n'.join(records) + '\n'
