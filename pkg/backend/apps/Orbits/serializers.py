"""
Django REST Framework Serializers for maslovkit runs

This module validates the line-oriented run configuration and turns analysis
results into flat records. DRF is used for its field validation and its
error reporting only; nothing here is exposed over HTTP.

Config format: one key=value per line, '#' starts a comment, blank lines
separate records. A record holding orbit keys describes one orbit; run keys
may appear in any record but only once per file.

Serializers included:
- OrbitSpecSerializer: one orbit record, builds an OrbitConfig
- RunConfigSerializer: run keys (mode, truncation, format, sweep bounds)
- VerdictSerializer: Verdict -> record
- IterationDataSerializer: one iterate table row -> record
- ResonanceReportSerializer: ResonanceReport -> record
"""

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from rest_framework import serializers

from .conf import Config
from .exceptions import ConfigParseError, InvalidBlockError, InvalidConfigError
from .index_iteration import nullity
from .models import (
    Case1,
    Case2,
    Case3,
    Case4,
    CaseKind,
    CriticalTypeVector,
    NonDegenerate,
    OrbitConfig,
)
from .validators import FRACTION_PATTERN, ValidationUtils

MODES = ('analyze', 'sweep', 'table', 'resonance')
ORBIT_MODES = ('analyze', 'table', 'resonance')

ORBIT_KEYS = ('case', 'b', 'theta', 'i1', 'jump', 'block', 'mean_index')
RUN_KEYS = ('mode', 'truncation', 'format', 'm_max', 'i1_min', 'i1_max', 'q_max')
K_KEY_PATTERN = re.compile(r'^k(\d+)$')
K_ENTRY_PATTERN = re.compile(r'^(\d+|\?)$')


def parse_fraction(text: str) -> Fraction:
    """Parse "p/q" or "p" into a Fraction; raises ValueError when malformed"""
    ok, message = ValidationUtils.validate_fraction(text)
    if not ok:
        raise ValueError(message)
    match = FRACTION_PATTERN.match(str(text))
    return Fraction(int(match.group(1)), int(match.group(2) or 1))


def parse_k_vector(text: str) -> CriticalTypeVector:
    """Parse "a,b,c" into a CriticalTypeVector; '?' marks an unknown entry"""
    items = [item.strip() for item in text.split(',')]
    if not items or any(not K_ENTRY_PATTERN.match(item) for item in items):
        raise ValueError(f"Malformed k vector {text!r}: expected comma separated non-negative integers or '?'")
    return CriticalTypeVector(tuple(None if item == '?' else int(item) for item in items))


@dataclass
class RunConfig:
    """
    A parsed run configuration.

    Unset run keys stay None and are resolved by the command from flags,
    environment and settings.
    """
    mode: Optional[str] = None
    orbits: List[OrbitConfig] = field(default_factory=list)
    truncation: Optional[int] = None
    format: Optional[str] = None
    m_max: Optional[int] = None
    i1_min: Optional[int] = None
    i1_max: Optional[int] = None
    q_max: Optional[int] = None


class FractionField(serializers.CharField):
    """An exact rational written as p/q"""

    def to_internal_value(self, data):
        text = super().to_internal_value(data)
        try:
            return parse_fraction(text)
        except ValueError as e:
            raise serializers.ValidationError(str(e))

    def to_representation(self, value):
        return None if value is None else str(value)


class OrbitSpecSerializer(serializers.Serializer):
    """
    Serializer for one orbit record.

    Critical type vectors are parsed line by line before validation and are
    passed in through context['k_vectors'].

    Fields:
        - case: '1', '2', '3', '4' or 'nondegenerate'
        - b: off-diagonal entry of the second block (cases 1 and 3, default 0)
        - theta: theta/pi as p/q (case 2)
        - i1: Maslov-type index i(y,1)
        - jump, block, mean_index: non-degenerate orbits only
    """
    case = serializers.ChoiceField(choices=[kind.value for kind in CaseKind])
    b = serializers.IntegerField(required=False)
    theta = FractionField(required=False)
    i1 = serializers.IntegerField()
    jump = serializers.ChoiceField(choices=['even', 'odd'], required=False)
    block = serializers.ChoiceField(choices=['elliptic', 'hyperbolic'], required=False)
    mean_index = FractionField(required=False)

    def _build_case(self, attrs):
        kind = CaseKind(attrs['case'])
        if 'b' in attrs and kind not in (CaseKind.CASE_1, CaseKind.CASE_3):
            raise serializers.ValidationError({'b': f"b applies to cases 1 and 3 only, not case {kind.value}"})
        if 'theta' in attrs and kind is not CaseKind.CASE_2:
            raise serializers.ValidationError({'theta': f"theta applies to case 2 only, not case {kind.value}"})
        nondegenerate_keys = [key for key in ('jump', 'block', 'mean_index') if key in attrs]
        if nondegenerate_keys and kind is not CaseKind.NONDEGENERATE:
            key = nondegenerate_keys[0]
            raise serializers.ValidationError({key: f"{key} applies to non-degenerate orbits only"})

        try:
            if kind is CaseKind.CASE_1:
                return Case1(attrs.get('b', 0))
            if kind is CaseKind.CASE_3:
                return Case3(attrs.get('b', 0))
        except (InvalidConfigError, InvalidBlockError) as e:
            raise serializers.ValidationError({'b': str(e)})

        if kind is CaseKind.CASE_2:
            if 'theta' not in attrs:
                raise serializers.ValidationError({'case': "Case 2 requires theta"})
            try:
                return Case2(attrs['theta'])
            except (InvalidConfigError, InvalidBlockError) as e:
                raise serializers.ValidationError({'theta': str(e)})
        if kind is CaseKind.CASE_4:
            return Case4()
        return NonDegenerate(
            elliptic=attrs.get('block', 'elliptic') == 'elliptic',
            jump_odd=attrs.get('jump', 'even') == 'odd',
            mean_index=attrs.get('mean_index'),
        )

    def validate(self, attrs):
        """
        Build the OrbitConfig, reporting each violated rule on the field it
        belongs to.
        """
        case = self._build_case(attrs)
        try:
            attrs['config'] = OrbitConfig(case, attrs['i1'], self.context.get('k_vectors') or None)
        except InvalidConfigError as e:
            raise serializers.ValidationError({'i1': e.rule})
        for m, vector in sorted((self.context.get('k_vectors') or {}).items()):
            expected = nullity(case, m)
            if vector.nullity != expected:
                raise serializers.ValidationError({
                    f"k{m}": f"k{m} must have nu(y^{m}) = {expected} entries, got {vector.nullity}"
                })
        return attrs


class RunConfigSerializer(serializers.Serializer):
    """
    Serializer for the run keys of a configuration file.

    Every field is optional; the command fills the gaps.
    """
    mode = serializers.ChoiceField(choices=MODES, required=False)
    truncation = serializers.IntegerField(min_value=1, required=False)
    format = serializers.ChoiceField(choices=Config.OUTPUT_FORMATS, required=False)
    m_max = serializers.IntegerField(min_value=1, required=False)
    i1_min = serializers.IntegerField(required=False)
    i1_max = serializers.IntegerField(required=False)
    q_max = serializers.IntegerField(min_value=2, required=False)


@dataclass
class _Entry:
    line: int
    key: str
    value: str


def _split_records(text: str) -> List[List[_Entry]]:
    records: List[List[_Entry]] = []
    current: List[_Entry] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            if current:
                records.append(current)
                current = []
            continue
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise ConfigParseError(f"expected key=value, got {line!r}", number)
        key, value = (part.strip() for part in line.split('=', 1))
        current.append(_Entry(number, key, value))
    if current:
        records.append(current)
    return records


def _first_error(errors) -> str:
    if isinstance(errors, dict):
        return _first_error(next(iter(errors.values())))
    if isinstance(errors, list):
        return _first_error(errors[0])
    return str(errors)


def _raise_field_errors(errors: Dict, lines: Dict[str, int], fallback: int) -> None:
    for name, messages in errors.items():
        raise ConfigParseError(_first_error(messages), lines.get(name, fallback))


def _parse_orbit(record: List[_Entry]) -> OrbitConfig:
    data: Dict[str, str] = {}
    lines: Dict[str, int] = {}
    k_vectors: Dict[int, CriticalTypeVector] = {}
    for entry in record:
        k_match = K_KEY_PATTERN.match(entry.key)
        if entry.key in data or (k_match and int(k_match.group(1)) in k_vectors):
            raise ConfigParseError(f"duplicate key {entry.key!r}", entry.line)
        if k_match:
            m = int(k_match.group(1))
            if m < 1:
                raise ConfigParseError(f"k vectors are keyed by m >= 1, got {entry.key!r}", entry.line)
            try:
                k_vectors[m] = parse_k_vector(entry.value)
            except ValueError as e:
                raise ConfigParseError(str(e), entry.line)
            lines[f"k{m}"] = entry.line
        elif entry.key in ORBIT_KEYS:
            data[entry.key] = entry.value
            lines[entry.key] = entry.line

    first_line = record[0].line
    if 'case' not in data:
        raise ConfigParseError("orbit record has no case key", first_line)
    serializer = OrbitSpecSerializer(data=data, context={'k_vectors': k_vectors})
    if not serializer.is_valid():
        _raise_field_errors(serializer.errors, lines, lines.get('i1', first_line))
    return serializer.validated_data['config']


def parse_config(text: str) -> RunConfig:
    """
    Parse a run configuration.

    Raises:
        ConfigParseError: with the 1-based line number of the offending line,
            for unknown or duplicate keys, malformed fractions or k vectors and
            violated case rules such as "Case 4 requires odd i1"
    """
    run_data: Dict[str, str] = {}
    run_lines: Dict[str, int] = {}
    orbits: List[OrbitConfig] = []

    for record in _split_records(text):
        orbit_entries: List[_Entry] = []
        for entry in record:
            if entry.key in RUN_KEYS:
                if entry.key in run_data:
                    raise ConfigParseError(f"duplicate key {entry.key!r}", entry.line)
                run_data[entry.key] = entry.value
                run_lines[entry.key] = entry.line
            elif entry.key in ORBIT_KEYS or K_KEY_PATTERN.match(entry.key):
                orbit_entries.append(entry)
            else:
                raise ConfigParseError(f"unknown key {entry.key!r}", entry.line)
        if orbit_entries:
            orbits.append(_parse_orbit(orbit_entries))

    serializer = RunConfigSerializer(data=run_data)
    if not serializer.is_valid():
        _raise_field_errors(serializer.errors, run_lines, 1)
    values = serializer.validated_data

    mode = values.get('mode')
    if mode in ORBIT_MODES and not orbits:
        raise ConfigParseError(f"mode {mode} needs at least one orbit record", run_lines['mode'])

    return RunConfig(
        mode=mode,
        orbits=orbits,
        truncation=values.get('truncation'),
        format=values.get('format'),
        m_max=values.get('m_max'),
        i1_min=values.get('i1_min'),
        i1_max=values.get('i1_max'),
        q_max=values.get('q_max'),
    )


def _case_fields(config: OrbitConfig) -> List[Tuple[str, str]]:
    case = config.case
    fields = [('case', case.kind.value)]
    if isinstance(case, (Case1, Case3)):
        fields.append(('b', str(case.b)))
    elif isinstance(case, Case2):
        fields.append(('theta', str(case.rotation)))
    elif isinstance(case, NonDegenerate):
        fields.append(('block', 'elliptic' if case.elliptic else 'hyperbolic'))
        fields.append(('jump', 'odd' if case.jump_odd else 'even'))
        if case.mean_index is not None:
            fields.append(('mean_index', str(case.mean_index)))
    return fields


def orbit_fields(config: OrbitConfig) -> List[Tuple[str, str]]:
    """The key=value pairs of one orbit record, in rendering order"""
    fields = _case_fields(config)
    fields.append(('i1', str(config.i1)))
    for m, vector in sorted((config.k_vectors or {}).items()):
        fields.append((f"k{m}", ','.join('?' if v is None else str(v) for v in vector.entries)))
    return fields


def _format_violation(verdict) -> Tuple[Optional[int], Optional[str]]:
    if verdict.first_violation is None:
        return None, None
    degree, value = verdict.first_violation
    return degree, str(value)


class VerdictSerializer(serializers.Serializer):
    """
    Serializer for Verdict objects - one record per analyzed orbit.

    Case parameters are flattened the same way as in the config format;
    fractions are written as p/q.
    """
    label = serializers.CharField(source='config.label')
    verdict = serializers.SerializerMethodField()
    mean_index = serializers.SerializerMethodField()
    period = serializers.IntegerField(allow_null=True)
    truncation = serializers.IntegerField(allow_null=True)
    guard = serializers.IntegerField(allow_null=True)
    first_violation_degree = serializers.SerializerMethodField()
    first_violation_value = serializers.SerializerMethodField()
    intermediates = serializers.SerializerMethodField()
    assignments = serializers.SerializerMethodField()

    def get_verdict(self, obj):
        return obj.kind.value

    def get_mean_index(self, obj):
        return None if obj.mean_index is None else str(obj.mean_index)

    def get_first_violation_degree(self, obj):
        return _format_violation(obj)[0]

    def get_first_violation_value(self, obj):
        return _format_violation(obj)[1]

    def get_intermediates(self, obj):
        return {name: str(value) for name, value in obj.intermediates.items()}

    def get_assignments(self, obj):
        return [
            {f"k{m}": ','.join(str(v) for v in vector.entries) for m, vector in sorted(assignment.items())}
            for assignment in obj.assignments
        ]

    def to_representation(self, instance):
        data = dict(_case_fields(instance.config))
        data['i1'] = instance.config.i1
        data.update(super().to_representation(instance))
        return data


class IterationDataSerializer(serializers.Serializer):
    m = serializers.IntegerField()
    maslov = serializers.IntegerField()
    morse = serializers.IntegerField()
    nullity = serializers.IntegerField()


class ResonanceReportSerializer(serializers.Serializer):
    sum_positive = serializers.SerializerMethodField()
    sum_negative = serializers.SerializerMethodField()
    holds_positive = serializers.SerializerMethodField()
    holds_negative = serializers.SerializerMethodField()
    orbit_count = serializers.IntegerField()

    def get_sum_positive(self, obj):
        return str(obj.sum_positive)

    def get_sum_negative(self, obj):
        return str(obj.sum_negative)

    def get_holds_positive(self, obj):
        return obj.holds[0]

    def get_holds_negative(self, obj):
        return obj.holds[1]
