"""
Single-orbit case analysis and the multiplicity sweep.

analyze_single_orbit assumes a hypothetical world with exactly one prime
closed characteristic y and pushes it through the constraints in order:

    (a) a non-degenerate orbit is settled by the external non-degenerate theorem
    (b) the resonance identity needs i_hat(y) > 0
    (c) the critical type vectors must be admissible and satisfy the identity
    (d) every surviving assignment must satisfy Morse positivity
    (e) a survivor with i_hat(y) = 2 on a degenerate orbit is a symplectically
        degenerate maximum, settled by the external SDM theorem
    (f) anything else is Feasible and means the replay found a gap

sweep_theorem_1_1 runs the pipeline over the whole grid of degenerate cases.

Classes:
    VerdictKind: the five possible outcomes
    Verdict: outcome of one analysis together with its derivation trace
    GridKey: coordinates of one sweep grid point
    SweepReport: every verdict of a sweep plus summary counts
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import gcd
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

from .conf import Config
from .critical_types import derived_nondegenerate_vectors, euler_term_sign, is_admissible
from .exceptions import InconclusiveTruncationError, InvalidConfigError, UnsupportedCaseError
from .index_iteration import is_degenerate, mean_index, minimal_period, morse_index, nullity
from .models import Case1, Case2, Case3, Case4, CriticalTypeVector, NonDegenerate, NormalFormCase, OrbitConfig
from .morse_series import build_morse_series, check_positivity, even_parity_shortcut, guard_for
from .resonance import POSITIVE_TARGET, resonance_sums, solve_interior_k

logger = logging.getLogger(__name__)

SDM_MEAN_INDEX = Fraction(2)

Assignment = Dict[int, CriticalTypeVector]


class VerdictKind(Enum):
    RESONANCE_CONTRADICTION = 'ResonanceContradiction'
    MORSE_SERIES_CONTRADICTION = 'MorseSeriesContradiction'
    SDM = 'SDM'
    NONDEGENERATE_EXTERNAL = 'NonDegenerateExternal'
    FEASIBLE = 'Feasible'

    @property
    def is_contradiction(self) -> bool:
        return self in (VerdictKind.RESONANCE_CONTRADICTION, VerdictKind.MORSE_SERIES_CONTRADICTION)


@dataclass
class Verdict:
    """
    Outcome of analyze_single_orbit.

    Attributes:
        kind (VerdictKind): the verdict
        config (OrbitConfig): the analyzed orbit
        trace (List[str]): derivation steps in order, each naming the constraint that fired
        mean_index (Optional[Fraction]): i_hat(y) when it is known
        period (Optional[int]): K(y) for degenerate orbits
        truncation (Optional[int]): N used for the Morse series
        guard (Optional[int]): G used for positivity verdicts
        first_violation (Optional[Tuple[int, Fraction]]): (degree, u_degree) of the
            first negative coefficient for a MorseSeriesContradiction
        intermediates (Dict[str, Fraction]): named values derived on the way, e.g.
            'k_1(y^2)' or 'i(y)'
        assignments (List[Assignment]): k vector assignments that satisfy the
            resonance identity and the critical type clauses
    """
    kind: VerdictKind
    config: OrbitConfig
    trace: List[str] = field(default_factory=list)
    mean_index: Optional[Fraction] = None
    period: Optional[int] = None
    truncation: Optional[int] = None
    guard: Optional[int] = None
    first_violation: Optional[Tuple[int, Fraction]] = None
    intermediates: Dict[str, Fraction] = field(default_factory=dict)
    assignments: List[Assignment] = field(default_factory=list)


def _iterate_name(m: int) -> str:
    return 'y' if m == 1 else f'y^{m}'


def _format_assignment(assignment: Assignment) -> str:
    return ', '.join(f"k({_iterate_name(m)})={vector}" for m, vector in sorted(assignment.items()))


@dataclass
class _Candidates:
    survivors: List[Assignment] = field(default_factory=list)
    # admissible apart from the boundary bound of clause (i)
    boundary_rejected: List[Assignment] = field(default_factory=list)


def _check_supplied(config: OrbitConfig, m: int, vector: CriticalTypeVector) -> None:
    expected = nullity(config.case, m)
    if vector.nullity != expected:
        raise InvalidConfigError(
            f"k vector for {_iterate_name(m)} must have nu({_iterate_name(m)}) = {expected} entries, got {vector}"
        )


def _solve_entry(config: OrbitConfig, base: Assignment, m: int, l: int) -> Fraction:
    unknown = dict(base)
    unknown[m] = CriticalTypeVector.unit(nullity(config.case, m), l, None)
    return solve_interior_k(config.with_k_vectors(unknown))


def _classify_solution(value: Fraction, nu: int, l: int) -> Tuple[bool, str]:
    if value.denominator != 1 or value <= 0:
        return False, "not a positive integer"
    if l in (0, nu - 1) and value > 1:
        return False, "critical type clause (i) bounds boundary entries by 1"
    return True, ""


def _enumerate_open_class(config: OrbitConfig, base: Assignment, m: int, verdict: Verdict,
                          candidates: _Candidates) -> None:
    """
    Candidates for the one degenerate residue class m without a supplied
    vector. By clause (v) an admissible vector has at most one non-zero entry,
    so the zero vector and one exactly solved single-entry vector per
    position are all there is.
    """
    nu = nullity(config.case, m)
    period = verdict.period
    name = _iterate_name(m)

    fixed = sum(
        euler_term_sign(config, n, l) * k
        for n, vector in base.items()
        for l, k in enumerate(vector.entries)
    )
    required = period * verdict.mean_index * POSITIVE_TARGET - fixed
    alternating = required * euler_term_sign(config, m, 0)
    verdict.intermediates[f"alternating_sum({name})"] = alternating
    verdict.trace.append(
        f"resonance identity: chi_hat(y)/i_hat(y) = 1/2 requires "
        f"sum_l (-1)^l k_l({name}) = {alternating} with nu({name}) = {nu}, i({name}) = "
        f"{morse_index(config.case, config.i1, m)}"
    )

    zero = dict(base)
    zero[m] = CriticalTypeVector.zero(nu)
    if required == 0:
        verdict.trace.append(f"k({name}) = {zero[m]} satisfies the resonance identity")
        candidates.survivors.append(zero)
    else:
        verdict.trace.append(f"k({name}) = {zero[m]} rejected: resonance identity fails")

    for l in range(nu):
        value = _solve_entry(config, base, m, l)
        key = f"k_{l}({name})"
        verdict.intermediates[key] = value
        ok, reason = _classify_solution(value, nu, l)
        if ok:
            assignment = dict(base)
            assignment[m] = CriticalTypeVector.unit(nu, l, int(value))
            admissible, why = is_admissible(assignment[m])
            if admissible:
                verdict.trace.append(f"{key} = {value} from the resonance identity: admissible")
                candidates.survivors.append(assignment)
                continue
            reason = why
        verdict.trace.append(f"{key} = {value} from the resonance identity: rejected, {reason}")
        if value.denominator == 1 and value > 1 and l in (0, nu - 1):
            assignment = dict(base)
            assignment[m] = CriticalTypeVector.unit(nu, l, int(value))
            candidates.boundary_rejected.append(assignment)


def _candidate_assignments(config: OrbitConfig, verdict: Verdict) -> _Candidates:
    period = verdict.period
    supplied = dict(config.k_vectors or {})
    for m, vector in supplied.items():
        if not 1 <= m <= period:
            raise InvalidConfigError(f"k vectors are keyed by m in 1..K(y) = 1..{period}, got m = {m}")
        _check_supplied(config, m, vector)

    base: Assignment = derived_nondegenerate_vectors(config)
    for m, vector in sorted(base.items()):
        if m not in supplied:
            verdict.trace.append(
                f"{_iterate_name(m)} is non-degenerate: k_0({_iterate_name(m)}) = {vector.entries[0]} "
                f"from the parity of i({_iterate_name(m)}) - i(y)"
            )
    base.update(supplied)

    candidates = _Candidates()
    open_classes = [m for m in range(1, period + 1) if m not in base]
    unknown = [m for m, vector in base.items() if not vector.is_known]

    if open_classes and unknown:
        raise UnsupportedCaseError(f"{config.label}: mixing open residue classes with unknown entries")
    if len(open_classes) > 1:
        raise UnsupportedCaseError(
            f"{config.label}: {len(open_classes)} degenerate residue classes per period; only one is supported"
        )

    if open_classes:
        _enumerate_open_class(config, base, open_classes[0], verdict, candidates)
        return candidates

    if unknown:
        value = solve_interior_k(config.with_k_vectors(base))
        m = unknown[0]
        l = base[m].unknown_positions[0]
        key = f"k_{l}({_iterate_name(m)})"
        verdict.intermediates[key] = value
        if value.denominator != 1 or value < 0:
            verdict.trace.append(f"{key} = {value} from the resonance identity: rejected, not a non-negative integer")
            return candidates
        base[m] = base[m].with_entry(l, int(value))
        verdict.trace.append(f"{key} = {value} from the resonance identity")

    for m, vector in sorted(base.items()):
        admissible, reason = is_admissible(vector)
        if not admissible:
            verdict.trace.append(f"k({_iterate_name(m)}) = {vector} rejected: {reason}")
            return candidates
    report = resonance_sums([config.with_k_vectors(base)])
    if not report.holds[0]:
        verdict.trace.append(
            f"{_format_assignment(base)}: resonance identity gives {report.sum_positive}, not 1/2"
        )
        return candidates
    verdict.trace.append(f"{_format_assignment(base)} satisfies the resonance identity")
    candidates.survivors.append(base)
    return candidates


def _certified_window(config: OrbitConfig, n_trunc: int, guard: int) -> None:
    first_degree = morse_index(config.case, config.i1, 1)
    if n_trunc - guard < first_degree + 1:
        needed = first_degree + 1 + guard
        raise InconclusiveTruncationError(
            f"{config.label}: truncation N = {n_trunc} leaves no certified degrees "
            f"(N - G = {n_trunc - guard} < i(y) + 1 = {first_degree + 1}); raise N to at least {needed}",
            truncation=n_trunc,
            needed=needed,
        )


def _positivity(config: OrbitConfig, assignment: Assignment, n_trunc: int, guard: int):
    series = build_morse_series(config.with_k_vectors(assignment), n_trunc)
    result = check_positivity(series, guard)
    shortcut = even_parity_shortcut(series, guard)
    if shortcut is None:
        return result, False
    if shortcut.verdict is not result.verdict:
        # Only possible when the first difference sits at degree N - G itself
        logger.warning(
            f"{config.label}: even-degree comparison and u recurrence disagree for "
            f"{_format_assignment(assignment)}; keeping the u recurrence verdict"
        )
        return result, False
    return result, True


def _corroborate(config: OrbitConfig, rejected: Sequence[Assignment], n_trunc: int, guard: int,
                 verdict: Verdict) -> None:
    try:
        _certified_window(config, n_trunc, guard)
    except InconclusiveTruncationError:
        verdict.trace.append("boundary-rejected solutions not corroborated: truncation too small")
        return
    for assignment in rejected:
        result, _ = _positivity(config, assignment, n_trunc, guard)
        if result.violated:
            degree, value = result.first_violation
            verdict.trace.append(
                f"corroboration: with {_format_assignment(assignment)} Morse positivity also fails "
                f"at degree {degree} (u = {value})"
            )
        else:
            verdict.trace.append(
                f"corroboration: with {_format_assignment(assignment)} Morse positivity alone does not exclude it"
            )


def _is_degenerate_orbit(case: NormalFormCase, period: int) -> bool:
    return any(is_degenerate(case, m) for m in range(1, period + 1))


def analyze_single_orbit(config: OrbitConfig, n_trunc: Optional[int] = None, guard: Optional[int] = None) -> Verdict:
    """
    Run the single-orbit pipeline and return its verdict.

    Args:
        config (OrbitConfig): the orbit; supplied k_vectors pin the assignment,
            missing degenerate classes are solved for
        n_trunc (Optional[int]): Morse series truncation N, default from Config
        guard (Optional[int]): positivity guard G, default max(MIN_GUARD, ceil(i_hat))

    Raises:
        InconclusiveTruncationError: if a survivor needs the Morse series and
            N - G leaves no certified degrees
        UnsupportedCaseError: for more than one open degenerate residue class
    """
    if n_trunc is None:
        n_trunc = Config.default_truncation()
    case = config.case
    verdict = Verdict(kind=VerdictKind.FEASIBLE, config=config, truncation=n_trunc)

    if isinstance(case, NonDegenerate):
        verdict.kind = VerdictKind.NONDEGENERATE_EXTERNAL
        verdict.mean_index = case.mean_index
        verdict.period = minimal_period(case)
        verdict.trace.append(
            f"{config.label}: every iterate is non-degenerate; at least two geometrically distinct "
            f"closed characteristics exist by the non-degenerate multiplicity theorem"
        )
        logger.debug(f"analyze_single_orbit({config.label}) -> {verdict.kind.value}")
        return verdict

    i_hat = mean_index(case, config.i1)
    verdict.mean_index = i_hat
    verdict.intermediates['mean_index'] = i_hat
    verdict.intermediates['i(y)'] = Fraction(morse_index(case, config.i1, 1))
    if i_hat <= 0:
        verdict.kind = VerdictKind.RESONANCE_CONTRADICTION
        verdict.trace.append(
            f"{config.label}: i_hat(y) = {i_hat} <= 0, but a single orbit must carry the whole "
            f"resonance sum 1/2 over orbits with positive mean index"
        )
        logger.debug(f"analyze_single_orbit({config.label}) -> {verdict.kind.value}")
        return verdict

    period = minimal_period(case)
    verdict.period = period
    verdict.intermediates['K(y)'] = Fraction(period)
    verdict.guard = guard if guard is not None else guard_for(i_hat, Config.min_guard())
    verdict.trace.append(
        f"{config.label}: i_hat(y) = {i_hat}, K(y) = {period}, i(y) = {morse_index(case, config.i1, 1)}"
    )
    if isinstance(case, Case2) and i_hat > 2:
        verdict.trace.append(
            f"i_hat(y) = {i_hat} > 2: chi_hat(y) = i_hat(y)/2 exceeds 1, so the degenerate iterate "
            f"would need an entry above what clauses (i) and (v) allow"
        )

    candidates = _candidate_assignments(config, verdict)
    if candidates.boundary_rejected:
        _corroborate(config, candidates.boundary_rejected, n_trunc, verdict.guard, verdict)
    if not candidates.survivors:
        verdict.kind = VerdictKind.RESONANCE_CONTRADICTION
        verdict.trace.append("no admissible k assignment satisfies the resonance identity")
        logger.debug(f"analyze_single_orbit({config.label}) -> {verdict.kind.value}")
        return verdict

    _certified_window(config, n_trunc, verdict.guard)
    passing: List[Assignment] = []
    for assignment in candidates.survivors:
        verdict.assignments.append(assignment)
        result, shortcut = _positivity(config, assignment, n_trunc, verdict.guard)
        method = 'u recurrence, confirmed by even-degree comparison' if shortcut else 'u recurrence'
        if result.violated:
            degree, value = result.first_violation
            if verdict.first_violation is None:
                verdict.first_violation = result.first_violation
            verdict.trace.append(
                f"{_format_assignment(assignment)}: Morse positivity violated at degree {degree} "
                f"(u = {value}, {method})"
            )
        else:
            verdict.trace.append(
                f"{_format_assignment(assignment)}: Morse positivity holds up to degree "
                f"N - G = {n_trunc - verdict.guard} ({method})"
            )
            passing.append(assignment)

    if not passing:
        verdict.kind = VerdictKind.MORSE_SERIES_CONTRADICTION
        verdict.trace.append("every surviving assignment contradicts Morse positivity")
    elif i_hat == SDM_MEAN_INDEX and _is_degenerate_orbit(case, period):
        verdict.kind = VerdictKind.SDM
        verdict.first_violation = None
        verdict.trace.append(
            "degenerate orbit with i_hat(y) = 2: a symplectically degenerate maximum, so the Reeb "
            "flow has infinitely many periodic orbits by the SDM theorem"
        )
    else:
        verdict.kind = VerdictKind.FEASIBLE
        verdict.first_violation = None
        verdict.trace.append("no constraint excludes this orbit")
        logger.warning(f"{config.label}: Feasible verdict with {_format_assignment(passing[0])}")

    logger.debug(f"analyze_single_orbit({config.label}) -> {verdict.kind.value}")
    return verdict


class GridKey(NamedTuple):
    case: str
    parameter: str
    i1: int

    def __str__(self) -> str:
        parameter = f" {self.parameter}" if self.parameter else ''
        return f"case={self.case}{parameter} i1={self.i1}"


@dataclass
class SweepReport:
    """
    Verdicts of every grid point of one sweep, in grid order.

    Attributes:
        grid (Dict[str, Union[int, str]]): the sweep bounds
        verdicts (List[Tuple[GridKey, Verdict]]): one verdict per decided grid point
        inconclusive (List[Tuple[GridKey, str]]): grid points whose truncation was too small
    """
    grid: Dict[str, Union[int, str]]
    verdicts: List[Tuple[GridKey, Verdict]] = field(default_factory=list)
    inconclusive: List[Tuple[GridKey, str]] = field(default_factory=list)

    @property
    def counts(self) -> Dict[VerdictKind, int]:
        counts = {kind: 0 for kind in VerdictKind}
        for _, verdict in self.verdicts:
            counts[verdict.kind] += 1
        return counts

    @property
    def feasible_count(self) -> int:
        return self.counts[VerdictKind.FEASIBLE]

    @property
    def certified(self) -> bool:
        return self.feasible_count == 0 and not self.inconclusive

    def verdicts_of(self, kind: VerdictKind) -> List[Tuple[GridKey, Verdict]]:
        return [(key, verdict) for key, verdict in self.verdicts if verdict.kind is kind]


def rotation_grid(q_max: int) -> List[Fraction]:
    """Reduced p/q with q <= q_max, 0 < p/q < 2 and p/q != 1, ascending"""
    turns = {
        Fraction(p, q)
        for q in range(1, q_max + 1)
        for p in range(1, 2 * q)
        if gcd(p, q) == 1 and Fraction(p, q) != 1
    }
    return sorted(turns)


def sweep_grid(i1_range: Tuple[int, int], q_max: int) -> List[Tuple[GridKey, OrbitConfig]]:
    """
    Every grid point of the degenerate case list with i1 in the closed
    interval i1_range, respecting each case's parity of i1.
    """
    i1_min, i1_max = i1_range
    even = [i1 for i1 in range(i1_min, i1_max + 1) if i1 % 2 == 0]
    odd = [i1 for i1 in range(i1_min, i1_max + 1) if i1 % 2 != 0]
    grid: List[Tuple[GridKey, OrbitConfig]] = []
    for b in (-1, 0, 1):
        grid.extend((GridKey('1', f"b={b}", i1), OrbitConfig(Case1(b), i1)) for i1 in even)
    for turn in rotation_grid(q_max):
        grid.extend((GridKey('2', f"theta={turn}", i1), OrbitConfig(Case2(turn), i1)) for i1 in even)
    for b in (0, 1):
        grid.extend((GridKey('3', f"b={b}", i1), OrbitConfig(Case3(b), i1)) for i1 in even)
    grid.extend((GridKey('4', '', i1), OrbitConfig(Case4(), i1)) for i1 in odd)
    return grid


def _evaluate(point: Tuple[GridKey, OrbitConfig], n_trunc: int) -> Tuple[GridKey, Union[Verdict, str]]:
    key, config = point
    try:
        return key, analyze_single_orbit(config, n_trunc)
    except InconclusiveTruncationError as e:
        logger.warning(f"{key}: {e}")
        return key, str(e)


def sweep_theorem_1_1(i1_range: Tuple[int, int], q_max: int, n_trunc: int, workers: int = 1) -> SweepReport:
    """
    Analyze every single-orbit world of the degenerate case list.

    Args:
        i1_range (Tuple[int, int]): closed interval of i(y,1); empty when min > max
        q_max (int): largest rotation denominator for Case 2
        n_trunc (int): Morse series truncation N
        workers (int): thread pool size; grid points are independent and the
            results are merged back in grid order

    Returns:
        SweepReport: feasible_count 0 with no inconclusive points certifies the replay
    """
    if workers < 1:
        raise ValueError(f"workers must be positive, got {workers}")
    grid = sweep_grid(i1_range, q_max)
    report = SweepReport(grid={
        'i1_min': i1_range[0],
        'i1_max': i1_range[1],
        'q_max': q_max,
        'truncation': n_trunc,
    })
    logger.info(f"sweep over {len(grid)} grid points, N={n_trunc}, workers={workers}")

    if workers == 1:
        results = dict(_evaluate(point, n_trunc) for point in grid)
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            results = dict(executor.map(lambda point: _evaluate(point, n_trunc), grid))

    for key, _ in grid:
        outcome = results[key]
        if isinstance(outcome, Verdict):
            report.verdicts.append((key, outcome))
        else:
            report.inconclusive.append((key, outcome))

    summary = ', '.join(f"{kind.value}={count}" for kind, count in report.counts.items())
    logger.info(f"sweep finished: {summary}, inconclusive={len(report.inconclusive)}")
    if report.feasible_count:
        logger.warning(f"sweep found {report.feasible_count} feasible grid points")
    return report
