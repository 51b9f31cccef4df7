"""
Truncated formal Laurent series over the rationals, the normalized Morse
series of one orbit, and the positivity relation

    M(t) - 1/(1-t^2) = (1+t) U(t),  U with non-negative coefficients.

A series knows its truncation degree N: coefficients above N are unknown, not
zero. 1/(1-t^2) is always represented by its truncation geometric_even(N).
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Optional, Tuple

from .critical_types import residue_key
from .exceptions import MissingCriticalTypeError, UnsupportedSeriesError
from .index_iteration import mean_index, minimal_period, morse_index
from .models import OrbitConfig

logger = logging.getLogger(__name__)

DEFAULT_GUARD = 4

# i(y^m) >= m * i_hat - INDEX_DEFICIT for every case
INDEX_DEFICIT = 4


@dataclass(frozen=True)
class LaurentSeries:
    """
    sum_{d} c_d t^d with c stored for d = min_degree .. min_degree+len-1.

    Leading and trailing zeros are trimmed; the zero series has no stored
    coefficients and min_degree 0. truncation None means the series is an
    exact Laurent polynomial.
    """
    min_degree: int
    coefficients: Tuple[Fraction, ...]
    truncation: Optional[int] = None

    @classmethod
    def from_terms(cls, terms: Dict[int, Fraction], truncation: Optional[int] = None) -> 'LaurentSeries':
        kept = {
            degree: Fraction(value) for degree, value in terms.items()
            if value != 0 and (truncation is None or degree <= truncation)
        }
        if not kept:
            return cls(0, (), truncation)
        low, high = min(kept), max(kept)
        return cls(low, tuple(kept.get(d, Fraction(0)) for d in range(low, high + 1)), truncation)

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def max_degree(self) -> Optional[int]:
        if self.is_zero:
            return None
        return self.min_degree + len(self.coefficients) - 1

    def coefficient(self, degree: int) -> Fraction:
        """c_degree; raises ValueError above the truncation degree"""
        if self.truncation is not None and degree > self.truncation:
            raise ValueError(f"coefficient of t^{degree} is beyond truncation {self.truncation}")
        index = degree - self.min_degree
        if 0 <= index < len(self.coefficients):
            return self.coefficients[index]
        return Fraction(0)

    def terms(self) -> Iterator[Tuple[int, Fraction]]:
        for offset, value in enumerate(self.coefficients):
            if value != 0:
                yield self.min_degree + offset, value

    def as_dict(self) -> Dict[int, Fraction]:
        return dict(self.terms())

    def __add__(self, other: 'LaurentSeries') -> 'LaurentSeries':
        return add(self, other)

    def __sub__(self, other: 'LaurentSeries') -> 'LaurentSeries':
        return subtract(self, other)

    def __str__(self) -> str:
        if self.is_zero:
            body = '0'
        else:
            body = ' + '.join(f"{value}*t^{degree}" for degree, value in self.terms())
        if self.truncation is None:
            return body
        return f"{body} + O(t^{self.truncation + 1})"


def _combined_truncation(*truncations: Optional[int]) -> Optional[int]:
    known = [t for t in truncations if t is not None]
    return min(known) if known else None


def add(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    terms = a.as_dict()
    for degree, value in b.terms():
        terms[degree] = terms.get(degree, Fraction(0)) + value
    return LaurentSeries.from_terms(terms, _combined_truncation(a.truncation, b.truncation))


def scale(a: LaurentSeries, c) -> LaurentSeries:
    c = Fraction(c)
    return LaurentSeries.from_terms({d: c * v for d, v in a.terms()}, a.truncation)


def subtract(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    return add(a, scale(b, -1))


def monomial(c, d: int, truncation: Optional[int] = None) -> LaurentSeries:
    """c * t^d"""
    return LaurentSeries.from_terms({d: Fraction(c)}, truncation)


def geometric_even(n: int) -> LaurentSeries:
    """1 + t^2 + t^4 + ... truncated at degree n"""
    return LaurentSeries.from_terms({d: Fraction(1) for d in range(0, n + 1, 2)}, n)


def times_one_plus_t(u: LaurentSeries) -> LaurentSeries:
    """(1+t) U, known up to U's truncation"""
    terms: Dict[int, Fraction] = {}
    for degree, value in u.terms():
        terms[degree] = terms.get(degree, Fraction(0)) + value
        terms[degree + 1] = terms.get(degree + 1, Fraction(0)) + value
    return LaurentSeries.from_terms(terms, u.truncation)


def guard_for(i_hat: Fraction, minimum: int = DEFAULT_GUARD) -> int:
    """G = max(minimum, ceil(i_hat)); the default minimum is 4"""
    return max(minimum, math.ceil(i_hat))


def _iterates_up_to(i_hat: Fraction, n_trunc: int) -> Iterable[int]:
    # Past the first m with m*i_hat - 4 > N every iterate sits above degree N
    m = 1
    while m * i_hat - INDEX_DEFICIT <= n_trunc:
        yield m
        m += 1


def build_morse_series(config: OrbitConfig, n_trunc: int) -> LaurentSeries:
    """
    M(t) = sum_{m>=1} sum_l k_l(y^m) t^{i(y^m)+l}, every term of degree <= n_trunc.

    Raises:
        UnsupportedSeriesError: if the mean index is not positive
        MissingCriticalTypeError: if a residue class has no known vector
    """
    i_hat = mean_index(config.case, config.i1)
    if i_hat <= 0:
        raise UnsupportedSeriesError(
            f"{config.label}: mean index {i_hat} <= 0, the Morse series is not truncatable"
        )
    period = minimal_period(config.case)
    k_vectors = config.k_vectors or {}
    missing = [m for m in range(1, period + 1) if m not in k_vectors or not k_vectors[m].is_known]
    if missing:
        raise MissingCriticalTypeError(f"{config.label}: no known critical type vectors for m in {missing}")

    terms: Dict[int, Fraction] = {}
    iterates = 0
    for m in _iterates_up_to(i_hat, n_trunc):
        iterates += 1
        base = morse_index(config.case, config.i1, m)
        for l, k in enumerate(k_vectors[residue_key(m, period)].entries):
            degree = base + l
            if k and degree <= n_trunc:
                terms[degree] = terms.get(degree, Fraction(0)) + k
    series = LaurentSeries.from_terms(terms, n_trunc)
    logger.debug(f"build_morse_series({config.label}, N={n_trunc}): {iterates} iterates, "
                 f"{len(terms)} non-zero degrees")
    return series


class PositivityVerdict(Enum):
    NONNEGATIVE = 'nonnegative-up-to-truncation'
    VIOLATED = 'violated'


@dataclass(frozen=True)
class PositivityResult:
    u: LaurentSeries
    first_violation: Optional[Tuple[int, Fraction]]
    verdict: PositivityVerdict

    @property
    def violated(self) -> bool:
        return self.verdict is PositivityVerdict.VIOLATED


def _require_truncation(m_series: LaurentSeries) -> int:
    if m_series.truncation is None:
        raise ValueError("positivity checks need a truncated series")
    return m_series.truncation


def check_positivity(m_series: LaurentSeries, guard: int = DEFAULT_GUARD) -> PositivityResult:
    """
    Solve (1+t) U = M - geometric_even(N) for U and look for a negative
    coefficient at degrees <= N - guard.

    With c = M - geometric_even(N) supported from degree d0, the unique
    solution is u_i = c_i - u_{i-1}, u_{d0-1} = 0.
    """
    n = _require_truncation(m_series)
    c = subtract(m_series, geometric_even(n))
    limit = n - guard
    u_terms: Dict[int, Fraction] = {}
    first_violation: Optional[Tuple[int, Fraction]] = None
    if not c.is_zero:
        previous = Fraction(0)
        for degree in range(c.min_degree, n + 1):
            current = c.coefficient(degree) - previous
            u_terms[degree] = current
            if first_violation is None and current < 0 and degree <= limit:
                first_violation = (degree, current)
            previous = current
    verdict = PositivityVerdict.VIOLATED if first_violation else PositivityVerdict.NONNEGATIVE
    return PositivityResult(
        u=LaurentSeries.from_terms(u_terms, n),
        first_violation=first_violation,
        verdict=verdict,
    )


def even_parity_shortcut(m_series: LaurentSeries, guard: int = DEFAULT_GUARD) -> Optional[PositivityResult]:
    """
    When M has only even-degree terms, positivity forces U = 0, i.e.
    M = geometric_even(N) exactly. Returns None if M has an odd-degree term.

    The reported violation is the first degree <= N - guard where M and
    1/(1-t^2) differ, with the coefficient of their difference.
    """
    n = _require_truncation(m_series)
    if any(degree % 2 for degree, _ in m_series.terms()):
        return None
    c = subtract(m_series, geometric_even(n))
    first_violation = next(((d, v) for d, v in c.terms() if d <= n - guard), None)
    verdict = PositivityVerdict.VIOLATED if first_violation else PositivityVerdict.NONNEGATIVE
    return PositivityResult(
        u=LaurentSeries.from_terms({}, n),
        first_violation=first_violation,
        verdict=verdict,
    )
