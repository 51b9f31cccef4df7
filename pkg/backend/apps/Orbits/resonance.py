"""
Resonance identities for a finite set of prime closed characteristics:

    sum over orbits with mean index > 0 of chi_hat/i_hat = 1/2
    sum over orbits with mean index < 0 of chi_hat/i_hat = 0

Everything is exact; there is no tolerance anywhere in this module.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .critical_types import euler_data, euler_term_sign
from .exceptions import InapplicableIdentityError, InconsistentResonanceError, MissingCriticalTypeError
from .index_iteration import mean_index, minimal_period
from .models import OrbitConfig

logger = logging.getLogger(__name__)

POSITIVE_TARGET = Fraction(1, 2)
NEGATIVE_TARGET = Fraction(0)


@dataclass(frozen=True)
class ResonanceReport:
    sum_positive: Fraction
    sum_negative: Fraction
    holds: Tuple[bool, bool]
    orbit_count: int = 0

    @property
    def holds_both(self) -> bool:
        return all(self.holds)


def _checked_mean_index(config: OrbitConfig) -> Fraction:
    value = mean_index(config.case, config.i1)
    if value == 0:
        raise InapplicableIdentityError(
            f"{config.label} has mean index 0; the resonance identities assume no closed "
            f"characteristic with vanishing mean index"
        )
    return value


def orbit_contribution(config: OrbitConfig) -> Fraction:
    """chi_hat(y)/i_hat(y)"""
    return euler_data(config).chi_hat / _checked_mean_index(config)


def resonance_sums(configs: Sequence[OrbitConfig]) -> ResonanceReport:
    """
    Evaluate both resonance identities over the given orbits.

    Raises:
        InapplicableIdentityError: if some orbit has mean index 0
        MissingCriticalTypeError: if some orbit lacks critical type vectors
    """
    sum_positive = Fraction(0)
    sum_negative = Fraction(0)
    for config in configs:
        contribution = orbit_contribution(config)
        if mean_index(config.case, config.i1) > 0:
            sum_positive += contribution
        else:
            sum_negative += contribution
    report = ResonanceReport(
        sum_positive=sum_positive,
        sum_negative=sum_negative,
        holds=(sum_positive == POSITIVE_TARGET, sum_negative == NEGATIVE_TARGET),
        orbit_count=len(configs),
    )
    logger.debug(f"resonance_sums over {len(configs)} orbits: {report}")
    return report


def _unknown_position(config: OrbitConfig) -> Tuple[int, int]:
    found = [
        (m, l)
        for m, vector in sorted((config.k_vectors or {}).items())
        for l in vector.unknown_positions
    ]
    if len(found) != 1:
        raise MissingCriticalTypeError(
            f"{config.label}: exactly one critical type entry must be unknown, found {len(found)}"
        )
    return found[0]


def solve_interior_k(config: OrbitConfig, others: Optional[Sequence[OrbitConfig]] = None) -> Fraction:
    """
    Solve the resonance identity on config's side for its single unknown
    critical type entry.

    The identity is linear in the unknown x = k_l(y^m):
        (known + sign * x) / (K * i_hat) + others = target
    with sign = (-1)^{i(y^m)+l}. The caller decides whether the solution is an
    admissible value.

    Raises:
        MissingCriticalTypeError: unless exactly one entry is unknown
        InapplicableIdentityError: if the mean index is 0
        InconsistentResonanceError: if the unknown does not enter the identity
    """
    m, l = _unknown_position(config)
    i_hat = _checked_mean_index(config)
    period = minimal_period(config.case)
    if not 1 <= m <= period:
        # chi_hat only averages m = 1..K(y)
        raise InconsistentResonanceError(
            f"{config.label}: k_{l}(y^{m}) lies outside 1..K(y) = 1..{period} and does not enter the identity"
        )
    coefficient = Fraction(euler_term_sign(config, m, l), period) / i_hat

    pinned = dict(config.k_vectors)
    pinned[m] = pinned[m].with_entry(l, 0)
    known = orbit_contribution(config.with_k_vectors(pinned))

    target = POSITIVE_TARGET if i_hat > 0 else NEGATIVE_TARGET
    same_side = [
        other for other in (others or ())
        if (mean_index(other.case, other.i1) > 0) == (i_hat > 0)
    ]
    target -= sum((orbit_contribution(other) for other in same_side), Fraction(0))

    solution = (target - known) / coefficient
    logger.debug(f"solve_interior_k({config.label}): k_{l}(y^{m}) = {solution}")
    return solution
