"""
Maslov-type index iteration for the four degenerate normal-form cases.

For an orbit y with monodromy N1(1,1) <> M and index i1 = i(y,1):

    Case 1 (M = N1(-1,b)):  i(y,m) = m(i1+1) - 1               (b = 1)
                            i(y,m) = m(i1+1) - 1 - (1+(-1)^m)/2  (b = 0, -1)
    Case 2 (M = R(theta)):  i(y,m) = m*i1 + 2E(m*theta/(2pi)) - 2
    Case 3 (M = N1(1,b)):   i(y,m) = m(i1+2) - 2
    Case 4 (M = N1(1,-1)):  i(y,m) = m(i1+1) - 1

The Morse index of the m-th iterate is i(y^m) = i(y,m) - 2 in R^4. All
arithmetic is on ints and Fractions.
"""

import logging
import math
from fractions import Fraction
from functools import lru_cache
from typing import List

from .exceptions import UnsupportedCaseError
from .models import (
    Case1,
    Case2,
    Case3,
    Case4,
    IterationData,
    NonDegenerate,
    NormalFormCase,
    OrbitConfig,
)

logger = logging.getLogger(__name__)

# n in i(y^m) = i(y,m) - n
HALF_DIMENSION = 2


def ceil_e(a: Fraction) -> int:
    """E(a) = min{k in Z | k >= a}"""
    return math.ceil(Fraction(a))


def floor_part(a: Fraction) -> int:
    """[a] = max{k in Z | k <= a}"""
    return math.floor(Fraction(a))


def frac_part(a: Fraction) -> Fraction:
    """{a} = a - [a], in [0, 1)"""
    a = Fraction(a)
    return a - floor_part(a)


def _unsupported(case: NormalFormCase, what: str) -> UnsupportedCaseError:
    return UnsupportedCaseError(
        f"{what} has no closed form for {case.label}; non-degenerate orbits are "
        f"settled by the external non-degenerate multiplicity theorem"
    )


def maslov_index(case: NormalFormCase, i1: int, m: int) -> int:
    """
    i(y,m) for the m-th iterate.

    Raises:
        UnsupportedCaseError: for the non-degenerate variant
        ValueError: if m < 1
    """
    if m < 1:
        raise ValueError(f"iterate must be positive, got {m}")
    if isinstance(case, Case1):
        value = m * (i1 + 1) - 1
        if case.b != 1 and m % 2 == 0:
            value -= 1
        return value
    if isinstance(case, Case2):
        return m * i1 + 2 * ceil_e(m * case.rotation / 2) - 2
    if isinstance(case, Case3):
        return m * (i1 + 2) - 2
    if isinstance(case, Case4):
        return m * (i1 + 1) - 1
    raise _unsupported(case, "maslov_index")


def morse_index(case: NormalFormCase, i1: int, m: int) -> int:
    """i(y^m) = i(y,m) - 2"""
    return maslov_index(case, i1, m) - HALF_DIMENSION


def nullity(case: NormalFormCase, m: int) -> int:
    """
    nu(y^m) = dim ker(gamma(m tau) - I).

    The first block N1(1,1) always contributes 1; the second block contributes
    its own kernel dimension.
    """
    if m < 1:
        raise ValueError(f"iterate must be positive, got {m}")
    if isinstance(case, Case1):
        if m % 2:
            return 1
        return 3 if case.b == 0 else 2
    if isinstance(case, Case2):
        rotation = case.rotation
        return 3 if (m * rotation.numerator) % (2 * rotation.denominator) == 0 else 1
    if isinstance(case, Case3):
        return 3 if case.b == 0 else 2
    if isinstance(case, Case4):
        return 2
    # Non-degenerate: 1 is a Floquet multiplier of algebraic multiplicity exactly 2
    return 1


def is_degenerate(case: NormalFormCase, m: int) -> bool:
    return nullity(case, m) >= 2


def mean_index(case: NormalFormCase, i1: int) -> Fraction:
    """
    The mean index lim i(y,m)/m as an exact rational.

    Raises:
        UnsupportedCaseError: for a non-degenerate orbit without a supplied mean index
    """
    if isinstance(case, (Case1, Case4)):
        return Fraction(i1 + 1)
    if isinstance(case, Case2):
        return i1 + case.rotation
    if isinstance(case, Case3):
        return Fraction(i1 + 2)
    if case.mean_index is not None:
        return case.mean_index
    raise _unsupported(case, "mean_index")


def _period_bound(case: NormalFormCase) -> int:
    """A period of (nullity, index parity) from which the minimal one is searched."""
    if isinstance(case, Case1):
        return 2
    if isinstance(case, Case2):
        return 2 * case.rotation.denominator
    return 1


def _parity_representative(case: NormalFormCase) -> int:
    return 1 if isinstance(case, Case4) else 0


@lru_cache(maxsize=None)
def minimal_period(case: NormalFormCase) -> int:
    """
    K(y): the smallest K >= 1 such that nu(y^{p+K}) = nu(y^p) and
    i(y^{p+K}) - i(y^p) is even for all p.

    Both sequences are periodic with period dividing _period_bound, so
    checking p over two full bound windows decides every K exactly. The
    answer does not depend on i1 once its parity is fixed by the case.
    """
    if isinstance(case, NonDegenerate):
        return 2 if case.jump_odd else 1
    bound = _period_bound(case)
    i1 = _parity_representative(case)
    window = range(1, 2 * bound + 1)
    for candidate in range(1, bound + 1):
        if all(
            nullity(case, p + candidate) == nullity(case, p)
            and (morse_index(case, i1, p + candidate) - morse_index(case, i1, p)) % 2 == 0
            for p in window
        ):
            return candidate
    return bound


def iteration_data(config: OrbitConfig, m: int) -> IterationData:
    maslov = maslov_index(config.case, config.i1, m)
    return IterationData(
        m=m,
        maslov=maslov,
        morse=maslov - HALF_DIMENSION,
        nullity=nullity(config.case, m),
    )


def iterate_table(config: OrbitConfig, m_max: int) -> List[IterationData]:
    """IterationData for m = 1..m_max"""
    if m_max < 1:
        raise ValueError(f"m_max must be positive, got {m_max}")
    rows = [iteration_data(config, m) for m in range(1, m_max + 1)]
    logger.debug(f"iterate_table({config.label}, m_max={m_max}) built {len(rows)} rows")
    return rows
