"""
Critical type numbers and the average Euler characteristic.

A critical type vector k = (k_0, ..., k_{nu-1}) of an iterate y^m is
admissible when

    (i)   k_l = 0 outside [0, nu-1] and k_0, k_{nu-1} are 0 or 1
    (ii)  k_0 = 1 forces every later entry to 0
    (iii) k_{nu-1} = 1 forces every earlier entry to 0
    (iv)  an interior entry >= 1 forces k_0 = k_{nu-1} = 0
    (v)   for nu <= 3 at most one entry is non-zero

Vectors are stored with exactly nu entries, so clause (i)'s vanishing part
holds by construction. Critical type vectors repeat with the minimal period
K(y) and are keyed by the representative m in 1..K(y).
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Tuple

from .exceptions import MissingCriticalTypeError
from .index_iteration import minimal_period, morse_index, nullity
from .models import CriticalTypeVector, NonDegenerate, OrbitConfig

logger = logging.getLogger(__name__)

MAX_NULLITY = 3


@dataclass(frozen=True)
class EulerData:
    """chi_hat(y) together with the signed per-iterate terms it averages."""
    chi_hat: Fraction
    period: int
    per_iterate_terms: Tuple[Tuple[int, int], ...]


def _clause_boundary_values(k: Tuple[int, ...]) -> bool:
    return k[0] in (0, 1) and k[-1] in (0, 1)


def _clause_first_entry(k: Tuple[int, ...]) -> bool:
    return k[0] != 1 or all(v == 0 for v in k[1:])


def _clause_last_entry(k: Tuple[int, ...]) -> bool:
    return k[-1] != 1 or all(v == 0 for v in k[:-1])


def _clause_interior(k: Tuple[int, ...]) -> bool:
    if any(v >= 1 for v in k[1:-1]):
        return k[0] == 0 and k[-1] == 0
    return True


def _clause_single_entry(k: Tuple[int, ...]) -> bool:
    return len(k) > MAX_NULLITY or sum(1 for v in k if v != 0) <= 1


ADMISSIBILITY_CLAUSES: Tuple[Tuple[str, Callable[[Tuple[int, ...]], bool]], ...] = (
    ('(i) boundary entries are 0 or 1', _clause_boundary_values),
    ('(ii) k_0 = 1 forces later entries to vanish', _clause_first_entry),
    ('(iii) k_{nu-1} = 1 forces earlier entries to vanish', _clause_last_entry),
    ('(iv) a non-zero interior entry forces k_0 = k_{nu-1} = 0', _clause_interior),
    ('(v) at most one non-zero entry when nu <= 3', _clause_single_entry),
)


def is_admissible(vector: CriticalTypeVector) -> Tuple[bool, str]:
    """Check a known vector against every clause; returns (ok, reason)"""
    if not vector.is_known:
        return False, f"{vector} has unknown entries"
    k = vector.entries
    if not k:
        return False, "nullity must be at least 1"
    if any(not isinstance(v, int) or v < 0 for v in k):
        return False, f"{vector} has a negative or non-integer entry"
    for name, clause in ADMISSIBILITY_CLAUSES:
        if not clause(k):
            return False, f"{vector} violates clause {name}"
    return True, ""


def admissible_vectors(nu: int, interior_max: int) -> List[CriticalTypeVector]:
    """
    Every admissible vector of nullity nu whose interior entries are at most
    interior_max, in lexicographic order of the brute-force grid.

    Raises:
        ValueError: if nu is outside [1, 3] or interior_max is negative
    """
    if not 1 <= nu <= MAX_NULLITY:
        raise ValueError(f"nullity must lie in [1, {MAX_NULLITY}], got {nu}")
    if interior_max < 0:
        raise ValueError(f"interior_max must be non-negative, got {interior_max}")
    ranges = [range(2) if l in (0, nu - 1) else range(interior_max + 1) for l in range(nu)]
    vectors = []
    for entries in itertools.product(*ranges):
        vector = CriticalTypeVector(entries)
        if is_admissible(vector)[0]:
            vectors.append(vector)
    return vectors


def residue_key(m: int, period: int) -> int:
    """Representative in 1..period of the residue class of m"""
    return (m - 1) % period + 1


def nondegenerate_k0(config: OrbitConfig, m: int) -> int:
    """
    The critical type number k_0 of a non-degenerate iterate: 1 when
    i(y^m) - i(y) is even (the iterate carries the trivial orientation), else 0.
    """
    jump = morse_index(config.case, config.i1, m) - morse_index(config.case, config.i1, 1)
    return 1 if jump % 2 == 0 else 0


def euler_term_sign(config: OrbitConfig, m: int, l: int) -> int:
    """(-1)^{i(y^m)+l}"""
    return 1 if (morse_index(config.case, config.i1, m) + l) % 2 == 0 else -1


def euler_data(config: OrbitConfig) -> EulerData:
    """
    chi_hat(y) = (1/K) sum_{m=1..K} sum_l (-1)^{i(y^m)+l} k_l(y^m).

    Raises:
        MissingCriticalTypeError: if some residue class has no known vector
    """
    if isinstance(config.case, NonDegenerate):
        # i(y) = i1 - 2 has the parity of i1
        sign = 1 if config.i1 % 2 == 0 else -1
        period = minimal_period(config.case)
        chi_hat = Fraction(sign, period)
        return EulerData(chi_hat=chi_hat, period=period, per_iterate_terms=((1, sign),))

    period = minimal_period(config.case)
    k_vectors = config.k_vectors or {}
    terms: List[Tuple[int, int]] = []
    for m in range(1, period + 1):
        vector = k_vectors.get(m)
        if vector is None or not vector.is_known:
            raise MissingCriticalTypeError(
                f"{config.label}: no known critical type vector for iterates m = {m} mod {period}"
            )
        if vector.nullity != nullity(config.case, m):
            raise MissingCriticalTypeError(
                f"{config.label}: vector {vector} for m = {m} has length {vector.nullity}, "
                f"nullity is {nullity(config.case, m)}"
            )
        term = sum(euler_term_sign(config, m, l) * k for l, k in enumerate(vector.entries))
        terms.append((m, term))
    chi_hat = Fraction(sum(term for _, term in terms), period)
    return EulerData(chi_hat=chi_hat, period=period, per_iterate_terms=tuple(terms))


def average_euler_char(config: OrbitConfig) -> Fraction:
    """chi_hat(y) as an exact rational"""
    return euler_data(config).chi_hat


def derived_nondegenerate_vectors(config: OrbitConfig) -> Dict[int, CriticalTypeVector]:
    """The forced vectors (k_0) of the non-degenerate iterates within one period."""
    period = minimal_period(config.case)
    return {
        m: CriticalTypeVector.of(nondegenerate_k0(config, m))
        for m in range(1, period + 1)
        if nullity(config.case, m) == 1
    }
