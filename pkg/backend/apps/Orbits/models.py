"""
Domain model for closed characteristic analysis

This module defines the value types shared by the analysis modules: the
basic normal-form blocks, the normal-form case of the monodromy gamma(tau),
critical type vectors and the per-orbit configuration.

They are plain frozen dataclasses rather than Django models; nothing is
persisted. All rationals are fractions.Fraction so that every comparison
downstream is exact.
"""

from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from math import gcd
from typing import ClassVar, Mapping, Optional, Tuple, Union

from .exceptions import InvalidBlockError, InvalidConfigError
from .validators import ValidationUtils


class CaseKind(Enum):
    """
    The basic normal-form decompositions of gamma(tau) = N1(1,1) <> M.

    - CASE_1: M = N1(-1, b), b in {-1, 0, 1}
    - CASE_2: M = R(theta), theta/pi rational, theta not in {0, pi}
    - CASE_3: M = N1(1, b), b in {0, 1}
    - CASE_4: M = N1(1, -1)
    - NONDEGENERATE: every iterate non-degenerate
    """
    CASE_1 = '1'
    CASE_2 = '2'
    CASE_3 = '3'
    CASE_4 = '4'
    NONDEGENERATE = 'nondegenerate'


@dataclass(frozen=True)
class JordanBlock:
    """The 2x2 block N1(eigenvalue, b) = [[eigenvalue, b], [0, eigenvalue]]."""
    eigenvalue: int
    b: int

    def __post_init__(self):
        if self.eigenvalue not in (1, -1):
            raise InvalidBlockError(f"N1 eigenvalue must be 1 or -1, got {self.eigenvalue}")
        if self.b not in (-1, 0, 1):
            raise InvalidBlockError(f"N1 off-diagonal entry must be -1, 0 or 1, got {self.b}")

    def __str__(self) -> str:
        return f"N1({self.eigenvalue},{self.b})"


@dataclass(frozen=True)
class RotationBlock:
    """
    The rotation R(theta) with theta = turn * pi.

    Attributes:
        turn (Fraction): theta/pi, in (0, 2) and different from 1
    """
    turn: Fraction

    def __post_init__(self):
        object.__setattr__(self, 'turn', Fraction(self.turn))
        ok, message = ValidationUtils.validate_rotation(self.turn)
        if not ok:
            raise InvalidBlockError(message)

    @property
    def p(self) -> int:
        return self.turn.numerator

    @property
    def q(self) -> int:
        return self.turn.denominator

    @property
    def order(self) -> int:
        """Smallest m >= 1 with R(theta)^m = I, i.e. m*p divisible by 2q."""
        return 2 * self.q // gcd(self.p, 2 * self.q)

    def __str__(self) -> str:
        return f"R({self.turn}pi)"


NormalFormBlock = Union[JordanBlock, RotationBlock]

FIRST_BLOCK = JordanBlock(1, 1)


@dataclass(frozen=True)
class Case1:
    b: int = 0
    kind: ClassVar[CaseKind] = CaseKind.CASE_1

    def __post_init__(self):
        ok, message = ValidationUtils.validate_jordan_parameter('1', self.b)
        if not ok:
            raise InvalidConfigError(message)

    def blocks(self) -> Tuple[NormalFormBlock, NormalFormBlock]:
        return FIRST_BLOCK, JordanBlock(-1, self.b)

    @property
    def label(self) -> str:
        return f"Case1(b={self.b})"


@dataclass(frozen=True)
class Case2:
    rotation: Fraction

    kind: ClassVar[CaseKind] = CaseKind.CASE_2

    def __post_init__(self):
        object.__setattr__(self, 'rotation', Fraction(self.rotation))
        ok, message = ValidationUtils.validate_rotation(self.rotation)
        if not ok:
            raise InvalidConfigError(message)

    def blocks(self) -> Tuple[NormalFormBlock, NormalFormBlock]:
        return FIRST_BLOCK, RotationBlock(self.rotation)

    @property
    def label(self) -> str:
        return f"Case2(theta={self.rotation}pi)"


@dataclass(frozen=True)
class Case3:
    b: int = 0
    kind: ClassVar[CaseKind] = CaseKind.CASE_3

    def __post_init__(self):
        ok, message = ValidationUtils.validate_jordan_parameter('3', self.b)
        if not ok:
            raise InvalidConfigError(message)

    def blocks(self) -> Tuple[NormalFormBlock, NormalFormBlock]:
        return FIRST_BLOCK, JordanBlock(1, self.b)

    @property
    def label(self) -> str:
        return f"Case3(b={self.b})"


@dataclass(frozen=True)
class Case4:
    kind: ClassVar[CaseKind] = CaseKind.CASE_4

    def blocks(self) -> Tuple[NormalFormBlock, NormalFormBlock]:
        return FIRST_BLOCK, JordanBlock(1, -1)

    @property
    def label(self) -> str:
        return "Case4"


@dataclass(frozen=True)
class NonDegenerate:
    """
    All iterates non-degenerate.

    Attributes:
        elliptic (bool): second block elliptic (True) or hyperbolic (False)
        jump_odd (bool): whether i(y^2) - i(y) is odd
        mean_index (Optional[Fraction]): externally known mean index, if any
    """
    elliptic: bool = True
    jump_odd: bool = False
    mean_index: Optional[Fraction] = None

    kind: ClassVar[CaseKind] = CaseKind.NONDEGENERATE

    def __post_init__(self):
        if self.mean_index is not None:
            object.__setattr__(self, 'mean_index', Fraction(self.mean_index))

    @property
    def label(self) -> str:
        block = 'elliptic' if self.elliptic else 'hyperbolic'
        jump = 'odd' if self.jump_odd else 'even'
        return f"NonDegenerate({block}, jump={jump})"


NormalFormCase = Union[Case1, Case2, Case3, Case4, NonDegenerate]


@dataclass(frozen=True)
class CriticalTypeVector:
    """
    Critical type numbers (k_0, ..., k_{nu-1}) of one iterate.

    An entry may be None while it is being solved for; every other consumer
    requires a fully known vector.
    """
    entries: Tuple[Optional[int], ...]

    def __post_init__(self):
        object.__setattr__(self, 'entries', tuple(self.entries))

    @classmethod
    def of(cls, *entries: Optional[int]) -> 'CriticalTypeVector':
        return cls(tuple(entries))

    @classmethod
    def zero(cls, nullity: int) -> 'CriticalTypeVector':
        return cls((0,) * nullity)

    @classmethod
    def unit(cls, nullity: int, position: int, value: Optional[int] = 1) -> 'CriticalTypeVector':
        entries = [0] * nullity
        entries[position] = value
        return cls(tuple(entries))

    @property
    def nullity(self) -> int:
        return len(self.entries)

    @property
    def unknown_positions(self) -> Tuple[int, ...]:
        return tuple(l for l, value in enumerate(self.entries) if value is None)

    @property
    def is_known(self) -> bool:
        return not self.unknown_positions

    def get(self, l: int) -> Optional[int]:
        """k_l, with k_l = 0 outside [0, nu-1]"""
        if 0 <= l < len(self.entries):
            return self.entries[l]
        return 0

    def with_entry(self, l: int, value: Optional[int]) -> 'CriticalTypeVector':
        entries = list(self.entries)
        entries[l] = value
        return CriticalTypeVector(tuple(entries))

    def __str__(self) -> str:
        return '(' + ','.join('?' if v is None else str(v) for v in self.entries) + ')'


@dataclass(frozen=True)
class OrbitConfig:
    """
    One prime closed characteristic as far as the analysis needs it.

    Attributes:
        case (NormalFormCase): normal-form case of gamma(tau)
        i1 (int): Maslov-type index i(y,1)
        k_vectors (Optional[Mapping[int, CriticalTypeVector]]): critical type
            vectors keyed by the representative m in 1..K(y) of each residue
            class of iterates
    """
    case: NormalFormCase
    i1: int
    k_vectors: Optional[Mapping[int, CriticalTypeVector]] = field(default=None, hash=False)

    def __post_init__(self):
        ok, message = ValidationUtils.validate_i1_parity(self.case.kind.value, self.i1)
        if not ok:
            raise InvalidConfigError(message)
        if self.k_vectors is not None:
            object.__setattr__(self, 'k_vectors', dict(self.k_vectors))

    def with_k_vectors(self, k_vectors: Mapping[int, CriticalTypeVector]) -> 'OrbitConfig':
        return replace(self, k_vectors=dict(k_vectors))

    @property
    def label(self) -> str:
        return f"{self.case.label} i1={self.i1}"


@dataclass(frozen=True)
class IterationData:
    """(m, i(y,m), i(y^m), nu(y^m)) for one iterate."""
    m: int
    maslov: int
    morse: int
    nullity: int
