"""
Exact symplectic linear algebra for the monodromy gamma(tau).

Matrices are sympy ImmutableMatrix objects with Rational entries; floats are
refused at construction. The diamond product interleaves its factors: the
first 2x2 factor acts on coordinates (1, 3), the second on (2, 4), which makes
the result symplectic for the standard form J = [[0, -I_2], [I_2, 0]].

A rotation R(theta) with theta/pi = p/q is represented by the companion
matrix [[0, -1], [1, c]] of its characteristic polynomial, c = 2cos(theta).
It is conjugate to R(theta) over the reals, so kernels of its powers have the
same dimensions. When c is irrational the powers are computed over the number
field Q(c), with entries reduced modulo the minimal polynomial of c.
"""

import logging
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Tuple

from sympy import ImmutableMatrix, Poly, QQ, Rational, Symbol, cos, eye, minimal_polynomial, pi

from .exceptions import IrrationalRotationError, NotSymplecticError
from .models import JordanBlock, NormalFormBlock, RotationBlock

logger = logging.getLogger(__name__)

ExactMatrix = ImmutableMatrix

_TRACE = Symbol('c')

_PolyMatrix = Tuple[Tuple[Poly, Poly], Tuple[Poly, Poly]]


def _to_rational(entry) -> Rational:
    if isinstance(entry, bool):
        raise TypeError("boolean matrix entries are not allowed")
    if isinstance(entry, int):
        return Rational(entry)
    if isinstance(entry, Fraction):
        return Rational(entry.numerator, entry.denominator)
    if isinstance(entry, Rational):
        return entry
    raise TypeError(f"matrix entries must be exact rationals, got {type(entry).__name__}")


def exact_matrix(rows: Sequence[Sequence]) -> ExactMatrix:
    """
    Build an ExactMatrix from rows of ints, Fractions or sympy Rationals.

    Raises:
        TypeError: if an entry is a float or any other inexact value
    """
    return ImmutableMatrix([[_to_rational(entry) for entry in row] for row in rows])


def standard_j(n: int) -> ExactMatrix:
    """
    The standard symplectic form J = [[0, -I_n], [I_n, 0]] on R^{2n}.

    Raises:
        NotSymplecticError: if n is not 1 or 2
    """
    if n not in (1, 2):
        raise NotSymplecticError(f"standard form is supported for n in (1, 2), got {n}")
    size = 2 * n
    entries = [[0] * size for _ in range(size)]
    for i in range(n):
        entries[i][n + i] = -1
        entries[n + i][i] = 1
    return exact_matrix(entries)


def is_symplectic(m: ExactMatrix) -> bool:
    """
    True iff M^T J M = J exactly.

    Raises:
        NotSymplecticError: if M is not square of even dimension
    """
    if m.rows != m.cols:
        raise NotSymplecticError(f"symplectic test needs a square matrix, got {m.rows}x{m.cols}")
    if m.rows % 2:
        raise NotSymplecticError(f"symplectic test needs even dimension, got {m.rows}")
    j = standard_j(m.rows // 2)
    return m.T * j * m == j


@lru_cache(maxsize=None)
def _trace_minimal_polynomial(turn: Fraction) -> Poly:
    expr = 2 * cos(pi * Rational(turn.numerator, turn.denominator))
    minpoly = minimal_polynomial(expr, _TRACE)
    return Poly(minpoly, _TRACE, domain=QQ)


def rotation_trace(block: RotationBlock) -> Optional[Fraction]:
    """2cos(theta) as a Fraction when it is rational, otherwise None."""
    f = _trace_minimal_polynomial(block.turn)
    if f.degree() != 1:
        return None
    leading, constant = f.all_coeffs()
    root = -constant / leading
    return Fraction(int(root.p), int(root.q))


def block_matrix(block: NormalFormBlock) -> ExactMatrix:
    """
    The 2x2 matrix of a basic normal-form block.

    N1(lambda, b) is [[lambda, b], [0, lambda]]; R(theta) is the companion
    matrix [[0, -1], [1, 2cos(theta)]].

    Raises:
        IrrationalRotationError: if 2cos(theta) is irrational
    """
    if isinstance(block, JordanBlock):
        return exact_matrix([[block.eigenvalue, block.b], [0, block.eigenvalue]])
    trace = rotation_trace(block)
    if trace is None:
        raise IrrationalRotationError(f"{block} has irrational 2cos(theta); no rational representative")
    return exact_matrix([[0, -1], [1, trace]])


def diamond(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """
    The symplectic direct sum a <> b of two 2x2 symplectic matrices.

    a is placed on coordinates (1, 3) and b on (2, 4).

    Raises:
        NotSymplecticError: if either factor is not a symplectic 2x2 matrix
    """
    for name, factor in (('first', a), ('second', b)):
        if factor.shape != (2, 2):
            raise NotSymplecticError(f"{name} factor must be 2x2, got {factor.rows}x{factor.cols}")
        if not is_symplectic(factor):
            raise NotSymplecticError(f"{name} factor is not symplectic")
    entries = [[0] * 4 for _ in range(4)]
    for i, row in enumerate((0, 2)):
        for j, col in enumerate((0, 2)):
            entries[row][col] = a[i, j]
            entries[row + 1][col + 1] = b[i, j]
    return ImmutableMatrix(entries)


def _poly(value) -> Poly:
    return Poly(value, _TRACE, domain=QQ)


def _mul_mod(x: _PolyMatrix, y: _PolyMatrix, f: Poly) -> _PolyMatrix:
    return tuple(
        tuple((x[i][0] * y[0][j] + x[i][1] * y[1][j]).rem(f) for j in range(2))
        for i in range(2)
    )


def _companion_power(turn: Fraction, m: int) -> _PolyMatrix:
    f = _trace_minimal_polynomial(turn)
    zero, one = _poly(0), _poly(1)
    base: _PolyMatrix = ((zero, -one), (one, _poly(_TRACE).rem(f)))
    result: _PolyMatrix = ((one, zero), (zero, one))
    while m:
        if m & 1:
            result = _mul_mod(result, base, f)
        base = _mul_mod(base, base, f)
        m >>= 1
    return result


def rotation_nullity(block: RotationBlock, m: int) -> int:
    """
    dim ker(R(theta)^m - I), decided by exact arithmetic in Q(2cos theta).

    The 2x2 rank over the field is 0 when the matrix vanishes, 1 when only
    its determinant vanishes, 2 otherwise.
    """
    if m < 1:
        raise ValueError(f"iterate must be positive, got {m}")
    f = _trace_minimal_polynomial(block.turn)
    power = _companion_power(block.turn, m)
    one = _poly(1)
    d = (
        ((power[0][0] - one).rem(f), power[0][1]),
        (power[1][0], (power[1][1] - one).rem(f)),
    )
    if all(entry.is_zero for row in d for entry in row):
        return 2
    det = (d[0][0] * d[1][1] - d[0][1] * d[1][0]).rem(f)
    return 1 if det.is_zero else 0


def _is_rational_block(block: NormalFormBlock) -> bool:
    return isinstance(block, JordanBlock) or rotation_trace(block) is not None


def _block_nullity(block: NormalFormBlock, m: int) -> int:
    if isinstance(block, RotationBlock):
        return rotation_nullity(block, m)
    matrix = block_matrix(block)
    return 2 - (matrix ** m - eye(2)).rank()


def nullity_oracle(block_a: NormalFormBlock, block_b: NormalFormBlock, m: int) -> int:
    """
    dim ker((A <> B)^m - I_4) for two normal-form blocks.

    With rational representatives the 4x4 power is formed and its rank taken
    exactly. Otherwise the kernel splits along the direct sum and each block
    is handled on its own, rotations over Q(2cos theta).
    """
    if m < 1:
        raise ValueError(f"iterate must be positive, got {m}")
    if _is_rational_block(block_a) and _is_rational_block(block_b):
        monodromy = diamond(block_matrix(block_a), block_matrix(block_b))
        result = 4 - (monodromy ** m - eye(4)).rank()
    else:
        result = _block_nullity(block_a, m) + _block_nullity(block_b, m)
    logger.debug(f"nullity_oracle({block_a}, {block_b}, m={m}) = {result}")
    return result
