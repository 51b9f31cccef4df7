from fractions import Fraction
from math import gcd
from random import Random

from django.test import SimpleTestCase
from sympy import Symbol, eye, expand

from apps.Orbits.exceptions import IrrationalRotationError, NotSymplecticError
from apps.Orbits.index_iteration import nullity
from apps.Orbits.models import Case1, Case2, Case3, Case4, JordanBlock, RotationBlock
from apps.Orbits.symplectic_core import (
    block_matrix,
    diamond,
    exact_matrix,
    is_symplectic,
    nullity_oracle,
    rotation_nullity,
    rotation_trace,
    standard_j,
)


def _rotations(q_max):
    return sorted({
        Fraction(p, q)
        for q in range(1, q_max + 1)
        for p in range(1, 2 * q)
        if gcd(p, q) == 1 and Fraction(p, q) != 1
    })


def _random_symplectic(rng):
    """A random rational 2x2 matrix of determinant 1."""
    a = Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 9))
    b = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
    c = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
    return exact_matrix([[a, b], [c, (1 + b * c) / a]])


def _constructible_blocks():
    jordan = [JordanBlock(e, b) for e in (1, -1) for b in (-1, 0, 1)]
    rotations = [RotationBlock(turn) for turn in _rotations(12) if rotation_trace(RotationBlock(turn)) is not None]
    return jordan + rotations


class ExactMatrixTests(SimpleTestCase):
    def test_floats_are_refused(self):
        with self.assertRaises(TypeError):
            exact_matrix([[1.0, 0], [0, 1]])

    def test_fractions_are_kept_exact(self):
        m = exact_matrix([[Fraction(1, 3), 0], [0, 3]])
        self.assertTrue(is_symplectic(m))

    def test_standard_form_is_symplectic(self):
        self.assertTrue(is_symplectic(standard_j(1)))
        self.assertTrue(is_symplectic(standard_j(2)))

    def test_standard_form_dimension_is_checked(self):
        with self.assertRaises(NotSymplecticError):
            standard_j(3)

    def test_odd_dimension_is_rejected(self):
        with self.assertRaises(NotSymplecticError):
            is_symplectic(exact_matrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]]))

    def test_standard_form_entries(self):
        self.assertEqual(standard_j(1), exact_matrix([[0, -1], [1, 0]]))
        j = standard_j(2)
        self.assertEqual(j * j, -eye(4))
        self.assertEqual(j.T, -j)

    def test_scaling_pair_is_symplectic(self):
        self.assertTrue(is_symplectic(exact_matrix([[2, 0], [0, Fraction(1, 2)]])))
        self.assertFalse(is_symplectic(exact_matrix([[1, 0], [0, 2]])))


class BlockTests(SimpleTestCase):
    def test_jordan_block_matrix(self):
        self.assertEqual(block_matrix(JordanBlock(-1, 1)), exact_matrix([[-1, 1], [0, -1]]))

    def test_rational_rotation_traces(self):
        self.assertEqual(rotation_trace(RotationBlock(Fraction(1, 2))), 0)
        self.assertEqual(rotation_trace(RotationBlock(Fraction(1, 3))), 1)
        self.assertEqual(rotation_trace(RotationBlock(Fraction(2, 3))), -1)
        self.assertIsNone(rotation_trace(RotationBlock(Fraction(1, 5))))

    def test_irrational_rotation_has_no_matrix(self):
        with self.assertRaises(IrrationalRotationError):
            block_matrix(RotationBlock(Fraction(1, 5)))

    def test_diamond_of_symplectic_blocks_is_symplectic(self):
        product = diamond(block_matrix(JordanBlock(1, 1)), block_matrix(RotationBlock(Fraction(1, 2))))
        self.assertEqual(product.shape, (4, 4))
        self.assertTrue(is_symplectic(product))
        self.assertEqual(product[0, 2], 1)
        self.assertEqual(product[1, 3], -1)

    def test_diamond_rejects_non_symplectic_factor(self):
        with self.assertRaises(NotSymplecticError):
            diamond(exact_matrix([[2, 0], [0, 1]]), block_matrix(JordanBlock(1, 0)))

    def test_every_constructible_block_is_symplectic(self):
        for block in _constructible_blocks():
            with self.subTest(block=str(block)):
                self.assertTrue(is_symplectic(block_matrix(block)))

    def test_diamond_of_identities(self):
        self.assertEqual(diamond(eye(2), eye(2)), eye(4))

    def test_diamond_of_unipotent_blocks(self):
        product = diamond(block_matrix(JordanBlock(1, 1)), block_matrix(JordanBlock(1, -1)))
        self.assertEqual(product.eigenvals(), {1: 4})

    def test_diamond_multiplies_characteristic_polynomials(self):
        x = Symbol('x')
        rng = Random(20)
        for trial in range(20):
            a, b = _random_symplectic(rng), _random_symplectic(rng)
            with self.subTest(trial=trial):
                self.assertTrue(is_symplectic(diamond(a, b)))
                self.assertEqual(
                    expand(diamond(a, b).charpoly(x).as_expr()),
                    expand(a.charpoly(x).as_expr() * b.charpoly(x).as_expr()),
                )


class NullityOracleTests(SimpleTestCase):
    def test_rotation_nullity_over_number_field(self):
        block = RotationBlock(Fraction(2, 5))
        self.assertEqual([rotation_nullity(block, m) for m in range(1, 11)], [0, 0, 0, 0, 2] * 2)

    def test_jordan_cases_agree_with_closed_form(self):
        cases = [Case1(b) for b in (-1, 0, 1)] + [Case3(b) for b in (0, 1)] + [Case4()]
        for case in cases:
            for m in range(1, 49):
                with self.subTest(case=case.label, m=m):
                    self.assertEqual(nullity_oracle(*case.blocks(), m), nullity(case, m))

    def test_rotations_agree_with_closed_form(self):
        for turn in _rotations(12):
            case = Case2(turn)
            for m in range(1, 49):
                with self.subTest(turn=str(turn), m=m):
                    self.assertEqual(nullity_oracle(*case.blocks(), m), nullity(case, m))

    def test_iterate_must_be_positive(self):
        with self.assertRaises(ValueError):
            nullity_oracle(*Case4().blocks(), 0)
