from fractions import Fraction
from unittest import mock

from django.test import SimpleTestCase

from apps.Orbits.case_analyzer import (
    GridKey,
    VerdictKind,
    analyze_single_orbit,
    rotation_grid,
    sweep_grid,
    sweep_theorem_1_1,
)
from apps.Orbits.exceptions import InconclusiveTruncationError, InvalidConfigError
from apps.Orbits.index_iteration import minimal_period, morse_index, nullity
from apps.Orbits.models import Case1, Case2, Case3, Case4, CriticalTypeVector, NonDegenerate, OrbitConfig
from apps.Orbits.morse_series import LaurentSeries, PositivityResult, PositivityVerdict

K = CriticalTypeVector.of
N = 400


class SingleOrbitTests(SimpleTestCase):
    def test_nondegenerate_is_external(self):
        verdict = analyze_single_orbit(OrbitConfig(NonDegenerate(), 0), N)
        self.assertIs(verdict.kind, VerdictKind.NONDEGENERATE_EXTERNAL)
        self.assertIn('non-degenerate multiplicity theorem', verdict.trace[-1])

    def test_subcase_1_1(self):
        for b, zero in ((1, K(0, 0)), (0, K(0, 0, 0)), (-1, K(0, 0))):
            verdict = analyze_single_orbit(OrbitConfig(Case1(b), 0), N)
            with self.subTest(b=b):
                self.assertIs(verdict.kind, VerdictKind.MORSE_SERIES_CONTRADICTION)
                self.assertEqual(verdict.first_violation, (-1, Fraction(-1)))
                self.assertEqual(verdict.assignments, [{1: K(1), 2: zero}])

    def test_subcase_1_1_forces_zero_second_iterate(self):
        verdict = analyze_single_orbit(OrbitConfig(Case1(0), 0), N)
        for l in range(3):
            self.assertEqual(verdict.intermediates[f'k_{l}(y^2)'], 0)

    def test_subcase_1_2(self):
        for i1 in (2, 4, 8):
            verdict = analyze_single_orbit(OrbitConfig(Case1(1), i1), N)
            with self.subTest(i1=i1):
                self.assertIs(verdict.kind, VerdictKind.RESONANCE_CONTRADICTION)
                self.assertEqual(verdict.intermediates['k_1(y^2)'], i1)
                self.assertEqual(morse_index(Case1(1), i1, 2) % 2, 1)
                self.assertTrue(any(step.startswith('corroboration') for step in verdict.trace))

    def test_even_second_iterate_solution_is_discarded(self):
        verdict = analyze_single_orbit(OrbitConfig(Case1(0), 4), N)
        self.assertIs(verdict.kind, VerdictKind.RESONANCE_CONTRADICTION)
        self.assertEqual(verdict.intermediates['k_1(y^2)'], -4)

    def test_case2_large_mean_index(self):
        for turn in rotation_grid(6):
            verdict = analyze_single_orbit(OrbitConfig(Case2(turn), 2), N)
            with self.subTest(turn=str(turn)):
                self.assertIs(verdict.kind, VerdictKind.RESONANCE_CONTRADICTION)
                self.assertGreater(verdict.mean_index, 2)

    def test_case2_zero_index(self):
        for turn in rotation_grid(8):
            verdict = analyze_single_orbit(OrbitConfig(Case2(turn), 0), N)
            period = minimal_period(Case2(turn))
            with self.subTest(turn=str(turn)):
                self.assertIs(verdict.kind, VerdictKind.MORSE_SERIES_CONTRADICTION)
                self.assertEqual(verdict.intermediates['i(y)'], -2)
                self.assertEqual(verdict.first_violation[0], -1)
                self.assertLess(verdict.intermediates[f'k_1(y^{period})'], period - 1)
                self.assertEqual(len(verdict.assignments), 1)

    def test_case2_quarter_turn_value(self):
        verdict = analyze_single_orbit(OrbitConfig(Case2(Fraction(1, 2)), 0), N)
        self.assertEqual(verdict.intermediates['k_1(y^4)'], 2)
        self.assertEqual(verdict.assignments, [{1: K(1), 2: K(1), 3: K(1), 4: K(0, 2, 0)}])

    def test_case3_is_sdm(self):
        verdict = analyze_single_orbit(OrbitConfig(Case3(0), 0), N)
        self.assertIs(verdict.kind, VerdictKind.SDM)
        self.assertEqual(verdict.mean_index, Fraction(2))
        self.assertEqual(verdict.intermediates['alternating_sum(y)'], 1)
        self.assertIn({1: K(0, 0, 1)}, verdict.assignments)
        self.assertIsNone(verdict.first_violation)

    def test_case3_with_b_one_fails_positivity(self):
        verdict = analyze_single_orbit(OrbitConfig(Case3(1), 0), N)
        self.assertIs(verdict.kind, VerdictKind.MORSE_SERIES_CONTRADICTION)
        self.assertEqual(verdict.first_violation, (-1, Fraction(-1)))

    def test_case4_is_sdm(self):
        verdict = analyze_single_orbit(OrbitConfig(Case4(), 1), N)
        self.assertIs(verdict.kind, VerdictKind.SDM)
        self.assertEqual(verdict.intermediates['k_1(y)'], 1)
        self.assertEqual(verdict.assignments, [{1: K(0, 1)}])

    def test_case4_larger_index(self):
        verdict = analyze_single_orbit(OrbitConfig(Case4(), 5), N)
        self.assertIs(verdict.kind, VerdictKind.RESONANCE_CONTRADICTION)
        self.assertEqual(verdict.intermediates['k_1(y)'], 3)

    def test_non_positive_mean_index(self):
        for config in (OrbitConfig(Case4(), -1), OrbitConfig(Case1(0), -2), OrbitConfig(Case2(Fraction(3, 2)), -2)):
            with self.subTest(config=config.label):
                verdict = analyze_single_orbit(config, N)
                self.assertIs(verdict.kind, VerdictKind.RESONANCE_CONTRADICTION)
                self.assertLessEqual(verdict.mean_index, 0)

    def test_supplied_vectors_pin_the_assignment(self):
        pinned = analyze_single_orbit(OrbitConfig(Case3(0), 0, {1: K(1, 0, 0)}), N)
        self.assertIs(pinned.kind, VerdictKind.MORSE_SERIES_CONTRADICTION)
        self.assertEqual(pinned.assignments, [{1: K(1, 0, 0)}])
        self.assertIs(analyze_single_orbit(OrbitConfig(Case3(0), 0, {1: K(0, 0, 1)}), N).kind, VerdictKind.SDM)

    def test_supplied_unknown_entry_is_solved(self):
        verdict = analyze_single_orbit(OrbitConfig(Case4(), 1, {1: K(0, None)}), N)
        self.assertIs(verdict.kind, VerdictKind.SDM)
        self.assertEqual(verdict.intermediates['k_1(y)'], 1)

    def test_supplied_inadmissible_vector(self):
        verdict = analyze_single_orbit(OrbitConfig(Case3(0), 2, {1: K(2, 0, 0)}), N)
        self.assertIs(verdict.kind, VerdictKind.RESONANCE_CONTRADICTION)

    def test_supplied_vector_length_is_checked(self):
        with self.assertRaises(InvalidConfigError):
            analyze_single_orbit(OrbitConfig(Case4(), 1, {1: K(0, 1, 0)}), N)

    def test_truncation_too_small(self):
        with self.assertRaises(InconclusiveTruncationError) as raised:
            analyze_single_orbit(OrbitConfig(Case3(0), 0), 2)
        self.assertEqual(raised.exception.needed, 3)
        self.assertIs(analyze_single_orbit(OrbitConfig(Case3(0), 0), 3).kind, VerdictKind.SDM)

    def test_deterministic(self):
        for config in (OrbitConfig(Case1(1), 0), OrbitConfig(Case2(Fraction(3, 7)), 0), OrbitConfig(Case4(), 1)):
            self.assertEqual(analyze_single_orbit(config, N), analyze_single_orbit(config, N))

    def test_contradictions_persist_at_twice_the_truncation(self):
        sample = [
            OrbitConfig(Case1(1), 0), OrbitConfig(Case1(1), 6), OrbitConfig(Case1(-1), 2),
            OrbitConfig(Case2(Fraction(1, 2)), 0), OrbitConfig(Case2(Fraction(7, 5)), 0),
            OrbitConfig(Case2(Fraction(5, 12)), 4), OrbitConfig(Case3(1), 0), OrbitConfig(Case4(), 3),
        ]
        for config in sample:
            with self.subTest(config=config.label):
                first = analyze_single_orbit(config, N)
                second = analyze_single_orbit(config, 2 * N)
                self.assertTrue(first.kind.is_contradiction)
                self.assertIs(second.kind, first.kind)

    def test_orbit_passing_every_check_is_feasible(self):
        nonnegative = PositivityResult(LaurentSeries.from_terms({}, N), None, PositivityVerdict.NONNEGATIVE)
        with mock.patch('apps.Orbits.case_analyzer._positivity', return_value=(nonnegative, False)):
            verdict = analyze_single_orbit(OrbitConfig(Case1(1), 0), N)
        self.assertIs(verdict.kind, VerdictKind.FEASIBLE)
        self.assertFalse(verdict.kind.is_contradiction)
        self.assertIsNone(verdict.first_violation)
        self.assertEqual(verdict.assignments, [{1: K(1), 2: K(0, 0)}])
        self.assertEqual(verdict.trace[-1], "no constraint excludes this orbit")


class SweepTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.report = sweep_theorem_1_1((-4, 40), 12, N)

    def test_no_feasible_world(self):
        self.assertEqual(self.report.feasible_count, 0)
        self.assertEqual(self.report.inconclusive, [])
        self.assertTrue(self.report.certified)

    def test_every_grid_point_has_one_verdict(self):
        keys = [key for key, _ in sweep_grid((-4, 40), 12)]
        self.assertEqual([key for key, _ in self.report.verdicts], keys)
        self.assertEqual(len(set(keys)), len(keys))

    def test_sdm_points(self):
        sdm = self.report.verdicts_of(VerdictKind.SDM)
        self.assertEqual([key for key, _ in sdm], [GridKey('3', 'b=0', 0), GridKey('4', '', 1)])
        for _, verdict in sdm:
            self.assertEqual(verdict.mean_index, Fraction(2))
            case = verdict.config.case
            self.assertTrue(any(nullity(case, m) >= 2 for m in range(1, verdict.period + 1)))

    def test_case2_zero_index_fails_positivity(self):
        for key, verdict in self.report.verdicts:
            if key.case == '2' and key.i1 == 0:
                self.assertIs(verdict.kind, VerdictKind.MORSE_SERIES_CONTRADICTION)

    def test_counts_add_up(self):
        self.assertEqual(sum(self.report.counts.values()), len(self.report.verdicts))
        self.assertEqual(self.report.counts[VerdictKind.NONDEGENERATE_EXTERNAL], 0)

    def test_threads_give_the_same_report(self):
        single = sweep_theorem_1_1((-2, 4), 5, N)
        threaded = sweep_theorem_1_1((-2, 4), 5, N, workers=4)
        self.assertEqual(threaded.verdicts, single.verdicts)

    def test_empty_range(self):
        report = sweep_theorem_1_1((3, 2), 12, N)
        self.assertEqual(report.verdicts, [])
        self.assertEqual(report.feasible_count, 0)

    def test_workers_must_be_positive(self):
        with self.assertRaises(ValueError):
            sweep_theorem_1_1((0, 2), 3, N, workers=0)
