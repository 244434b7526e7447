#!/usr/bin/env python3
"""
Tests for 4-dimensional Kodaira dimensions and geometric Gromov norms.

Covers:
- kappa_s from minimal symplectic data
- kappa_l over the exhaustive (g, h, n) grid
- kappa_h from plurigenera samples
- Gromov norm of geometric 4-manifolds and the per-geometry report
- Representative symplectic models against the geometry categories

Run with: python3 test_fourfold.py
"""

import random
import unittest
from fractions import Fraction

from fourfold import (
    LefschetzRecord, PlurigeneraSample, SymplecticRecord4, Unclassified, circle_product_comparison,
    geometry4_query, gromov_norm_4_geometric, kappa_h_classify, kappa_l, kappa_s_4, kappa_s_table,
    representative_records, surface_product_record,
)
from kodaira_values import (
    KAPPA_ONE, KAPPA_TWO, KAPPA_ZERO, NEG_INF, KodairaDim, NonzeroUnquantified, NormConstant,
)
from kodim_errors import PreconditionError
from taxonomy import Geometry4Name
from threefold import Monodromy


class TestKappaS(unittest.TestCase):

    def test_clauses(self):
        cases = [((-3, 9), NEG_INF), ((0, 0), KAPPA_ZERO), ((5, 0), KAPPA_ONE), ((5, 2), KAPPA_TWO),
                 ((2, -1), NEG_INF)]
        for (kw, k2), expected in cases:
            self.assertEqual(kappa_s_4(SymplecticRecord4(kw, k2)), expected, (kw, k2))

    def test_inconsistent_data(self):
        with self.assertRaises(PreconditionError):
            kappa_s_4(SymplecticRecord4(0, 1))

    def test_non_minimal(self):
        with self.assertRaisesRegex(PreconditionError, "minimal model"):
            kappa_s_4(SymplecticRecord4(-3, 8, minimal=False))

    def test_rationals_kept_exact(self):
        record = SymplecticRecord4('1/3', 0)
        self.assertEqual(record.k_dot_omega, Fraction(1, 3))
        self.assertEqual(kappa_s_4(record), KAPPA_ONE)


def _kappa_l_by_clauses(g, h, n):
    if g == 0:
        return NEG_INF
    if (g, h, n) == (1, 1, 0):
        return KAPPA_ZERO
    if (g == 1 and h >= 2) or (g == 1 and h == 1 and n > 0) or (g >= 2 and h == 1 and n == 0):
        return KAPPA_ONE
    if (g >= 2 and h >= 2) or (g >= 2 and h == 1 and n >= 1):
        return KAPPA_TWO
    raise AssertionError(f"no clause for {(g, h, n)}")


class TestKappaL(unittest.TestCase):

    def test_exhaustive_grid(self):
        for g in range(6):
            for h in range(6):
                for n in range(6):
                    record = LefschetzRecord(g, h, n)
                    if h == 0:
                        with self.assertRaises(PreconditionError):
                            kappa_l(record)
                        continue
                    self.assertEqual(kappa_l(record), _kappa_l_by_clauses(g, h, n), (g, h, n))

    def test_examples(self):
        self.assertEqual(kappa_l(LefschetzRecord(0, 3, 7)), NEG_INF)
        self.assertEqual(kappa_l(LefschetzRecord(2, 1, 0)), KAPPA_ONE)
        self.assertEqual(kappa_l(LefschetzRecord(2, 1, 1)), KAPPA_TWO)

    def test_not_relatively_minimal(self):
        with self.assertRaises(PreconditionError):
            kappa_l(LefschetzRecord(2, 2, 0, relatively_minimal=False))

    def test_negative_counts_rejected(self):
        with self.assertRaises(PreconditionError):
            LefschetzRecord(1, 1, -1)


class TestKappaH(unittest.TestCase):

    def _classify(self, values, tolerance=Fraction(1, 20)):
        return kappa_h_classify(PlurigeneraSample(tuple(enumerate(values, start=1))), tolerance)

    def test_all_zero(self):
        self.assertEqual(self._classify([0, 0, 0, 0]), NEG_INF)

    def test_bounded(self):
        self.assertEqual(self._classify([1, 1, 1, 1]), KAPPA_ZERO)
        self.assertEqual(self._classify([0, 1, 0, 1]), KAPPA_ZERO)

    def test_linear_growth(self):
        self.assertEqual(self._classify([l + 1 for l in range(1, 9)], Fraction(1, 10)), KAPPA_ONE)

    def test_quadratic_growth(self):
        self.assertEqual(self._classify([3 * l * l + l for l in range(1, 9)]), KAPPA_TWO)

    def test_erratic_growth_unclassified(self):
        result = self._classify([1, 100, 2, 300, 1, 500, 3, 800])
        self.assertIsInstance(result, Unclassified)
        self.assertGreater(result.residual, 0.05)

    def test_sample_preconditions(self):
        with self.assertRaises(PreconditionError):
            PlurigeneraSample(((1, 0), (2, 1), (3, 1)))
        with self.assertRaises(PreconditionError):
            PlurigeneraSample(((1, 0), (3, 1), (2, 1), (4, 2)))
        with self.assertRaises(PreconditionError):
            PlurigeneraSample(((1, 0), (2, -1), (3, 1), (4, 2)))

    def test_tolerance_positive(self):
        with self.assertRaises(PreconditionError):
            self._classify([1, 2, 3, 4], 0)

    def test_scaling_never_gives_minus_infinity(self):
        rng = random.Random(53)
        for _ in range(500):
            length = rng.randint(4, 10)
            if rng.random() < 0.5:
                values = [rng.randint(0, 1) for _ in range(length)]
                values[rng.randrange(length)] = 1
            else:
                k, c = rng.randint(1, 2), rng.randint(1, 5)
                values = [c * l ** k + rng.randint(0, 1) for l in range(1, length + 1)]
            before = self._classify(values)
            for c in (2, 3, 7):
                after = self._classify([c * v for v in values])
                self.assertNotEqual(after, NEG_INF, values)
                if isinstance(before, KodairaDim) and before > KAPPA_ZERO:
                    self.assertEqual(after, before, values)

    def test_exact_powers_keep_their_order(self):
        for k in (1, 2):
            for c in (2, 5, 11):
                self.assertEqual(self._classify([c * l ** k for l in range(1, 9)]), KodairaDim(k))

    def test_non_integer_samples_rejected(self):
        with self.assertRaises(PreconditionError):
            PlurigeneraSample(((1, 0), (2, 1.5), (3, 1), (4, 2)))
        with self.assertRaises(PreconditionError):
            PlurigeneraSample(((1, 0), (2.5, 1), (3, 1), (4, 2)))
        self.assertEqual(PlurigeneraSample(((1, 0), (2, 1.0), (3, Fraction(2)), (4, 2))).samples[2], (3, 2))


class TestGromovNorm4(unittest.TestCase):

    def test_h2xh2_volume(self):
        norm = gromov_norm_4_geometric(Geometry4Name.H2xH2, 12)
        self.assertEqual(norm.coefficient(NormConstant.THREE_OVER_2PI2), 12)
        self.assertAlmostEqual(norm.approx(), 18 / 3.141592653589793 ** 2)

    def test_h4_volume(self):
        norm = gromov_norm_4_geometric(Geometry4Name.H4, '3/2')
        self.assertEqual(norm.coefficient(NormConstant.INV_V4), Fraction(3, 2))
        self.assertIsNone(norm.approx())

    def test_unquantified_without_volume(self):
        self.assertIsInstance(gromov_norm_4_geometric(Geometry4Name.H4), NonzeroUnquantified)

    def test_h2c_volume_ignored(self):
        with self.assertLogs('fourfold', level='WARNING'):
            norm = gromov_norm_4_geometric(Geometry4Name.H2C, 5)
        self.assertIsInstance(norm, NonzeroUnquantified)

    def test_volume_on_zero_norm_geometry(self):
        with self.assertRaises(PreconditionError):
            gromov_norm_4_geometric(Geometry4Name.Nil4, 1)
        self.assertEqual(gromov_norm_4_geometric(Geometry4Name.Nil4).render(), "0")


class TestGeometryReport(unittest.TestCase):

    def test_report_notes(self):
        report = geometry4_query(Geometry4Name.H2xH2)
        self.assertTrue(any(note.startswith("category 2") for note in report.notes))
        self.assertIn("H2xH2", report.render())
        self.assertEqual(report.to_json()['record']['name'], "H2xH2")

    def test_non_kaehler_geometry(self):
        report = geometry4_query(Geometry4Name.Nil4)
        self.assertFalse(any("Kaehler structures" in note for note in report.notes))

    def test_sol_mn_symplectic_only_when_m_equals_n(self):
        report = geometry4_query(Geometry4Name.Sol_mn)
        qualified = [note for note in report.notes if note.startswith("symplectic only for m = n")]
        self.assertEqual(len(qualified), 1)
        self.assertIn("Sol^3 x E", qualified[0])
        self.assertIn(qualified[0], report.render())
        self.assertFalse(any(note.startswith("symplectic only")
                             for note in geometry4_query(Geometry4Name.Nil4).notes))


class TestModels(unittest.TestCase):

    def test_surface_products(self):
        record = surface_product_record(2, 3)
        self.assertEqual((record.k_dot_omega, record.k_squared), (6, 16))
        self.assertEqual(kappa_s_4(surface_product_record(0, 5)), NEG_INF)
        self.assertEqual(kappa_s_4(surface_product_record(1, 1)), KAPPA_ZERO)
        self.assertEqual(kappa_s_4(surface_product_record(1, 4)), KAPPA_ONE)

    def test_representatives_match_categories(self):
        rows = kappa_s_table(representative_records())
        self.assertEqual(len(rows), 9)
        for model, kappa, matches in rows:
            self.assertTrue(matches, f"{model.geometry.value}: {kappa}")

    def test_circle_product_comparison(self):
        for genus in range(4):
            self.assertTrue(circle_product_comparison(genus).agree, genus)
        comparison = circle_product_comparison(1, Monodromy.anosov)
        self.assertEqual(comparison.kappa_t, KAPPA_ZERO)
        self.assertTrue(comparison.agree)


if __name__ == '__main__':
    unittest.main(verbosity=2)
