#!/usr/bin/env python3
"""
Tests for domination obstructions, homological entropy and product norm bounds.

Run with: python3 test_maps.py
"""

import dataclasses
import math
import random
import unittest
from collections import Counter
from fractions import Fraction

import sympy

from kodaira_values import (
    KAPPA_ONE, KAPPA_TWO, KAPPA_ZERO, NEG_INF, NonzeroUnquantified, NormConstant, SymbolicNorm,
)
from kodim_errors import PreconditionError
from maps import (
    HomologyEndo, InvariantProfile, MapCategory, MapClaim, Obstruction, degree_one_equivalence_check,
    domination_obstructions, mutual_domination_obstructions, product_norm_bounds, profile_from_manifold3,
    shub_entropy, spectral_radii,
)
from random_models import (
    random_consistent_profiles, random_equivalence_triple, random_homology_endo, random_integer_matrix,
    random_unimodular,
)
from taxonomy import Geometry3Name, Pi1Class
from threefold import Manifold3, Piece3


def _hyperbolic_profile(volume, kappa=KAPPA_ONE):
    return InvariantProfile(3, kappa_t=kappa, gromov_norm=SymbolicNorm.of(volume, NormConstant.INV_V3))


def _found(claim):
    return [v.obstruction for v in domination_obstructions(claim)]


_OPTIONAL_FIELDS = ('kappa_t', 'kappa_h', 'gromov_norm', 'betti', 'b2_plus', 'b2_minus', 'hJ_plus',
                    'hJ_minus', 'algebraic_dimension', 'pi1_classes')


def _random_full_profile(rng, dimension):
    b1 = rng.randint(0, 3)
    betti = (1, b1, b1, 1) if dimension == 3 else (1, b1, rng.randint(0, 6), b1, 1)
    norm = rng.choice([SymbolicNorm.zero(), NonzeroUnquantified(),
                       SymbolicNorm.of(Fraction(rng.randint(1, 40), rng.randint(1, 5)), NormConstant.INV_V3)])
    return InvariantProfile(
        dimension, kappa_t=rng.choice([NEG_INF, KAPPA_ZERO, KAPPA_ONE]),
        kappa_h=rng.choice([NEG_INF, KAPPA_ZERO, KAPPA_ONE, KAPPA_TWO]), gromov_norm=norm, betti=betti,
        b2_plus=rng.randint(0, 4), b2_minus=rng.randint(0, 4), hJ_plus=rng.randint(0, 4),
        hJ_minus=rng.randint(0, 4), algebraic_dimension=rng.randint(0, 2),
        pi1_classes=tuple(sorted(rng.choice(list(Pi1Class)) for _ in range(rng.randint(1, 3)))),
    )


def _forget(rng, profile):
    dropped = [key for key in _OPTIONAL_FIELDS if rng.random() < 0.5]
    return dataclasses.replace(profile, **{key: None for key in dropped})


def _matrix_power(matrix, k):
    power = sympy.Matrix(matrix) ** k
    return [[int(v) for v in power.row(i)] for i in range(power.rows)]


class TestProfiles(unittest.TestCase):

    def test_poincare_duality_checked(self):
        with self.assertRaises(PreconditionError):
            InvariantProfile(3, betti=(1, 2, 0, 1))

    def test_genus_only_for_surfaces(self):
        with self.assertRaises(PreconditionError):
            InvariantProfile(3, genus=2)

    def test_json_round_trip(self):
        profile = InvariantProfile(4, kappa_h=KAPPA_TWO, betti=(1, 0, 6, 0, 1), b2_plus=3, b2_minus=3,
                                   gromov_norm=NonzeroUnquantified("H4"), label="X")
        self.assertEqual(InvariantProfile.from_json(profile.to_json()), profile)

    def test_from_manifold(self):
        profile = profile_from_manifold3(Manifold3.of([Piece3(Geometry3Name.S3)], [Piece3.hyperbolic(3)]))
        self.assertEqual(profile.kappa_t, KAPPA_ONE)
        self.assertEqual(profile.pi1_classes, (Pi1Class.Finite, Pi1Class.Hyperbolic))
        self.assertEqual(profile.gromov_norm.coefficient(NormConstant.INV_V3), 3)


class TestDomination(unittest.TestCase):

    def test_claim_preconditions(self):
        with self.assertRaises(PreconditionError):
            MapClaim(InvariantProfile(3), InvariantProfile(3), 0)
        with self.assertRaises(PreconditionError):
            MapClaim(InvariantProfile(3), InvariantProfile(4), 1)

    def test_kappa_t_monotone(self):
        claim = MapClaim(InvariantProfile(3, kappa_t=KAPPA_ZERO), InvariantProfile(3, kappa_t=KAPPA_ONE), 1)
        self.assertEqual(_found(claim), [Obstruction.KAPPA_T])

    def test_norm_with_degree(self):
        self.assertEqual(_found(MapClaim(_hyperbolic_profile(4), _hyperbolic_profile(2), 2)), [])
        self.assertEqual(_found(MapClaim(_hyperbolic_profile(4), _hyperbolic_profile(2), -3)),
                         [Obstruction.GROMOV_NORM])

    def test_zero_norm_onto_unquantified(self):
        source = InvariantProfile(4, gromov_norm=SymbolicNorm.zero())
        target = InvariantProfile(4, gromov_norm=NonzeroUnquantified())
        self.assertEqual(_found(MapClaim(source, target, 1)), [Obstruction.GROMOV_NORM])

    def test_kappa_h_only_for_holomorphic(self):
        source, target = InvariantProfile(4, kappa_h=NEG_INF), InvariantProfile(4, kappa_h=KAPPA_ONE)
        self.assertEqual(_found(MapClaim(source, target, 1)), [])
        self.assertEqual(_found(MapClaim(source, target, 1, MapCategory.Holomorphic)), [Obstruction.KAPPA_H])

    def test_betti_numbers(self):
        source = InvariantProfile(3, betti=(1, 0, 0, 1))
        target = InvariantProfile(3, betti=(1, 2, 2, 1))
        self.assertEqual(_found(MapClaim(source, target, 1)), [Obstruction.BETTI, Obstruction.BETTI])

    def test_hj_counts_only_for_jj_prime(self):
        source, target = InvariantProfile(4, hJ_minus=1), InvariantProfile(4, hJ_minus=4)
        self.assertEqual(_found(MapClaim(source, target, 1, MapCategory.Holomorphic)), [])
        self.assertEqual(_found(MapClaim(source, target, 1, MapCategory.JJprimeHolomorphic)),
                         [Obstruction.HJ_MINUS])

    def test_surface_genus(self):
        claim = MapClaim(InvariantProfile(2, genus=1), InvariantProfile(2, genus=2), 1)
        self.assertEqual(_found(claim), [Obstruction.SURFACE_GENUS])

    def test_pi1_ladder(self):
        source = profile_from_manifold3(Manifold3.of([Piece3(Geometry3Name.S3)], [Piece3(Geometry3Name.S2xE)]))
        target = profile_from_manifold3(Manifold3.of([Piece3(Geometry3Name.S2xE)]))
        self.assertEqual(_found(MapClaim(source, target, 1)), [])
        target = profile_from_manifold3(Manifold3.of([Piece3(Geometry3Name.E3)]))
        self.assertIn(Obstruction.PI1_LADDER, _found(MapClaim(source, target, 1)))

    def test_absent_fields_never_violate(self):
        self.assertEqual(_found(MapClaim(InvariantProfile(4), InvariantProfile(4, b2_plus=5), 7)), [])

    def test_consistent_random_pairs(self):
        rng = random.Random(23)
        for _ in range(500):
            source, target, degree = random_consistent_profiles(rng)
            self.assertEqual(domination_obstructions(MapClaim(source, target, degree)), [])
            if target.kappa_t < source.kappa_t:
                self.assertIn(Obstruction.KAPPA_T, _found(MapClaim(target, source, 1)))

    def test_mutual(self):
        report = mutual_domination_obstructions(_hyperbolic_profile(2), _hyperbolic_profile(3))
        self.assertFalse(report.consistent)
        self.assertEqual([v.obstruction for v in report.forward], [Obstruction.GROMOV_NORM])
        self.assertEqual(report.backward, ())
        self.assertTrue(mutual_domination_obstructions(_hyperbolic_profile(2), _hyperbolic_profile(2)).consistent)

    def test_more_fields_never_remove_violations(self):
        rng = random.Random(43)
        for index in range(1000):
            dimension = 3 if index % 2 else 4
            source, target = _random_full_profile(rng, dimension), _random_full_profile(rng, dimension)
            degree = rng.choice([-2, -1, 1, 2, 3])
            category = rng.choice(list(MapCategory))
            full = Counter(_found(MapClaim(source, target, degree, category)))
            partial = Counter(_found(MapClaim(_forget(rng, source), _forget(rng, target), degree, category)))
            self.assertFalse(partial - full, (source, target))

    def test_kappa_consistency_is_transitive(self):
        rng = random.Random(47)
        kappa_obstructions = (Obstruction.KAPPA_T, Obstruction.KAPPA_H)
        for _ in range(1000):
            a, b, c = (_random_full_profile(rng, 3) for _ in range(3))
            ab = _found(MapClaim(a, b, 1, MapCategory.Holomorphic))
            bc = _found(MapClaim(b, c, 1, MapCategory.Holomorphic))
            ac = _found(MapClaim(a, c, 1, MapCategory.Holomorphic))
            for obstruction in kappa_obstructions:
                if obstruction not in ab and obstruction not in bc:
                    self.assertNotIn(obstruction, ac)


class TestEntropy(unittest.TestCase):

    def test_golden_ratio_squared(self):
        entropy = shub_entropy(HomologyEndo(([[2, 1], [1, 1]],)))
        self.assertAlmostEqual(entropy, math.log((3 + math.sqrt(5)) / 2), delta=1e-9)

    def test_power_law(self):
        s1 = shub_entropy(HomologyEndo(([[2, 1], [1, 1]],)))
        s2 = shub_entropy(HomologyEndo(([[5, 3], [3, 2]],)))
        self.assertAlmostEqual(s2, 2 * s1, delta=1e-8)

    def test_power_law_cube(self):
        s1 = shub_entropy(HomologyEndo(([[2, 1], [1, 1]],)))
        cube = _matrix_power([[2, 1], [1, 1]], 3)
        self.assertEqual(cube, [[13, 8], [8, 5]])
        self.assertAlmostEqual(shub_entropy(HomologyEndo((cube,))), 3 * s1, delta=1e-8)

    def test_power_law_random(self):
        rng = random.Random(37)
        for _ in range(100):
            endo = random_homology_endo(rng)
            k = rng.randint(2, 3)
            power = HomologyEndo(tuple(_matrix_power(m, k) if m else m for m in endo.matrices))
            self.assertAlmostEqual(shub_entropy(power), k * shub_entropy(endo), delta=1e-7, msg=endo.to_json())

    def test_repeated_and_zero_roots(self):
        self.assertEqual(shub_entropy(HomologyEndo(([[1, 0], [0, 1]], [[0]]))), 0.0)
        self.assertEqual(shub_entropy(HomologyEndo(([[1, 1], [0, 1]],))), 0.0)

    def test_largest_degree_wins(self):
        endo = HomologyEndo(([[1]], [[3, 0], [0, -2]], [[1]]))
        self.assertAlmostEqual(shub_entropy(endo), math.log(3), delta=1e-9)

    def test_workers_agree(self):
        rng = random.Random(2)
        for _ in range(10):
            endo = random_homology_endo(rng)
            self.assertEqual(spectral_radii(endo, workers=1), spectral_radii(endo, workers=4))

    def test_conjugation_invariance(self):
        rng = random.Random(31)
        for _ in range(200):
            n = rng.randint(1, 3)
            f = random_integer_matrix(rng, n)
            u, u_inv = random_unimodular(rng, n)
            verdict = degree_one_equivalence_check(HomologyEndo((f,)), [u], [u_inv])
            self.assertTrue(verdict.passed, f)
            self.assertAlmostEqual(verdict.entropy_f1, verdict.entropy_f2, delta=1e-9)

    def test_degree_one_triples(self):
        rng = random.Random(41)
        for _ in range(500):
            f1, g_star, h_star = random_equivalence_triple(rng)
            verdict = degree_one_equivalence_check(f1, g_star, h_star)
            self.assertTrue(verdict.passed, f1.to_json())

    def test_integer_entries_only(self):
        with self.assertRaises(PreconditionError):
            HomologyEndo(([[2.9]],))
        with self.assertRaises(PreconditionError):
            HomologyEndo(([[1, Fraction(1, 2)], [0, 1]],))
        with self.assertRaises(PreconditionError):
            HomologyEndo(([[True]],))
        with self.assertRaises(PreconditionError):
            degree_one_equivalence_check(HomologyEndo(([[2]],)), [[[1.5]]], [[[1]]])
        self.assertEqual(HomologyEndo(([[2.0]], [[Fraction(3)]])).matrices, (((2,),), ((3,),)))

    def test_singular_map_rejected(self):
        with self.assertRaises(PreconditionError):
            degree_one_equivalence_check(HomologyEndo(([[2, 1], [1, 1]],)), [[[1, 1], [1, 1]]], [[[1, 0], [0, 1]]])

    def test_shape_errors(self):
        with self.assertRaises(PreconditionError):
            HomologyEndo(([[1, 2]],))
        with self.assertRaises(PreconditionError):
            HomologyEndo(())
        with self.assertRaises(PreconditionError):
            shub_entropy(HomologyEndo(([[1]],)), tolerance=0)


class TestProductBounds(unittest.TestCase):

    def test_hyperbolic_pair(self):
        a, b = Fraction(203, 100), Fraction(3)
        bounds = product_norm_bounds(SymbolicNorm.of(a, NormConstant.INV_V3),
                                     SymbolicNorm.of(b, NormConstant.INV_V3), 3, 3)
        square = (NormConstant.INV_V3, NormConstant.INV_V3)
        self.assertEqual(bounds.lower.as_dict(), {square: a * b})
        self.assertEqual(bounds.upper.as_dict(), {square: 20 * a * b})
        self.assertEqual(bounds.lower.render(), "609/100*(1/v3)^2")

    def test_zero_factor(self):
        bounds = product_norm_bounds(SymbolicNorm.zero(), NonzeroUnquantified(), 3, 4)
        self.assertTrue(bounds.lower.is_zero and bounds.upper.is_zero)

    def test_unsupported(self):
        mixed = SymbolicNorm.of(1, NormConstant.INV_V3) + SymbolicNorm.of(1, NormConstant.INV_V4)
        with self.assertRaises(PreconditionError):
            product_norm_bounds(mixed, SymbolicNorm.of(1, NormConstant.INV_V3), 3, 4)
        with self.assertRaises(PreconditionError):
            product_norm_bounds(NonzeroUnquantified(), SymbolicNorm.of(1, NormConstant.INV_V3), 4, 3)


if __name__ == '__main__':
    import logging
    logging.disable(logging.CRITICAL)

    unittest.main(verbosity=2)
