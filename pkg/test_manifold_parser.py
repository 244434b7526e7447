#!/usr/bin/env python3
"""
Tests for the description language: 3-manifolds and keyword records.

Covers:
- Grammar examples and exact rationals
- render/parse round trip over generated descriptions
- Located errors (offset and expected tokens)
- Record payloads of each command
- Random inputs either parse or fail with ParseError

Run with: python3 test_manifold_parser.py
"""

import random
import unittest
from fractions import Fraction
from unittest import mock

from fourfold import LefschetzRecord, PlurigeneraSample, SymplecticRecord4
from kodaira_values import NEG_INF
from kodim_errors import ParseError
from lattice import Lattice2, Product6
from manifold_parser import (
    MAX_NESTING, Geom4Request, LatticeRequest, LightConeRequest, NegativityRequest, Product6Request,
    ThomRequest, parse_geom4, parse_kappa4_record, parse_kappa6_record, parse_lattice_record,
    parse_manifold3, parse_product6_record, parse_record,
)
from random_models import random_manifold3, random_noise
from taxonomy import Geometry3Name, Geometry4Name
from threefold import validate


class TestManifoldGrammar(unittest.TestCase):

    def test_connected_sum(self):
        m = parse_manifold3("S3 # S3")
        self.assertEqual(len(m.blocks), 2)
        self.assertTrue(all(b.pieces[0].geometry is Geometry3Name.S3 for b in m.blocks))

    def test_jsj_block(self):
        m = parse_manifold3("JSJ[H3(vol=203/100), SL2R]")
        self.assertEqual(len(m.blocks), 1)
        pieces = m.blocks[0].pieces
        self.assertEqual([p.geometry for p in pieces], [Geometry3Name.H3, Geometry3Name.SL2R])
        self.assertEqual(pieces[0].volume, Fraction(203, 100))

    def test_invalid_but_parsable(self):
        m = parse_manifold3("JSJ[E3, Nil]")
        self.assertEqual(len(validate(m)), 2)

    def test_decimal_volume_exact(self):
        m = parse_manifold3("H3(volume=2.25)")
        self.assertEqual(m.blocks[0].pieces[0].volume, Fraction(9, 4))

    def test_whitespace_and_synonyms(self):
        m = parse_manifold3("  hyperbolic( vol = 1 )#psl2r #  s^3 ")
        self.assertEqual([b.pieces[0].geometry for b in m.blocks],
                         [Geometry3Name.H3, Geometry3Name.SL2R, Geometry3Name.S3])

    def test_round_trip(self):
        rng = random.Random(101)
        for _ in range(10000):
            m = random_manifold3(rng)
            self.assertEqual(parse_manifold3(m.render()), m, m.render())


class TestManifoldErrors(unittest.TestCase):

    def _error(self, text):
        with self.assertRaises(ParseError) as ctx:
            parse_manifold3(text)
        return ctx.exception

    def test_empty_input(self):
        self.assertEqual(self._error("   ").offset, 0)

    def test_unknown_geometry(self):
        error = self._error("S3 # Foo")
        self.assertEqual(error.offset, 5)
        self.assertIn("S3", error.expected)
        self.assertEqual(error.exit_code, 2)

    def test_trailing_hash(self):
        error = self._error("S3 #")
        self.assertEqual(error.offset, 4)
        self.assertIn("name", error.expected)

    def test_bad_character(self):
        self.assertEqual(self._error("S3 $ S3").offset, 3)

    def test_offsets_count_utf8_bytes(self):
        # the no-break space is two bytes in UTF-8
        error = self._error("JSJ [E3, Foo]")
        self.assertEqual(error.offset, 10)
        self.assertEqual(self._error("S3 # Foo").offset, 5)

    def test_volume_on_non_hyperbolic_piece(self):
        self.assertEqual(self._error("S3 # Nil(vol=1)").offset, 5)

    def test_missing_volume(self):
        self._error("H3")

    def test_malformed_rationals(self):
        self._error("H3(vol=1/0)")
        self._error("H3(vol=0)")
        self._error("H3(vol=-2)")

    def test_random_input_never_crashes(self):
        rng = random.Random(7)
        alphabet = "S3HNilE2xSolJ[](),#=vol/.0123456789 -~^"
        for _ in range(3000):
            text = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 24)))
            try:
                parse_manifold3(text)
            except ParseError as exn:
                self.assertGreaterEqual(exn.offset, 0)
                self.assertLessEqual(exn.offset, len(text))


class TestRecords(unittest.TestCase):

    def test_symplectic_record(self):
        record = parse_kappa4_record("sympl4(kw=-3, k2=9, minimal=true)")
        self.assertEqual(record, SymplecticRecord4(-3, 9, True))

    def test_lefschetz_record(self):
        self.assertEqual(parse_kappa4_record("lef(g=2, h=1, n=1)"), LefschetzRecord(2, 1, 1))
        self.assertEqual(parse_kappa4_record("lef(g=2,h=2,min=false)"), LefschetzRecord(2, 2, 0, False))

    def test_plurigenera(self):
        record = parse_kappa4_record("plurigenera[(1,0), (2,1), (3,1), (4,2)]")
        self.assertIsInstance(record, PlurigeneraSample)
        self.assertEqual(record.samples[-1], (4, 2))

    def test_missing_argument(self):
        text = "sympl4(kw=1)"
        with self.assertRaises(ParseError) as ctx:
            parse_kappa4_record(text)
        self.assertEqual(ctx.exception.expected, frozenset({'k2'}))
        self.assertEqual(ctx.exception.offset, len(text))

    def test_unknown_argument(self):
        with self.assertRaises(ParseError) as ctx:
            parse_kappa4_record("lef(g=1, h=1, q=3)")
        self.assertEqual(ctx.exception.offset, 16)

    def test_non_integer_genus(self):
        with self.assertRaises(ParseError):
            parse_kappa4_record("lef(g=1.5, h=1)")

    def test_wrong_record(self):
        with self.assertRaises(ParseError) as ctx:
            parse_kappa4_record("geom4(H4)")
        self.assertIn('sympl4', ctx.exception.expected)

    def test_geom4(self):
        self.assertEqual(parse_geom4("geom4(H2xH2, vol=12)"), Geom4Request(Geometry4Name.H2xH2, Fraction(12)))
        self.assertEqual(parse_geom4("geom4(Nil4)"), Geom4Request(Geometry4Name.Nil4))
        with self.assertRaises(ParseError):
            parse_geom4("geom4(Foo)")

    def test_product6(self):
        request = parse_product6_record("product6(k2=9, kw=-3, w2=1, g=2, area=1/2, kappa=-inf)")
        self.assertIsInstance(request, Product6Request)
        self.assertEqual((request.k2, request.kw, request.w2), (9, -3, 1))
        self.assertEqual(request.sigma.area, Fraction(1, 2))
        self.assertEqual(request.kappa, NEG_INF)

    def test_negativity(self):
        request = parse_product6_record("negativity(lattice=cp2#8, omega=(3,1,1,1,1,1,1,1,1), g=2)")
        self.assertIsInstance(request, NegativityRequest)
        self.assertEqual(request.lattice, Lattice2.cp2_blowup(8))
        self.assertEqual(len(request.omega), 9)
        self.assertEqual(request.area, 1)

    def test_lattice_records(self):
        self.assertEqual(parse_lattice_record("lattice(cp2#3)"), LatticeRequest(Lattice2.cp2_blowup(3)))
        self.assertEqual(parse_lattice_record("lattice(s2xs2)"), LatticeRequest(Lattice2.s2xs2()))
        light = parse_lattice_record("lightcone(lattice=cp2#1, omega=(2,1), x=(1,2))")
        self.assertIsInstance(light, LightConeRequest)
        self.assertEqual(light.x, (1, 2))
        thom = parse_lattice_record("thom(real=(1,2,1), complex=(1,0,22,0,1), chi_real=0, chi_complex=24)")
        self.assertEqual(thom, ThomRequest((1, 2, 1), (1, 0, 22, 0, 1), 0, 24))

    def test_bad_lattice_family(self):
        with self.assertRaises(ParseError) as ctx:
            parse_lattice_record("lattice(cp3)")
        self.assertEqual(ctx.exception.offset, 8)

    def test_kappa6(self):
        self.assertEqual(parse_kappa6_record("kappa6(k3=0, k2w=0, kw2=2)"), Product6(0, 0, 2))
        self.assertIsInstance(parse_kappa6_record("product6(k2=0, kw=0, w2=1, g=2)"), Product6Request)

    def test_deep_nesting_is_parse_error(self):
        text = "kappa6(k3=" + "(" * 3000 + "1" + ")" * 3000 + ", k2w=1, kw2=1)"
        with self.assertRaises(ParseError) as ctx:
            parse_kappa6_record(text)
        # the record's own paren is the first level
        self.assertEqual(ctx.exception.offset, len("kappa6(k3=") + MAX_NESTING - 1)
        self.assertEqual(ctx.exception.exit_code, 2)

    def test_nesting_within_limit(self):
        depth = MAX_NESTING - 1
        record = parse_record("r(" + "(" * (depth - 1) + "1" + ")" * (depth - 1) + ")", ('r',))
        value = record.positional[0].value
        for _ in range(depth - 1):
            self.assertEqual(len(value), 1)
            value = value[0]
        self.assertEqual(value, 1)

    def test_recursion_limit_is_parse_error(self):
        text = "lightcone(lattice=cp2#1, omega=" + "(" * 5000 + "2" + ")" * 5000 + ", x=(1,2))"
        with mock.patch('manifold_parser.MAX_NESTING', 10 ** 6):
            with self.assertRaises(ParseError):
                parse_lattice_record(text)

    def test_noise_on_every_parser(self):
        rng = random.Random(11)
        parsers = [parse_manifold3, parse_kappa4_record, parse_geom4, parse_kappa6_record,
                   parse_product6_record, parse_lattice_record]
        for index in range(12000):
            text = random_noise(rng)
            try:
                parsers[index % len(parsers)](text)
            except ParseError as exn:
                self.assertGreaterEqual(exn.offset, 0)
                self.assertLessEqual(exn.offset, len(text.encode()))


if __name__ == '__main__':
    import logging
    logging.disable(logging.CRITICAL)

    unittest.main(verbosity=2)
