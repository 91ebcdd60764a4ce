# -*- coding: utf-8 -*-
"""Tests for ``supstar.scalars`` module"""

__author__ = "Stephan Sokolow (deitarion/SSokolow)"
__license__ = "GNU GPL 2.0 or later"

import unittest
from random import Random

from sympy.polys.domains import QQ, QQ_I

from supstar.scalars import (I_UNIT, conj, fmt_rational, gauss, is_zero,
    matrix_of_polys, parse_rational, poly_arith, poly_conj, poly_degree,
    poly_from_expr, poly_from_json, poly_partial, poly_ring, poly_to_json,
    random_poly)
from supstar.util import DimensionError, ParseError


class TestRationals(unittest.TestCase):
    """Tests for Gaussian rationals and their text form"""

    def test_parse_rational(self):
        """parse_rational: reduces and accepts bare integers"""
        self.assertEqual(parse_rational('6/4'), QQ(3, 2))
        self.assertEqual(parse_rational(' -7 '), QQ(-7))
        self.assertEqual(parse_rational('-2/ 8'), QQ(-1, 4))

    def test_parse_rational_rejects(self):
        """parse_rational: zero denominators and junk are ParseErrors"""
        for text in ('3/0', 'abc', '1.5', '1/2/3', ''):
            with self.assertRaises(ParseError):
                parse_rational(text)

    def test_fmt_rational(self):
        """fmt_rational: renders p/q in lowest terms"""
        self.assertEqual(fmt_rational(QQ(10, -4)), '-5/2')
        self.assertEqual(fmt_rational(QQ(0)), '0')

    def test_gauss_and_conj(self):
        """gauss/conj: build and conjugate i-carrying values"""
        value = gauss((1, 2), -3)
        self.assertEqual(value, QQ_I(QQ(1, 2), QQ(-3)))
        self.assertEqual(conj(value), QQ_I(QQ(1, 2), QQ(3)))
        self.assertEqual(I_UNIT * I_UNIT, QQ_I(-1, 0))
        self.assertTrue(is_zero(gauss()))
        self.assertFalse(is_zero(I_UNIT))


class TestPolynomials(unittest.TestCase):
    """Tests for polynomial helpers over the chart coordinates"""

    def test_ring_is_cached(self):
        """poly_ring: the same dimension yields the same ring"""
        self.assertIs(poly_ring(3), poly_ring(3))
        self.assertEqual([str(x) for x in poly_ring(2).gens], ['x1', 'x2'])
        with self.assertRaises(DimensionError):
            poly_ring(0)

    def test_arith_and_partial(self):
        """poly_arith/poly_partial: exact ring operations"""
        x1, x2 = poly_ring(2).gens
        f, g = x1 ** 2 * x2, x1 - x2
        self.assertEqual(poly_arith(f, g, 'add'), f + g)
        self.assertEqual(poly_arith(f, g, 'mul'), x1 ** 3 * x2 - x1 ** 2 *
                         x2 ** 2)
        self.assertEqual(poly_partial(f, 1), 2 * x1 * x2)
        self.assertEqual(poly_partial(f, 2), x1 ** 2)
        with self.assertRaises(DimensionError):
            poly_partial(f, 3)
        with self.assertRaises(DimensionError):
            poly_arith(f, poly_ring(3).gens[0], 'add')
        with self.assertRaises(ValueError):
            poly_arith(f, g, 'div')

    def test_conj_and_degree(self):
        """poly_conj/poly_degree: coefficientwise conjugation, total degree"""
        R = poly_ring(2)
        x1, x2 = R.gens
        f = x1 * x2 ** 2 * I_UNIT + x1
        self.assertEqual(poly_conj(f), x1 - x1 * x2 ** 2 * I_UNIT)
        self.assertEqual(poly_degree(f), 3)
        self.assertEqual(poly_degree(R.zero), -1)

    def test_from_expr(self):
        """poly_from_expr: sympy syntax with I as the imaginary unit"""
        x1, x2 = poly_ring(2).gens
        self.assertEqual(poly_from_expr('x1*x2 + I*x1**2/2', 2),
                         x1 * x2 + (x1 ** 2).mul_ground(QQ_I(0, QQ(1, 2))))
        for text in ('x3', 'sin(x1)', '1/x1', 'x1 +'):
            with self.assertRaises(ParseError):
                poly_from_expr(text, 2)

    def test_json_forms(self):
        """poly_to_json/poly_from_json: explicit terms and expressions"""
        x1, x2 = poly_ring(2).gens
        f = x1 * x2.mul_ground(QQ_I(QQ(1, 3), QQ(-2)))
        doc = poly_to_json(f)
        self.assertEqual(doc, [{'exps': [1, 1], 're': '1/3', 'im': '-2'}])
        self.assertEqual(poly_from_json(doc, 2), f)
        self.assertEqual(poly_from_json('x1 - 1', 2), x1 - 1)
        self.assertEqual(poly_from_json(5, 2), poly_ring(2)(5))
        with self.assertRaises(ParseError):
            poly_from_json([{'exps': [1], 're': '1'}], 2)
        with self.assertRaises(ParseError):
            poly_from_json([{'exps': [1, 0], 're': '1/0'}], 2)
        with self.assertRaises(ParseError):
            poly_from_json({'exps': [1, 0]}, 2)

    def test_matrix_of_polys(self):
        """matrix_of_polys: nesting must match the requested shape"""
        R = poly_ring(2)
        parsed = matrix_of_polys([['x1', 0], [0, 1]], 2, (2, 2))
        self.assertEqual(parsed[0][0], R.gens[0])
        self.assertEqual(parsed[1][1], R.one)
        with self.assertRaises(ParseError):
            matrix_of_polys([['x1', 0]], 2, (2, 2))

    def test_random_poly_is_seeded(self):
        """random_poly: equal seeds give equal draws"""
        self.assertEqual(random_poly(3, Random(7)), random_poly(3, Random(7)))
        real = random_poly(2, Random(1), complex_coeffs=False)
        self.assertEqual(poly_conj(real), real)

# vim: set sw=4 sts=4 expandtab :
