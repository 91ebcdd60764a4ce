# -*- coding: utf-8 -*-
"""Tests for ``supstar.superalgebra`` module"""

__author__ = "Stephan Sokolow (deitarion/SSokolow)"
__license__ = "GNU GPL 2.0 or later"

import unittest
from random import Random

from sympy.polys.domains import QQ, QQ_I

from supstar.scalars import I_UNIT, poly_ring
from supstar.superalgebra import (AlgebraElement, Shape, conj, degree_map,
    delta, delta_inv, delta_star, frame_components, ins_form, ins_frame,
    ins_frame_j, ins_sym, insert_front, kernel_projection, key_degree,
    merge_sign, parity, random_element, remove_front, sigma0,
    undeformed_mul)
from supstar.util import DimensionError, LambdaDivisionError, ParseError

SHAPE = Shape(2, 2)


def mono(*args, **kwargs) -> AlgebraElement:
    """Shorthand for a monomial on the 2+2 test shape"""
    return AlgebraElement.monomial(SHAPE, *args, **kwargs)


class TestSignConventions(unittest.TestCase):
    """Tests for the Grassmann index-set helpers"""

    def test_merge_sign(self):
        """merge_sign: counts inversions, zero on overlap"""
        self.assertEqual(merge_sign((), (1, 2)), (1, (1, 2)))
        self.assertEqual(merge_sign((2, 3), (1,)), (1, (1, 2, 3)))
        self.assertEqual(merge_sign((3,), (1, 2)), (1, (1, 2, 3)))
        self.assertEqual(merge_sign((2,), (1, 3)), (-1, (1, 2, 3)))
        self.assertEqual(merge_sign((2,), (2,))[0], 0)

    def test_insert_remove_front(self):
        """insert_front/remove_front: sign is (-1)^position"""
        self.assertEqual(insert_front(2, (1, 3)), (-1, (1, 2, 3)))
        self.assertEqual(insert_front(1, (2, 3)), (1, (1, 2, 3)))
        self.assertEqual(insert_front(2, (2,))[0], 0)
        self.assertEqual(remove_front(3, (1, 2, 3)), (1, (1, 2)))
        self.assertEqual(remove_front(2, (1, 2, 3)), (-1, (1, 3)))
        self.assertEqual(remove_front(4, (1, 2))[0], 0)

    def test_key_degree(self):
        """key_degree: lambda counts twice"""
        self.assertEqual(key_degree((1, (2, 0), (1,), (1, 2))), 5)


class TestElements(unittest.TestCase):
    """Tests for construction, arithmetic and truncation"""

    def test_monomial_sorts_with_sign(self):
        """monomial: unsorted frame and form indices pick up their sign"""
        self.assertEqual(mono(eset=(2, 1)), -mono(eset=(1, 2)))
        self.assertEqual(mono(aset=(2, 1)), -mono(aset=(1, 2)))
        self.assertFalse(mono(eset=(1, 1)))
        self.assertEqual(mono(mu={2: 3}), mono(mu=(0, 3)))
        with self.assertRaises(DimensionError):
            mono(eset=(3,))
        with self.assertRaises(DimensionError):
            mono(mu=(1, 0, 0))

    def test_truncation_drops_terms(self):
        """Terms above the truncation order are never stored"""
        self.assertFalse(mono(t=2, trunc=3))
        self.assertTrue(mono(t=1, mu=(1, 0), trunc=3))
        summed = mono(trunc=4) + mono(mu=(3, 2), trunc=8)
        self.assertEqual(summed.trunc, 4)
        self.assertEqual(summed, mono(trunc=4))

    def test_equality_at_smaller_trunc(self):
        """Elements compare modulo the smaller truncation"""
        low = mono(mu=(1, 0), trunc=1)
        high = mono(mu=(1, 0), trunc=5) + mono(mu=(3, 0), trunc=5)
        self.assertEqual(low, high)
        self.assertNotEqual(high, mono(mu=(1, 0), trunc=5))

    def test_lambda_bookkeeping(self):
        """divide_lambda/mul_lambda/lambda_coefficient shift trunc by 2t"""
        F = mono(2, t=1, mu=(1, 0), trunc=6)
        self.assertEqual(F.divide_lambda().trunc, 4)
        self.assertEqual(F.divide_lambda().mul_lambda(), F)
        self.assertEqual(F.lambda_coefficient(1), mono(2, mu=(1, 0), trunc=4))
        self.assertFalse(F.lambda_coefficient(0))
        with self.assertRaises(LambdaDivisionError) as ctx:
            (F + mono(eset=(1,), trunc=6)).divide_lambda()
        self.assertEqual(ctx.exception.term, (0, (0, 0), (1,), ()))

    def test_homogeneous_parts(self):
        """homogeneous_parts: split by (E parity, form parity)"""
        F = mono(eset=(1,)) + mono(aset=(1,)) + mono(mu=(1, 1))
        parts = F.homogeneous_parts()
        self.assertEqual(sorted(parts), [(0, 0), (0, 1), (1, 0)])
        self.assertEqual(parts[(1, 0)], mono(eset=(1,)))

    def test_json(self):
        """from_json: full and compact frame forms"""
        F = mono(QQ_I(QQ(1, 2), 1), t=1, mu=(1, 0), eset=(2,), trunc=5)
        self.assertEqual(AlgebraElement.from_json(SHAPE, F.to_json()), F)
        compact = AlgebraElement.from_json(
            SHAPE, {'frames': {'': 'x1*x2', '1 2': '3/2'}}, trunc=4)
        x1, x2 = SHAPE.ring.gens
        self.assertEqual(compact, mono(x1 * x2, trunc=4) +
                         mono(QQ_I(QQ(3, 2), 0), eset=(1, 2), trunc=4))
        self.assertEqual(frame_components(compact)[(1, 2)],
                         SHAPE.ring(QQ_I(QQ(3, 2), 0)))
        for doc in ([], {'trunc': -1, 'frames': {}},
                    {'frames': {'1 5': 'x1'}, 'trunc': 2},
                    {'frames': {'a': '1'}, 'trunc': 2},
                    {'trunc': 2}):
            with self.assertRaises((ParseError, DimensionError)):
                AlgebraElement.from_json(SHAPE, doc)

    def test_undeformed_mul(self):
        """undeformed_mul: Grassmann factors anticommute independently"""
        e1, e2 = mono(eset=(1,)), mono(eset=(2,))
        dx1 = mono(aset=(1,))
        self.assertEqual(undeformed_mul(e2, e1), -mono(eset=(1, 2)))
        self.assertEqual(undeformed_mul(e1, e2), mono(eset=(1, 2)))
        # No cross sign between frames and forms
        self.assertEqual(undeformed_mul(e1, dx1), undeformed_mul(dx1, e1))
        self.assertFalse(undeformed_mul(e1, e1))
        with self.assertRaises(DimensionError):
            undeformed_mul(e1, AlgebraElement.monomial(Shape(2, 1)))

    def test_mixed_shapes_rejected(self):
        """Adding elements of different shapes is a DimensionError"""
        with self.assertRaises(DimensionError):
            mono() + AlgebraElement.monomial(Shape(4, 2))


class TestOperators(unittest.TestCase):
    """Tests for the linear operators on the algebra"""

    def setUp(self):
        """Draw a fixed pool of random elements"""
        rng = Random(1234)
        self.samples = [random_element(SHAPE, rng, 6, max_s=3)
                        for _ in range(5)]

    def test_delta_squares_to_zero(self):
        """delta and delta* are both nilpotent"""
        for F in self.samples:
            self.assertFalse(delta(delta(F)))
            self.assertFalse(delta_star(delta_star(F)))

    def test_hodge_decomposition(self):
        """delta delta^-1 + delta^-1 delta + sigma0 = id"""
        for F in self.samples:
            self.assertEqual(delta(delta_inv(F)) + delta_inv(delta(F)) +
                             sigma0(F), F)

    def test_delta_on_monomial(self):
        """delta moves symmetric indices into the form factor"""
        F = mono(mu=(2, 1), trunc=5)
        self.assertEqual(delta(F), mono(2, mu=(1, 1), aset=(1,), trunc=4) +
                         mono(mu=(2, 0), aset=(2,), trunc=4))

    def test_insertions(self):
        """i_s lowers mu, i(e) and i_a remove from the front"""
        F = mono(mu=(0, 3), eset=(1, 2), aset=(1, 2), trunc=8)
        self.assertEqual(ins_sym(F, 2), mono(3, mu=(0, 2), eset=(1, 2),
                                             aset=(1, 2), trunc=7))
        self.assertEqual(ins_frame(F, 2), mono(-1, mu=(0, 3), eset=(1,),
                                               aset=(1, 2), trunc=7))
        # j(e_A) = P_E i(e_A) with one frame left
        self.assertEqual(ins_frame_j(F, 2), -ins_frame(F, 2))
        self.assertEqual(ins_form(F, 1), mono(mu=(0, 3), eset=(1, 2),
                                              aset=(2,), trunc=8))
        with self.assertRaises(DimensionError):
            ins_sym(F, 3)
        with self.assertRaises(DimensionError):
            ins_frame(F, 0)

    def test_degree_maps(self):
        """degree_map scales by eigenvalues; Deg is their weighted sum"""
        F = self.samples[0]
        self.assertEqual(degree_map(F, 'Deg'),
                         degree_map(F, 's') + degree_map(F, 'E') +
                         degree_map(F, 'lambda').scale(2))
        with self.assertRaises(ValueError):
            degree_map(F, 'x')

    def test_parities_and_conj(self):
        """P_E, P_lambda and conj are involutions"""
        for F in self.samples:
            self.assertEqual(parity(parity(F, 'E'), 'E'), F)
            self.assertEqual(parity(parity(F, 'lambda'), 'lambda'), F)
            self.assertEqual(conj(conj(F)), F)
        x1 = poly_ring(2).gens[0]
        self.assertEqual(conj(mono(x1 * I_UNIT)), mono(-x1 * I_UNIT))

    def test_kernel_projection(self):
        """kernel_projection is sigma0: it keeps the C-type terms"""
        F = mono(eset=(1,)) + mono(mu=(1, 0)) + mono(aset=(2,)) + mono(t=1)
        self.assertEqual(kernel_projection(F), mono(eset=(1,)) + mono(t=1))
        self.assertIs(kernel_projection, sigma0)

# vim: set sw=4 sts=4 expandtab :
