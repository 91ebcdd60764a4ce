# -*- coding: utf-8 -*-
"""Tests for ``supstar.fibrewise`` module"""

__author__ = "Stephan Sokolow (deitarion/SSokolow)"
__license__ = "GNU GPL 2.0 or later"

import unittest
from random import Random

from sympy.polys.domains import QQ, QQ_I

from supstar import charts
from supstar.fibrewise import (ad_over_ilambda, circ, clifford_mul,
    pairing_factor, supercomm)
from supstar.geometry import ChartGeometry
from supstar.superalgebra import (AlgebraElement, random_element,
    undeformed_mul)
from supstar.util import DimensionError

HALF_I = QQ_I(0, QQ(1, 2))


class TestFibreProduct(unittest.TestCase):
    """Tests for the fibrewise deformed product"""

    def setUp(self):
        """Use the flat plane with a rank-2 bundle"""
        self.geom = charts.darboux_plane()
        self.shape = self.geom.shape

    def mono(self, *args, **kwargs) -> AlgebraElement:
        """A monomial on the test geometry"""
        return AlgebraElement.monomial(self.shape, *args, **kwargs)

    def test_pairing_factor(self):
        """pairing_factor: (i/2)^(k+l) / (k! l!)"""
        self.assertEqual(pairing_factor(0, 0), QQ_I(1, 0))
        self.assertEqual(pairing_factor(1, 0), HALF_I)
        self.assertEqual(pairing_factor(2, 1), QQ_I(0, QQ(-1, 16)))

    def test_canonical_commutator(self):
        """y^1 o y^2 - y^2 o y^1 = i lambda"""
        y1, y2 = self.mono(mu=(1, 0), trunc=4), self.mono(mu=(0, 1), trunc=4)
        self.assertEqual(circ(self.geom, y1, y2),
                         self.mono(mu=(1, 1), trunc=4) +
                         self.mono(HALF_I, t=1, trunc=4))
        self.assertEqual(supercomm(self.geom, y1, y2),
                         self.mono(QQ_I(0, 1), t=1, trunc=4))
        self.assertEqual(ad_over_ilambda(self.geom, y1, y2),
                         self.mono(-1, trunc=3))

    def test_clifford_relation(self):
        """e^A o e^B + e^B o e^A = i lambda q^AB"""
        e1, e2 = self.mono(eset=(1,), trunc=4), self.mono(eset=(2,), trunc=4)
        self.assertEqual(clifford_mul(self.geom, e1, e1),
                         self.mono(HALF_I, t=1, trunc=4))
        self.assertFalse(clifford_mul(self.geom, e1, e2) +
                         clifford_mul(self.geom, e2, e1))
        # Odd-odd: the supercommutator is the anticommutator
        self.assertEqual(supercomm(self.geom, e1, e1),
                         self.mono(QQ_I(0, 1), t=1, trunc=4))
        with self.assertRaises(ValueError):
            clifford_mul(self.geom, e1, self.mono(mu=(1, 0)))

    def test_lambda_zero_part(self):
        """Dropping lambda leaves the undeformed product"""
        rng = Random(5)
        for _ in range(3):
            F = random_element(self.shape, rng, 5, max_t=0)
            G = random_element(self.shape, rng, 5, max_t=0)
            product = circ(self.geom, F, G)
            self.assertEqual(product.lambda_truncate(0),
                             undeformed_mul(F, G))

    def test_associative(self):
        """o is associative on the curved preset"""
        geom = charts.curved_plane()
        rng = Random(17)
        for _ in range(2):
            F, G, H = (random_element(geom.shape, rng, 5, nterms=3)
                       for _ in range(3))
            self.assertEqual(circ(geom, circ(geom, F, G), H),
                             circ(geom, F, circ(geom, G, H)))

    def test_unit_is_central(self):
        """Functions of degree zero commute with everything"""
        rng = Random(3)
        one = AlgebraElement.function(self.shape, self.geom.ring.one, 5)
        F = random_element(self.shape, rng, 5)
        self.assertFalse(ad_over_ilambda(self.geom, one, F))

    def test_shape_mismatch(self):
        """Elements from another chart are rejected"""
        other = AlgebraElement.monomial(ChartGeometry.darboux(2).shape)
        with self.assertRaises(DimensionError):
            circ(self.geom, self.mono(), other)

# vim: set sw=4 sts=4 expandtab :
