# -*- coding: utf-8 -*-
"""Tests for ``supstar.fedosov`` module"""

__author__ = "Stephan Sokolow (deitarion/SSokolow)"
__license__ = "GNU GPL 2.0 or later"

import unittest
from random import Random

from sympy.polys.domains import QQ, QQ_I

from supstar import charts
from supstar.fedosov import (MoyalStar, apply_D, build_r, extract_Mt,
    flat_section_check, flat_star, locality_probe, r_invariants, star,
    taylor)
from supstar.geometry import ChartGeometry
from supstar.scalars import I_UNIT
from supstar.superalgebra import (AlgebraElement, random_element,
    random_frame_element, undeformed_mul)
from supstar.util import GeometryError, TruncationError


class TestRecursion(unittest.TestCase):
    """Tests for solving the Fedosov connection"""

    def test_flat_chart_has_zero_r(self):
        """A Darboux chart with a trivial bundle needs no correction"""
        st = build_r(charts.darboux_plane(), 5)
        self.assertFalse(st.r)
        self.assertTrue(all(c.passed for c in r_invariants(st)))

    def test_curved_invariants(self):
        """r on the curved preset passes every re-check"""
        st = build_r(charts.curved_plane(), 5)
        self.assertTrue(st.r)
        failed = [c.name for c in r_invariants(st) if not c.passed]
        self.assertEqual(failed, [])
        self.assertFalse(st.part(2))

    def test_rejects_bad_input(self):
        """Shallow truncations and invalid geometry raise"""
        with self.assertRaises(TruncationError):
            build_r(charts.darboux_plane(), 1)
        g = ChartGeometry.darboux(1)
        R = g.ring
        gamma = [[[R.zero] * 2 for _ in range(2)] for _ in range(2)]
        gamma[0][0][1] = R.one
        with self.assertRaises(GeometryError):
            build_r(g.replace(gamma=gamma), 4)


class TestFedosovStar(unittest.TestCase):
    """Tests for Taylor series and the star product on the curved preset"""

    @classmethod
    def setUpClass(cls):
        """Solve r once for every test in the class"""
        cls.st = build_r(charts.curved_plane(), 4)
        cls.deep = build_r(charts.curved_plane(), 8)
        cls.shape = cls.st.geom.shape

    def section(self, rng: Random, **kwargs) -> AlgebraElement:
        """A random section of C"""
        return random_frame_element(self.shape, rng, 4, **kwargs)

    def test_d_squared(self):
        """D^2 = 0 on random elements"""
        rng = Random(8)
        for _ in range(2):
            w = random_element(self.shape, rng, 4, nterms=3)
            self.assertFalse(apply_D(self.st, apply_D(self.st, w)))

    def test_flat_sections(self):
        """Taylor series are D-flat and closed under o"""
        rng = Random(11)
        checks = flat_section_check(self.st, self.section(rng),
                                    self.section(rng))
        self.assertEqual([c.name for c in checks if not c.passed], [])

    def test_taylor_rejects(self):
        """taylor refuses non-C input and depths beyond r"""
        with self.assertRaises(ValueError):
            taylor(self.st, AlgebraElement.monomial(self.shape, mu=(1, 0),
                                                    trunc=4))
        with self.assertRaises(TruncationError):
            taylor(self.st, AlgebraElement.monomial(self.shape, trunc=6))

    def test_star_truncation_guard(self):
        """star needs 2T + n <= K <= st.K"""
        phi = AlgebraElement.monomial(self.shape, eset=(1,), trunc=4)
        with self.assertRaises(TruncationError):
            star(self.st, phi, phi, 1, K=3)
        with self.assertRaises(TruncationError):
            star(self.st, phi, phi, 2)

    def test_truncation_is_sufficient(self):
        """Lifting deeper than 2T + n changes nothing through T=1 and T=2"""
        rng = Random(21)
        phi, psi = self.section(rng), self.section(rng)
        self.assertEqual(star(self.deep, phi, psi, 1),
                         star(self.deep, phi, psi, 1, K=6))
        self.assertEqual(star(self.deep, phi, psi, 2),
                         star(self.deep, phi, psi, 2, K=8))

    def test_m0_and_unit(self):
        """M_0 is the undeformed product and 1 is a two-sided unit"""
        rng = Random(4)
        phi, psi = self.section(rng), self.section(rng)
        M = extract_Mt(star(self.st, phi, psi, 1), 1)
        self.assertEqual(len(M), 2)
        self.assertEqual(M[0], undeformed_mul(phi, psi))
        one = AlgebraElement.function(self.shape, self.st.geom.ring.one, 4)
        self.assertEqual(star(self.st, one, phi, 1), phi)
        self.assertEqual(star(self.st, phi, one, 1), phi)

    def test_m1_antisymmetry(self):
        """M_1 of even sections is antisymmetric"""
        rng = Random(6)
        phi = self.section(rng, degrees=[0, 2])
        psi = self.section(rng, degrees=[0, 2])
        forward = extract_Mt(star(self.st, phi, psi, 1), 1)[1]
        backward = extract_Mt(star(self.st, psi, phi, 1), 1)[1]
        self.assertEqual(backward, -forward)

    def test_locality(self):
        """M_1 at a point only sees finite jets there"""
        rng = Random(13)
        check = locality_probe(self.st, self.section(rng),
                               self.section(rng), 1, (1, 0))
        self.assertTrue(check.passed, check.detail)


class TestMoyal(unittest.TestCase):
    """Tests for the flat-space special cases"""

    def test_canonical_commutator(self):
        """x * p - p * x = i lambda on the Darboux plane"""
        st = build_r(charts.darboux(1), 2)
        shape = st.geom.shape
        x, p = (AlgebraElement.function(shape, v, 2)
                for v in st.geom.ring.gens)
        self.assertEqual(star(st, x, p, 1) - star(st, p, x, 1),
                         AlgebraElement.monomial(shape, I_UNIT, t=1,
                                                 trunc=2))
        M = extract_Mt(star(st, x, p, 1), 1)
        self.assertEqual(M[1], AlgebraElement.monomial(shape, 1, trunc=0))

    def test_moyal_product(self):
        """MoyalStar: coefficients of lambda^0 and lambda^1"""
        g = charts.darboux(1)
        x, p = g.ring.gens
        self.assertEqual(MoyalStar(g).product(x, p, 1),
                         [x * p, g.ring(QQ_I(0, QQ(1, 2)))])
        with self.assertRaises(GeometryError):
            MoyalStar(charts.hess_example())

    def test_flat_factorization(self):
        """Flat bundle with constant metric: star = *_F (x) *_Cl"""
        geom = charts.curved_plane_flat_bundle()
        st = build_r(geom, 4)
        rng = Random(2)
        for _ in range(2):
            phi = random_frame_element(geom.shape, rng, 4)
            psi = random_frame_element(geom.shape, rng, 4)
            self.assertEqual(star(st, phi, psi, 1),
                             flat_star(geom, phi, psi, 1))

    def test_flat_star_rejects(self):
        """flat_star refuses curved bundles"""
        geom = charts.curved_plane()
        phi = AlgebraElement.monomial(geom.shape, trunc=4)
        with self.assertRaises(GeometryError):
            flat_star(geom, phi, phi, 1)

# vim: set sw=4 sts=4 expandtab :
