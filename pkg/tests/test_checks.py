# -*- coding: utf-8 -*-
"""Tests for ``supstar.checks`` module"""

__author__ = "Stephan Sokolow (deitarion/SSokolow)"
__license__ = "GNU GPL 2.0 or later"

import unittest
from random import Random
from typing import List

from supstar import charts
from supstar.checks import (SYMMETRY_ORDER, CheckOutcome, SuiteRegistry,
    fedosov_context, suites)
from supstar.util import GeometryError


class TestSuiteRegistry(unittest.TestCase):
    """Tests for the `SuiteRegistry` class"""

    def setUp(self):
        """Register a toy suite on a fresh registry"""
        self.registry = SuiteRegistry()
        self.seen = []

        @self.registry.context('toy')
        def _context(geom):
            return geom or 'default'

        @self.registry.add('toy', 'records')
        def _records(ctx, rng):
            self.seen.append((ctx, rng.randint(0, 10 ** 6)))

        @self.registry.add('toy', 'fails', once=True)
        def _fails(ctx, rng):
            return 'bad'

        @self.registry.add('toy', 'raises')
        def _raises(ctx, rng):
            raise GeometryError('nope')

    def test_suite_names(self):
        """Iterating yields suites in registration order"""
        self.assertEqual(list(self.registry), ['toy'])
        self.assertEqual(list(suites),
                         ['scalars', 'algebra', 'geometry', 'fedosov',
                          'brst'])

    def test_outcomes(self):
        """Trials are counted and errors become failure details"""
        with self.assertLogs('supstar.checks', 'WARNING'):
            report = self.registry.run(['toy'], 3, 0)
        self.assertEqual(report.outcomes, [
            CheckOutcome('toy', 'records', 3, 3),
            CheckOutcome('toy', 'fails', 0, 1, 'bad'),
            CheckOutcome('toy', 'raises', 0, 3, 'GeometryError: nope')])
        self.assertFalse(report.ok)
        self.assertEqual([ctx for ctx, _ in self.seen], ['default'] * 3)
        self.assertEqual(report.rows()[0], ('records', '3/3', 'PASS', 'toy'))
        self.assertIn('GeometryError: nope', str(report))

    def test_seeded(self):
        """Equal seeds draw equal samples, other seeds differ"""
        self.registry.run(['toy'], 2, 7)
        first, self.seen[:] = list(self.seen), []
        self.registry.run(['toy'], 2, 7)
        self.assertEqual(self.seen, first)
        self.seen[:] = []
        self.registry.run(['toy'], 2, 8)
        self.assertNotEqual(self.seen, first)

    def test_geometry_override(self):
        """A supplied geometry reaches the context factory"""
        self.registry.run(['toy'], 1, 0, geom='custom')
        self.assertEqual(self.seen[0][0], 'custom')

    def test_unknown_suite(self):
        """Unknown suite names raise KeyError"""
        with self.assertRaises(KeyError):
            self.registry.run(['nope'], 1, 0)

    def test_to_json(self):
        """The summary carries the seed, the verdict and every check"""
        summary = self.registry.run(['toy'], 1, 5).to_json()
        self.assertEqual(summary['seed'], 5)
        self.assertFalse(summary['ok'])
        self.assertEqual([x['name'] for x in summary['checks']],
                         ['records', 'fails', 'raises'])


def registered(suite: str, name: str):
    """The wrapped check registered as ``name`` in ``suite``"""
    return next(func for label, func, _ in suites.checks[suite]
                if label == name)


def names(suite: str) -> List[str]:
    """The identities registered in ``suite``, in order"""
    return [label for label, _, _ in suites.checks[suite]]


class TestBuiltinSuites(unittest.TestCase):
    """Tests for the registered property suites"""

    def test_scalars_suite(self):
        """Ring axioms, commuting partials and conj hold in dims 2 and 4"""
        report = suites.run(['scalars'], 3, 0)
        self.assertTrue(report.ok, [x for x in report.outcomes if not x.ok])
        self.assertEqual(names('scalars'), [
            'ring axioms', 'partial derivatives commute',
            'conj is an involutive ring homomorphism'])

    def test_scalars_user_dimension(self):
        """A user chart narrows the scalars suite to its dimension"""
        self.assertEqual(suites.contexts['scalars'](None), [2, 4])
        self.assertEqual(
            suites.contexts['scalars'](charts.metric_example()),
            [charts.metric_example().dim])

    def test_algebra_suite(self):
        """Every algebra identity holds and reruns reproduce the report"""
        report = suites.run(['algebra'], 1, 0)
        self.assertTrue(report.ok, [x for x in report.outcomes if not x.ok])
        self.assertEqual(report.to_json(),
                         suites.run(['algebra'], 1, 0).to_json())

    def test_algebra_identities(self):
        """The convention and undeformed-product laws are registered"""
        for name in ('delta delta* + delta* delta = deg_s + deg_a',
                     'the undeformed product is supercommutative',
                     'degree maps are derivations of the undeformed '
                     'product',
                     'P_E and P_lambda are automorphisms of the '
                     'undeformed product'):
            self.assertIn(name, names('algebra'))

    def test_algebra_charts(self):
        """The algebra suite covers a flat and a curved chart by default"""
        ctx = suites.contexts['algebra'](None)
        self.assertEqual([g.name for g in ctx.geoms],
                         ['darboux(1)', 'curved-plane'])
        ctx = suites.contexts['algebra'](charts.metric_example())
        self.assertEqual([g.name for g in ctx.geoms], ['metric-example'])

    def test_geometry_suite(self):
        """The geometry suite passes on a user-supplied chart"""
        report = suites.run(['geometry'], 1, 3, charts.metric_example())
        self.assertTrue(report.ok, [x for x in report.outcomes if not x.ok])

    def test_geometry_identities(self):
        """delta nabla + nabla delta = 0 and R's symmetries hold"""
        ctx = suites.contexts['geometry'](None)
        rng = Random(4)
        for name in ('delta nabla + nabla delta = 0',
                     'R is fixed by P_E, P_lambda and C'):
            self.assertIsNone(registered('geometry', name)(ctx, rng), name)

    def test_fedosov_identities(self):
        """tau linearity and M_t symmetry through t=4 on a flat chart"""
        plane = charts.darboux_plane()
        ctx = fedosov_context(plane, plane)
        self.assertEqual(SYMMETRY_ORDER, 4)
        self.assertEqual((ctx.deep_T, ctx.deep_state.K),
                         (4, 2 * 4 + plane.rank))
        rng = Random(0)
        for name in ('tau is C[[lambda]]-linear',
                     'M_t(psi, phi) = (-1)^t (-1)^(d1 d2) M_t(phi, psi)',
                     'C(phi * psi) = (-1)^(d1 d2) C(psi) * C(phi)'):
            self.assertIsNone(registered('fedosov', name)(ctx, rng), name)

# vim: set sw=4 sts=4 expandtab :
