# -*- coding: utf-8 -*-
"""Tests for ``supstar.util`` module"""

__author__ = "Stephan Sokolow (deitarion/SSokolow)"
__license__ = "GNU GPL 2.0 or later"

import unittest

from supstar.util import (fmt_table, LambdaDivisionError,
    MomentumMapError, ParseError, SupstarError)


class TestHelpers(unittest.TestCase):
    """Tests for loose functions"""

    def test_fmt_table_sorts_dicts(self):
        """fmt_table: dict input comes out sorted by key"""
        table = fmt_table({'zeta': 1, 'alpha': 2}, ('Key', 'Value'))
        lines = table.split('\n')
        self.assertEqual(len(lines), 4)
        self.assertTrue(lines[2].strip().startswith('alpha'))
        self.assertTrue(lines[3].strip().startswith('zeta'))

    def test_fmt_table_grouping(self):
        """fmt_table: group_by pulls a column out into section headers"""
        table = fmt_table([('a', 'PASS', 'one'), ('b', 'FAIL', 'two')],
                          ('Check', 'Result', 'Suite'), group_by=2)
        self.assertIn('\none\n', table)
        self.assertIn('\ntwo\n', table)
        self.assertNotIn('Suite', table)


class TestErrors(unittest.TestCase):
    """Tests for the exception hierarchy"""

    def test_parse_error_location(self):
        """ParseError: str() appends the path and position when known"""
        err = ParseError("Bad value", 'spec.json', (4, 17))
        self.assertEqual(str(err),
                         "Bad value\n\t(in spec.json, line 4, column 17)")
        self.assertEqual(str(ParseError("Bad value")), "Bad value")
        self.assertEqual(str(ParseError("Bad value", '<inline>')),
                         "Bad value\n\t(in <inline>)")

    def test_hierarchy(self):
        """Library errors share a base and keep their payloads"""
        for cls in (ParseError, LambdaDivisionError, MomentumMapError):
            self.assertTrue(issubclass(cls, SupstarError))
        self.assertTrue(issubclass(ParseError, ValueError))
        self.assertEqual(MomentumMapError("defect", (1, 2)).pair, (1, 2))
        self.assertEqual(LambdaDivisionError("no lambda", 'key').term, 'key')

# vim: set sw=4 sts=4 expandtab :
