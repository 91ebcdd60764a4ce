#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""supstar
Exact Fedosov-type deformation quantization of super-Poisson brackets on a
coordinate chart, with quantum and classical BRST constructions.

:newfield appname: Application Name
"""

__author__ = "Stephan Sokolow (deitarion/SSokolow)"
__appname__ = "supstar"
__license__ = "GNU GPL 2.0 or later"

# vim: set sw=4 sts=4 expandtab :
