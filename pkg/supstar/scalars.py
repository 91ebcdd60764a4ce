"""Exact scalars: Gaussian rationals and polynomials over chart coordinates

Everything above this module works with sympy's sparse polynomial rings over
the Gaussian rationals ``QQ_I``. A chart of dimension ``dim`` gets the ring
``QQ_I[x1, ..., x{dim}]``, cached so that polynomials built in different
places compare and combine without coercion.
"""

__author__ = "Stephan Sokolow (deitarion/SSokolow)"
__license__ = "GNU GPL 2.0 or later"

# pylint: disable=wrong-import-order

import re
from functools import lru_cache

from sympy import Symbol, sympify
from sympy.core.sympify import SympifyError
from sympy.polys.domains import QQ, QQ_I
from sympy.polys.polyerrors import CoercionFailed
from sympy.polys.rings import PolyElement, PolyRing, ring

from .util import DimensionError, ParseError

# -- Type-Annotation Imports --
from typing import Any, Dict, List, Sequence, Tuple
from random import Random

#: A Gaussian rational ``re + i*im`` with both parts in ``QQ``
GaussRational = QQ_I.dtype
#: A polynomial in the chart coordinates with Gaussian-rational coefficients
GaussPoly = PolyElement
#: A monomial exponent vector
Exps = Tuple[int, ...]
# --

#: The imaginary unit
I_UNIT = QQ_I(0, 1)

_RATIONAL_RE = re.compile(r'^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$')


@lru_cache(maxsize=None)
def poly_ring(dim: int) -> PolyRing:
    """Return the (cached) coordinate ring for a chart of dimension ``dim``"""
    if dim < 1:
        raise DimensionError("Chart dimension must be positive: %r" % dim)
    return ring(','.join('x%d' % (i + 1) for i in range(dim)), QQ_I)[0]


def gauss(re_part: Any = 0, im_part: Any = 0) -> GaussRational:
    """Build a Gaussian rational from ints, ``QQ`` values or ``(p, q)``
    pairs.

    .. doctest::

        >>> gauss((1, 2), 3) == QQ_I(QQ(1, 2), QQ(3))
        True
    """
    def conv(val: Any):
        if isinstance(val, tuple):
            return QQ(*val)
        return QQ.convert(val)
    return QQ_I(conv(re_part), conv(im_part))


def is_zero(value: GaussRational) -> bool:
    """Exact zero test for a Gaussian rational"""
    return value == QQ_I.zero


def conj(value: GaussRational) -> GaussRational:
    """Complex conjugate of a Gaussian rational"""
    return QQ_I(value.x, -value.y)


def fmt_rational(value) -> str:
    """Render a ``QQ`` value as ``p/q`` (or ``p`` when ``q`` is 1).

    .. doctest::

        >>> fmt_rational(QQ(-3, 6)), fmt_rational(QQ(4))
        ('-1/2', '4')
    """
    num, den = QQ.numer(value), QQ.denom(value)
    if den == 1:
        return str(num)
    return '%s/%s' % (num, den)


def parse_rational(text: str):
    """Parse ``p/q`` (or a bare integer) into a ``QQ`` value.

    :raises ParseError: Malformed text or a zero denominator.

    .. doctest::

        >>> parse_rational('6/4') == QQ(3, 2)
        True
        >>> parse_rational('3/0')
        Traceback (most recent call last):
        ...
        supstar.util.ParseError: Zero denominator in rational: '3/0'
    """
    match = _RATIONAL_RE.match(str(text))
    if not match:
        raise ParseError("Malformed rational: %r" % text)
    num, den = int(match.group(1)), int(match.group(2) or 1)
    if den == 0:
        raise ParseError("Zero denominator in rational: %r" % text)
    return QQ(num, den)


def _check_same(a: GaussPoly, b: GaussPoly):
    if a.ring != b.ring:
        raise DimensionError("Polynomials live on charts of different "
                             "dimension: %d vs %d" % (a.ring.ngens,
                                                      b.ring.ngens))


def poly_arith(a: GaussPoly, b: GaussPoly, op: str) -> GaussPoly:
    """Exact ring operation ``op`` (one of ``add``, ``sub`` or ``mul``) on two
    polynomials of the same chart.

    :raises DimensionError: The polynomials belong to different charts.
    :raises ValueError: Unknown ``op``.
    """
    _check_same(a, b)
    if op == 'add':
        return a + b
    elif op == 'sub':
        return a - b
    elif op == 'mul':
        return a * b
    raise ValueError("Unknown polynomial operation: %r" % op)


def poly_partial(a: GaussPoly, i: int) -> GaussPoly:
    """Partial derivative with respect to coordinate ``i`` (1-based)

    :raises DimensionError: ``i`` is not a coordinate index of the chart.
    """
    if not 1 <= i <= a.ring.ngens:
        raise DimensionError("Coordinate index out of range: %r" % i)
    return a.diff(a.ring.gens[i - 1])


def poly_conj(a: GaussPoly) -> GaussPoly:
    """Apply complex conjugation to every coefficient"""
    return a.ring.from_dict({exps: conj(c) for exps, c in a.items()})


def poly_degree(a: GaussPoly) -> int:
    """Total degree, with -1 for the zero polynomial"""
    return max((sum(exps) for exps in a.keys()), default=-1)


def poly_from_expr(text: str, dim: int) -> GaussPoly:
    """Parse a sympy expression in ``x1 .. x{dim}`` (``I`` for the imaginary
    unit) into a polynomial.

    :raises ParseError: The text is not a polynomial in the chart coordinates.
    """
    R = poly_ring(dim)
    names = {str(sym): Symbol(str(sym)) for sym in R.symbols}
    try:
        expr = sympify(text, locals=names)
        return R.from_expr(expr)
    except (SympifyError, CoercionFailed, ValueError, TypeError,
            SyntaxError) as err:
        raise ParseError("Not a polynomial in x1..x%d: %r (%s)" % (
            dim, text, err)) from err


def poly_to_json(a: GaussPoly) -> List[Dict[str, Any]]:
    """Serialize to a list of ``{exps, re, im}`` dicts in a fixed order"""
    return [{'exps': list(exps),
             're': fmt_rational(c.x),
             'im': fmt_rational(c.y)} for exps, c in sorted(a.items())]


def poly_from_json(doc: Any, dim: int) -> GaussPoly:
    """Inverse of :func:`poly_to_json`. Also accepts a plain expression
    string (see :func:`poly_from_expr`) or a bare number.

    :raises ParseError: Malformed document or wrong exponent-vector length.
    """
    if isinstance(doc, str):
        return poly_from_expr(doc, dim)
    R = poly_ring(dim)
    if isinstance(doc, int):
        return R.ground_new(QQ_I(doc, 0))
    if not isinstance(doc, list):
        raise ParseError("Polynomial must be a list of terms: %r" % (doc,))

    terms: Dict[Exps, GaussRational] = {}
    for entry in doc:
        try:
            exps = tuple(int(x) for x in entry['exps'])
            coeff = QQ_I(parse_rational(entry.get('re', '0')),
                         parse_rational(entry.get('im', '0')))
        except (KeyError, TypeError, AttributeError) as err:
            raise ParseError("Malformed polynomial term: %r" % (entry,)
                             ) from err
        if len(exps) != dim:
            raise ParseError("Exponent vector %r does not match chart "
                             "dimension %d" % (list(exps), dim))
        terms[exps] = terms.get(exps, QQ_I.zero) + coeff
    return R.from_dict({k: v for k, v in terms.items() if not is_zero(v)})


def random_poly(dim: int, rng: Random, max_deg: int = 2, nterms: int = 3,
                complex_coeffs: bool = True) -> GaussPoly:
    """Draw a small random polynomial for property checks"""
    R = poly_ring(dim)
    result = R.zero
    for _ in range(nterms):
        exps = [0] * dim
        for _ in range(rng.randint(0, max_deg)):
            exps[rng.randrange(dim)] += 1
        im_part = rng.randint(-2, 2) if complex_coeffs else 0
        coeff = QQ_I(QQ(rng.randint(-3, 3), rng.randint(1, 3)),
                     QQ(im_part, rng.randint(1, 2)))
        if not is_zero(coeff):
            result += R.from_dict({tuple(exps): coeff})
    return result


def matrix_of_polys(doc: Any, dim: int, shape: Sequence[int]) -> Any:
    """Parse a nested list of polynomial documents of the given shape

    :raises ParseError: The nesting does not match ``shape``.
    """
    if not shape:
        return poly_from_json(doc, dim)
    if not isinstance(doc, list) or len(doc) != shape[0]:
        raise ParseError("Expected a list of length %d, got %r" % (
            shape[0], doc if not isinstance(doc, list) else len(doc)))
    return [matrix_of_polys(x, dim, shape[1:]) for x in doc]

# vim: set sw=4 sts=4 expandtab :
