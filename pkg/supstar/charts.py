"""Preset chart data for tests, the check suites and ``builtin:<name>``"""

__author__ = "Stephan Sokolow (deitarion/SSokolow)"
__license__ = "GNU GPL 2.0 or later"

# pylint: disable=unsubscriptable-object,wrong-import-order

from sympy.polys.domains import QQ, QQ_I
from sympy.polys.matrices import DomainMatrix

from .brst import ClassicalBRSTSetup, QuantumBRSTSetup, swap_coordinates
from .geometry import (ChartGeometry, hess_symplectrize,
                       make_metric_connection)
from .scalars import poly_ring
from .util import ParseError

# -- Type-Annotation Imports --
from typing import Any, Callable, Dict, List, Optional

from .geometry import Matrix
# --

#: ``builtin:<name>`` factories, filled in by :func:`preset`
PRESETS: Dict[str, Callable[[], Any]] = {}


def preset(func: Callable[[], Any]) -> Callable[[], Any]:
    """Register a zero-argument factory under its name with dashes"""
    PRESETS[func.__name__.replace('_', '-')] = func
    return func


def lookup(name: str) -> Any:
    """Build the preset called ``name``

    :raises ParseError: Unknown preset.
    """
    try:
        return PRESETS[name]()
    except KeyError as err:
        raise ParseError("Unknown preset %r (known: %s)" % (
            name, ', '.join(sorted(PRESETS)))) from err


def _invert_constant(q: Matrix) -> Matrix:
    R = q[0][0].ring
    size = len(q)
    inv = DomainMatrix([[entry.LC if entry else QQ_I.zero for entry in row]
                        for row in q], (size, size), QQ_I).inv().to_Matrix()
    return [[R(QQ_I.from_sympy(inv[i, j])) for j in range(size)]
            for i in range(size)]


def darboux(m: int, rank: int = 0, q: Optional[Matrix] = None
            ) -> ChartGeometry:
    """Flat ``R^2m`` with the trivial rank-``rank`` bundle and constant
    metric ``q`` (default: identity)"""
    qinv = _invert_constant(q) if q else None
    return ChartGeometry.darboux(m, rank, q, qinv)


@preset
def darboux_plane() -> ChartGeometry:
    """``R^2`` with the trivial rank-2 bundle"""
    return darboux(1, rank=2)


@preset
def curved_plane() -> ChartGeometry:
    """``R^2`` with ``Gamma^2_11 = -x2`` and the so(2) connection
    ``A^1_{2,2} = x1 + x1 x2 = -A^2_{2,1}`` on a rank-2 bundle"""
    R = poly_ring(2)
    x1, x2 = R.gens
    base = darboux(1, rank=2)
    gamma = [[[R.zero] * 2 for _ in range(2)] for _ in range(2)]
    gamma[1][0][0] = -x2
    aconn = [[[R.zero] * 2 for _ in range(2)] for _ in range(2)]
    aconn[0][1][1] = x1 + x1 * x2
    aconn[1][1][0] = -(x1 + x1 * x2)
    return base.replace(gamma=gamma, aconn=aconn, name='curved-plane')


@preset
def curved_plane_flat_bundle() -> ChartGeometry:
    """:func:`curved_plane` with the zero E connection"""
    return curved_plane().replace(aconn=None,
                                  name='curved-plane-flat-bundle')


@preset
def hess_example() -> ChartGeometry:
    """``R^4`` with ``omega = x1 dx1^dx2 + dx1^dx3 + dx2^dx4`` and the
    symplectic connection made from the flat one"""
    R = poly_ring(4)
    x1 = R.gens[0]
    omega = [[R.zero] * 4 for _ in range(4)]
    lam = [[R.zero] * 4 for _ in range(4)]
    for (i, j), value in {(0, 1): x1, (0, 2): R.one, (1, 3): R.one}.items():
        omega[i][j], omega[j][i] = value, -value
    for (i, j), value in {(0, 2): R.one, (1, 3): R.one,
                          (2, 3): -x1}.items():
        lam[i][j], lam[j][i] = value, -value
    flat = [[[R.zero] * 4 for _ in range(4)] for _ in range(4)]
    return ChartGeometry(4, 0, omega, lam,
                         gamma=hess_symplectrize(flat, omega, lam),
                         name='hess-example')


@preset
def metric_example() -> ChartGeometry:
    """``R^2`` with the rank-2 metric ``q = [[x1, 1], [1, 0]]`` and the
    metric connection made from the trivial one"""
    R = poly_ring(2)
    x1 = R.gens[0]
    q = [[x1, R.one], [R.one, R.zero]]
    qinv = [[R.zero, R.one], [R.one, -x1]]
    flat = [[[R.zero] * 2 for _ in range(2)] for _ in range(2)]
    return darboux(1, rank=2).replace(
        q=q, qinv=qinv, aconn=make_metric_connection(flat, q, qinv),
        name='metric-example')


def _zero_structure(size: int) -> List[List[List[Any]]]:
    return [[[QQ_I.zero] * size for _ in range(size)] for _ in range(size)]


@preset
def brst_quantum_abelian() -> QuantumBRSTSetup:
    """``g = R`` acting on ``R^2`` by translations, ``J = p``"""
    p = poly_ring(2).gens[1]
    return QuantumBRSTSetup(ChartGeometry.darboux(1), _zero_structure(1),
                            [[p]], name='brst-quantum-abelian')


@preset
def brst_quantum_so2() -> QuantumBRSTSetup:
    """Rotations of ``R^2``, ``J = (x^2 + p^2) / 2``"""
    x, p = poly_ring(2).gens
    half = QQ_I(QQ(1, 2), 0)
    return QuantumBRSTSetup(ChartGeometry.darboux(1), _zero_structure(1),
                            [[(x ** 2 + p ** 2).mul_ground(half)]],
                            name='brst-quantum-so2')


@preset
def brst_quantum_affine() -> QuantumBRSTSetup:
    """``aff(1)`` with ``[xi_1, xi_2] = xi_1`` on ``R^4``,
    ``J = (p1, -x1 p1)``"""
    x1, _, p1, _ = poly_ring(4).gens
    structure = _zero_structure(2)
    structure[0][0][1], structure[0][1][0] = QQ_I.one, -QQ_I.one
    return QuantumBRSTSetup(ChartGeometry.darboux(2), structure,
                            [[p1], [-x1 * p1]], name='brst-quantum-affine')


@preset
def brst_quantum_plane() -> QuantumBRSTSetup:
    """Translations of ``R^4`` in both positions, ``J = (p1, p2)``"""
    _, _, p1, p2 = poly_ring(4).gens
    return QuantumBRSTSetup(ChartGeometry.darboux(2), _zero_structure(2),
                            [[p1], [p2]], name='brst-quantum-plane')


@preset
def brst_classical_abelian() -> ClassicalBRSTSetup:
    """``J = (p1, p2)`` on ``R^4``"""
    swap = swap_coordinates(4)
    return ClassicalBRSTSetup(ChartGeometry.darboux(2), swap[:2], swap,
                              swap, name='brst-classical-abelian')


@preset
def brst_classical_single() -> ClassicalBRSTSetup:
    """``J = p1`` on ``R^4``"""
    swap = swap_coordinates(4)
    return ClassicalBRSTSetup(ChartGeometry.darboux(2), swap[:1], swap,
                              swap, name='brst-classical-single')


@preset
def brst_classical_affine() -> ClassicalBRSTSetup:
    """``J = (p1, p2 - x1 p1)`` on ``R^4``, so ``{J1, J2} = J1``"""
    x1, x2, p1, p2 = poly_ring(4).gens
    constraints = [p1, p2 - x1 * p1]
    forward = constraints + [x1, x2]
    # u = (p1, p2 - x1 p1, x1, x2)
    u1, u2, u3, u4 = x1, x2, p1, p2
    inverse = [u3, u4, u1, u2 + u3 * u1]
    return ClassicalBRSTSetup(ChartGeometry.darboux(2), constraints,
                              forward, inverse,
                              name='brst-classical-affine')

# vim: set sw=4 sts=4 expandtab :
