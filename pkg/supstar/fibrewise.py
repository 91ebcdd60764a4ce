"""The fibrewise deformed product and the brackets built on it

``F o G`` is evaluated as the double sum over ``k`` symmetric pairings
(weighted by ``Lambda^{ij}``, inserting ``i_s`` on both sides) and ``l``
Clifford pairings (weighted by ``q^{AB}``, ``j`` on the left and ``i`` on the
right) with the factor ``(i lambda / 2)^(k+l) / (k! l!)``, followed by the
undeformed product. Insertion chains only depend on the symmetric and E
parts of the two terms, so they are tabulated once per geometry and reused.

Every pairing trades two symmetric or E degrees for one power of lambda,
so each contribution to ``F o G`` has total degree ``Deg F + Deg G`` and
truncating at ``K`` is exact whenever the inputs are.
"""

__author__ = "Stephan Sokolow (deitarion/SSokolow)"
__license__ = "GNU GPL 2.0 or later"

# pylint: disable=unsubscriptable-object,wrong-import-order

import logging
from functools import lru_cache
from math import factorial

from sympy.polys.domains import QQ, QQ_I

from .scalars import I_UNIT
from .superalgebra import (AlgebraElement, key_degree, mul_keys,
                           remove_front)
from .util import DimensionError

# -- Type-Annotation Imports --
from typing import Dict, List, Optional, Tuple

from .geometry import ChartGeometry
from .scalars import GaussPoly, GaussRational
from .superalgebra import IndexSet, TermKey

#: ``(pairings, left remainder, right remainder, weight)``
Pairing = Tuple[int, tuple, tuple, GaussPoly]
# --

log = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def pairing_factor(k: int, l: int) -> GaussRational:
    """``(i/2)^(k+l) / (k! l!)``; the lambda power is tracked separately"""
    base = QQ_I(0, QQ(1, 2)) ** (k + l)
    return base * QQ_I(QQ(1, factorial(k) * factorial(l)), 0)


class FibreProduct:
    """Evaluator of ``o`` for one geometry, with memoized pairing tables.

    :param geom: The chart whose ``lam`` and ``qinv`` weight the pairings.
    """

    def __init__(self, geom: ChartGeometry):
        self.geom = geom
        self.ring = geom.ring
        self._sym_pairs = [(i, j, geom.lam[i][j])
                           for i in range(geom.dim) for j in range(geom.dim)
                           if geom.lam[i][j]]
        self._frame_pairs = [(a, b, geom.qinv[a][b])
                             for a in range(geom.rank)
                             for b in range(geom.rank) if geom.qinv[a][b]]
        self._sym_cache: Dict[Tuple[tuple, tuple], List[Pairing]] = {}
        self._frame_cache: Dict[Tuple[IndexSet, IndexSet],
                                List[Pairing]] = {}

    def symmetric_pairings(self, mu1: Tuple[int, ...], mu2: Tuple[int, ...]
                           ) -> List[Pairing]:
        """All results of applying ``k`` symmetric pairings, every ``k``"""
        cache_key = (mu1, mu2)
        if cache_key in self._sym_cache:
            return self._sym_cache[cache_key]

        result: List[Pairing] = [(0, mu1, mu2, self.ring.one)]
        level = {(mu1, mu2): self.ring.one}
        k = 0
        while level:
            k += 1
            nxt: Dict[Tuple[tuple, tuple], GaussPoly] = {}
            for (m1, m2), weight in level.items():
                for i, j, lam in self._sym_pairs:
                    if not (m1[i] and m2[j]):
                        continue
                    n1 = m1[:i] + (m1[i] - 1,) + m1[i + 1:]
                    n2 = m2[:j] + (m2[j] - 1,) + m2[j + 1:]
                    step = weight * lam * (m1[i] * m2[j])
                    nxt[(n1, n2)] = nxt[(n1, n2)] + step if (
                        n1, n2) in nxt else step
            level = {key: w for key, w in nxt.items() if w}
            result.extend((k, n1, n2, w) for (n1, n2), w in level.items())

        self._sym_cache[cache_key] = result
        return result

    def frame_pairings(self, eset1: IndexSet, eset2: IndexSet
                       ) -> List[Pairing]:
        """All results of applying ``l`` Clifford pairings, every ``l``"""
        cache_key = (eset1, eset2)
        if cache_key in self._frame_cache:
            return self._frame_cache[cache_key]

        result: List[Pairing] = [(0, eset1, eset2, self.ring.one)]
        level = {(eset1, eset2): self.ring.one}
        l = 0
        while level:
            l += 1
            nxt: Dict[Tuple[IndexSet, IndexSet], GaussPoly] = {}
            for (s1, s2), weight in level.items():
                for a, b, qab in self._frame_pairs:
                    left_sign, n1 = remove_front(a + 1, s1)
                    if not left_sign:
                        continue
                    right_sign, n2 = remove_front(b + 1, s2)
                    if not right_sign:
                        continue
                    # j = P_E i on the left factor
                    sign = left_sign * right_sign * (-1 if len(n1) % 2
                                                     else 1)
                    step = weight * qab * sign
                    nxt[(n1, n2)] = nxt[(n1, n2)] + step if (
                        n1, n2) in nxt else step
            level = {key: w for key, w in nxt.items() if w}
            result.extend((l, n1, n2, w) for (n1, n2), w in level.items())

        self._frame_cache[cache_key] = result
        return result

    def product(self, F: AlgebraElement, G: AlgebraElement, trunc: int,
                symmetric: bool = True) -> AlgebraElement:
        """``F o G`` truncated at ``trunc``.

        :param symmetric: Set to :any:`False` to skip the symmetric pairings
            (the formal Clifford product).
        """
        right = sorted(((key_degree(k), k, c) for k, c in G.terms.items()),
                       key=lambda x: x[0])
        out: Dict[TermKey, GaussPoly] = {}
        for k1, c1 in F.terms.items():
            room = trunc - key_degree(k1)
            for deg2, k2, c2 in right:
                if deg2 > room:
                    break
                coeff = c1 * c2
                sym = (self.symmetric_pairings(k1[1], k2[1]) if symmetric
                       else [(0, k1[1], k2[1], self.ring.one)])
                for k, m1, m2, w_sym in sym:
                    for l, s1, s2, w_frame in self.frame_pairings(k1[2],
                                                                  k2[2]):
                        sign, key = mul_keys((k1[0], m1, s1, k1[3]),
                                             (k2[0], m2, s2, k2[3]))
                        if not sign:
                            continue
                        key = (key[0] + k + l,) + key[1:]
                        term = (coeff * w_sym * w_frame).mul_ground(
                            pairing_factor(k, l) * sign)
                        out[key] = out[key] + term if key in out else term
        return AlgebraElement(F.shape, out, trunc)


@lru_cache(maxsize=32)
def fibre_product(geom: ChartGeometry) -> FibreProduct:
    """The shared :class:`FibreProduct` for ``geom``"""
    return FibreProduct(geom)


def _check_shapes(geom: ChartGeometry, *elements: AlgebraElement):
    for elem in elements:
        if elem.shape != geom.shape:
            raise DimensionError("Element of shape %r used with geometry of "
                                 "shape %r" % (elem.shape, geom.shape))


def circ(geom: ChartGeometry, F: AlgebraElement, G: AlgebraElement,
         trunc: Optional[int] = None) -> AlgebraElement:
    """The fibrewise deformed product ``F o G``.

    :param trunc: Truncation of the result; defaults to the smaller input
        truncation. A larger value is only meaningful when the inputs are
        known to be exact beyond their own truncation (homogeneous parts).
    :raises DimensionError: Shapes don't match the geometry.
    """
    _check_shapes(geom, F, G)
    limit = min(F.trunc, G.trunc) if trunc is None else trunc
    return fibre_product(geom).product(F, G, limit)


def supercomm(geom: ChartGeometry, F: AlgebraElement, G: AlgebraElement,
              trunc: Optional[int] = None) -> AlgebraElement:
    """``[F, G] = F o G - (-1)^(d1 d2 + a1 a2) G o F``, evaluated on the
    homogeneous components of both arguments."""
    _check_shapes(geom, F, G)
    limit = min(F.trunc, G.trunc) if trunc is None else trunc
    result = AlgebraElement.zero(F.shape, limit)
    for (d1, a1), f_part in F.homogeneous_parts().items():
        for (d2, a2), g_part in G.homogeneous_parts().items():
            forward = circ(geom, f_part, g_part, limit)
            backward = circ(geom, g_part, f_part, limit)
            if (d1 * d2 + a1 * a2) % 2:
                result = result + forward + backward
            else:
                result = result + forward - backward
    return result.with_trunc(limit)


def ad_over_ilambda(geom: ChartGeometry, F: AlgebraElement,
                    G: AlgebraElement, trunc: Optional[int] = None
                    ) -> AlgebraElement:
    """``(i/lambda) [F, G]``.

    The undeformed product is supercommutative, so ``[F, G]`` has no
    lambda-free part and total-degree-0 components of either side are
    central. Inputs exact at ``K`` therefore give a result exact at
    ``K - 1``, the default truncation.

    :raises LambdaDivisionError: ``[F, G]`` has a lambda-free term, which
        means the supercommutator signs are broken upstream.
    """
    limit = min(F.trunc, G.trunc) - 1 if trunc is None else trunc
    comm = supercomm(geom, F, G, limit + 2)
    return comm.divide_lambda().scale(I_UNIT)


def clifford_mul(geom: ChartGeometry, phi: AlgebraElement,
                 psi: AlgebraElement, trunc: Optional[int] = None
                 ) -> AlgebraElement:
    """The formal Clifford product on elements with no symmetric or form
    indices: only the ``q``-pairings of ``o`` act.

    :raises ValueError: An input has symmetric or form indices.
    """
    _check_shapes(geom, phi, psi)
    for elem in (phi, psi):
        if any(any(key[1]) or key[3] for key in elem.terms):
            raise ValueError("clifford_mul takes elements of pure E-type")
    limit = min(phi.trunc, psi.trunc) if trunc is None else trunc
    return fibre_product(geom).product(phi, psi, limit, symmetric=False)

# vim: set sw=4 sts=4 expandtab :
