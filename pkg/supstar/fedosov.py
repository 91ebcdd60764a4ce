"""The Fedosov construction on one chart

:func:`build_r` solves for the 1-form ``r`` making
``D = -delta + nabla + (i/lambda) ad(r)`` square to zero, :func:`taylor`
lifts a section of ``C`` to its D-flat Fedosov-Taylor series and
:func:`star` multiplies two such lifts with ``o`` and projects back.

Truncation: the lambda-order ``T``, E-degree ``D`` coefficient of ``phi * psi``
only sees Taylor components of total degrees ``a + b = 2T + D``, so
computing every lift up to ``K = 2T + n`` is exact through order ``T``.
:func:`star` refuses anything shallower.
"""

__author__ = "Stephan Sokolow (deitarion/SSokolow)"
__license__ = "GNU GPL 2.0 or later"

# pylint: disable=unsubscriptable-object,wrong-import-order

import logging
from math import factorial

from sympy.polys.domains import QQ, QQ_I

from .fibrewise import (ad_over_ilambda, circ, fibre_product,
                        pairing_factor, supercomm)
from .geometry import (Check, ChartGeometry, curvature, nabla, validate)
from .scalars import I_UNIT, is_zero, poly_partial
from .superalgebra import (AlgebraElement, conj, delta, delta_inv,
                           merge_sign, parity, sigma)
from .util import GeometryError, TruncationError

# -- Type-Annotation Imports --
from typing import Dict, List, Optional, Sequence, Tuple

from .geometry import CurvatureData
from .scalars import GaussPoly
from .superalgebra import TermKey
# --

log = logging.getLogger(__name__)


class FedosovState:
    """The solved Fedosov connection of one geometry, exact through total
    degree ``K``.

    :param geom: The validated chart data.
    :param curv: Its curvature elements.
    :param K: Truncation order of every stored part.
    :param r_parts: ``{degree: r^(degree)}`` for degrees 3 to ``K``.
    """

    def __init__(self, geom: ChartGeometry, curv: CurvatureData, K: int,
                 r_parts: Dict[int, AlgebraElement]):
        self.geom, self.curv, self.K = geom, curv, K
        self.r_parts = r_parts
        self.r = AlgebraElement.zero(geom.shape, K)
        for part in r_parts.values():
            self.r = self.r + part

    def __repr__(self) -> str:
        return "FedosovState(%r, K=%d, %d r terms)" % (
            self.geom.name, self.K, len(self.r.terms))

    def part(self, degree: int) -> AlgebraElement:
        """``r^(degree)``, zero where nothing was stored"""
        return self.r_parts.get(degree,
                                AlgebraElement.zero(self.geom.shape, self.K))


def build_r(geom: ChartGeometry, K: int) -> FedosovState:
    """Run the recursion

        r^(3)   = delta^-1 R
        r^(k+3) = delta^-1 (nabla r^(k+2)
                            + (i/lambda) sum_{l=1}^{k-1} r^(l+2) o r^(k-l+2))

    :raises GeometryError: ``geom`` fails :func:`supstar.geometry.validate`.
    :raises TruncationError: ``K < 2``.
    :raises LambdaDivisionError: The quadratic term kept a lambda-free part.
    """
    if K < 2:
        raise TruncationError("The Fedosov recursion needs K >= 2, got %d"
                              % K)
    report = validate(geom)
    if not report.ok:
        raise GeometryError("Geometry %r is invalid: %s" % (
            geom.name, ', '.join('%s %s' % (c.name, c.detail)
                                 for c in report.failures())))

    curv = curvature(geom, trunc=K)
    parts: Dict[int, AlgebraElement] = {}
    if K >= 3:
        parts[3] = delta_inv(curv.Rtotal).with_trunc(K)
    for k in range(1, K - 2):
        acc = nabla(geom, parts[k + 2])
        quad = AlgebraElement.zero(geom.shape, K + 2)
        for l in range(1, k):
            quad = quad + circ(geom, parts[l + 2], parts[k - l + 2], K + 2)
        if quad:
            acc = acc + quad.divide_lambda().scale(I_UNIT)
        parts[k + 3] = delta_inv(acc).with_trunc(K)
        log.debug("r^(%d): %d terms", k + 3, len(parts[k + 3].terms))
    return FedosovState(geom, curv, K, parts)


def r_invariants(st: FedosovState) -> List[Check]:
    """Re-check what :func:`build_r` guarantees.

    The realness row only applies to real chart data, so it is reported,
    never raised.
    """
    g, r = st.geom, st.r
    fedosov_curv = (st.curv.Rtotal.with_trunc(st.K - 1) - delta(r)
                    + nabla(g, r)
                    + circ(g, r, r, st.K + 1).divide_lambda().scale(I_UNIT))
    shape_ok = all(len(key[3]) == 1 and not len(key[2]) % 2
                   for key in r.terms)
    return [
        Check('delta^-1 r = 0', not delta_inv(r)),
        Check('Fedosov curvature vanishes', not fedosov_curv,
              '' if not fedosov_curv else
              '%d residual terms' % len(fedosov_curv.terms)),
        Check('r is an even 1-form', shape_ok),
        Check('r is even in lambda', parity(r, 'lambda') == r),
        Check('r is real', conj(r) == r),
    ]


def apply_D(st: FedosovState, w: AlgebraElement) -> AlgebraElement:
    """``Dw = -delta w + nabla w + (i/lambda) [r, w]``, exact one degree
    below ``w``'s truncation.

    :raises TruncationError: ``w`` is deeper than the stored ``r``.
    """
    if w.trunc > st.K:
        raise TruncationError("Element truncated at %d but r only holds "
                              "degree %d" % (w.trunc, st.K))
    g = st.geom
    return (nabla(g, w) - delta(w)
            + ad_over_ilambda(g, st.r, w, trunc=w.trunc - 1))


def _require_c_type(*elements: AlgebraElement):
    for elem in elements:
        if any(any(key[1]) or key[3] for key in elem.terms):
            raise ValueError("Expected a section of C (no symmetric or form "
                             "indices)")


def taylor(st: FedosovState, phi: AlgebraElement, K: Optional[int] = None
           ) -> AlgebraElement:
    """The Fedosov-Taylor series ``tau(phi)``, exact through
    ``min(K, phi.trunc)``.

    :raises ValueError: ``phi`` is not C-valued.
    :raises TruncationError: The requested degree exceeds ``st.K``.
    """
    _require_c_type(phi)
    limit = phi.trunc if K is None else min(K, phi.trunc)
    if limit > st.K:
        raise TruncationError("Taylor series to degree %d needs r to degree "
                              "%d, have %d" % (limit, limit, st.K))
    g = st.geom
    comps = [phi.part(0).with_trunc(limit)]
    for k in range(limit):
        acc = nabla(g, comps[k])
        for l in range(1, k):
            comm = supercomm(g, st.part(l + 2), comps[k - l], limit + 2)
            acc = acc + comm.divide_lambda().scale(I_UNIT)
        comps.append((delta_inv(acc) + phi.part(k + 1)).with_trunc(limit))

    result = AlgebraElement.zero(phi.shape, limit)
    for comp in comps:
        result = result + comp
    return result


def star(st: FedosovState, phi: AlgebraElement, psi: AlgebraElement,
         T: int, K: Optional[int] = None) -> AlgebraElement:
    """``phi * psi = sigma(tau(phi) o tau(psi))`` through lambda-order ``T``.

    Inputs are treated as exact and lifted to truncation ``K``.

    :param K: Working truncation, at least ``2T + n`` (the default).
    :raises TruncationError: ``K`` is below ``2T + n`` or above ``st.K``.
    """
    need = 2 * T + st.geom.rank
    K = need if K is None else K
    if K < need:
        raise TruncationError("lambda-order %d at rank %d needs K >= %d, "
                              "got %d" % (T, st.geom.rank, need, K))
    if K > st.K:
        raise TruncationError("K=%d exceeds the Fedosov state (K=%d); "
                              "rebuild r deeper" % (K, st.K))
    _require_c_type(phi, psi)
    tau_phi = taylor(st, phi.with_trunc(K), K)
    tau_psi = taylor(st, psi.with_trunc(K), K)
    return sigma(circ(st.geom, tau_phi, tau_psi, K),
                 c_valued=True).lambda_truncate(T)


def extract_Mt(series: AlgebraElement, T: Optional[int] = None
               ) -> List[AlgebraElement]:
    """Split ``phi * psi = sum_t (i lambda / 2)^t M_t`` into its ``M_t``"""
    if T is None:
        T = max((key[0] for key in series.terms), default=0)
    return [series.lambda_coefficient(t).scale(QQ_I(0, -2) ** t)
            for t in range(T + 1)]


def flat_section_check(st: FedosovState, phi: AlgebraElement,
                       psi: AlgebraElement, K: Optional[int] = None
                       ) -> List[Check]:
    """Confirm that Taylor series are exactly the D-flat sections and that
    they form a ``o``-subalgebra, at the exact degrees."""
    K = min(phi.trunc, psi.trunc, st.K) if K is None else K
    g = st.geom
    tau_phi, tau_psi = taylor(st, phi, K), taylor(st, psi, K)
    product = circ(g, tau_phi, tau_psi, K)
    return [
        Check('sigma(tau(phi)) = phi', sigma(tau_phi, c_valued=True)
              == phi.with_trunc(K)),
        Check('D tau(phi) = 0', not apply_D(st, tau_phi)),
        Check('tau(sigma(tau(phi))) = tau(phi)',
              taylor(st, sigma(tau_phi, c_valued=True), K) == tau_phi),
        Check('D(tau(phi) o tau(psi)) = 0', not apply_D(st, product)),
    ]


def locality_probe(st: FedosovState, phi: AlgebraElement,
                   psi: AlgebraElement, t: int,
                   point: Sequence[int]) -> Check:
    """Perturb ``phi`` by a polynomial vanishing to order ``2t + n + 1`` at
    ``point`` and confirm that ``M_t`` does not change there."""
    g = st.geom
    R = g.ring
    order = 2 * t + g.rank + 1
    at = [QQ_I(QQ(x), 0) for x in point]
    bump = (R.gens[0] - R(at[0])) ** order * (R.one + sum(R.gens, R.zero))
    perturbed = (phi + AlgebraElement.function(g.shape, bump, phi.trunc)
                 + phi.scale(bump))

    base = extract_Mt(star(st, phi, psi, t), t)[t]
    moved = extract_Mt(star(st, perturbed, psi, t), t)[t]
    diff = moved - base
    for key, coeff in diff:
        if not is_zero(coeff(*at)):
            return Check('locality of M_%d' % t, False,
                         "frame %r changed at %r" % (key[2], tuple(point)))
    return Check('locality of M_%d' % t, True)


class BaseStar:
    """A star product on functions, the ``*_F`` slot of :func:`flat_star`"""

    def product(self, f: GaussPoly, h: GaussPoly, order: int
                ) -> List[GaussPoly]:
        """Coefficients of ``lambda^0 .. lambda^order`` in ``f * h``"""
        raise NotImplementedError


class MoyalStar(BaseStar):
    """The Moyal-Weyl product of a constant Poisson tensor:

        f * h = sum_k (i lambda / 2)^k / k!
                    Lambda^{i1 j1} .. Lambda^{ik jk} d_I f d_J h

    :raises GeometryError: ``lam`` is not constant.
    """

    def __init__(self, geom: ChartGeometry):
        if not all(c.is_ground for row in geom.lam for c in row):
            raise GeometryError("The Moyal product needs a constant Poisson "
                                "tensor")
        self.dim = geom.dim
        self.pairs = [(i, j, geom.lam[i][j].LC)
                      for i in range(geom.dim) for j in range(geom.dim)
                      if geom.lam[i][j]]
        self._levels: List[Dict[Tuple[tuple, tuple], object]] = [
            {((0,) * geom.dim, (0,) * geom.dim): QQ_I.one}]

    def _level(self, k: int):
        """Derivative multi-index pairs reached by ``k`` pairings"""
        while len(self._levels) <= k:
            nxt: Dict[Tuple[tuple, tuple], object] = {}
            for (a, b), weight in self._levels[-1].items():
                for i, j, lam in self.pairs:
                    na = a[:i] + (a[i] + 1,) + a[i + 1:]
                    nb = b[:j] + (b[j] + 1,) + b[j + 1:]
                    step = weight * lam
                    nxt[(na, nb)] = nxt[(na, nb)] + step if (
                        na, nb) in nxt else step
            self._levels.append({key: w for key, w in nxt.items()
                                 if not is_zero(w)})
        return self._levels[k]

    @staticmethod
    def _derive(f: GaussPoly, multi: tuple) -> GaussPoly:
        for idx, count in enumerate(multi):
            for _ in range(count):
                f = poly_partial(f, idx + 1)
        return f

    def product(self, f: GaussPoly, h: GaussPoly, order: int
                ) -> List[GaussPoly]:
        R = f.ring
        out = []
        for k in range(order + 1):
            acc = R.zero
            for (a, b), weight in self._level(k).items():
                df = self._derive(f, a)
                if not df:
                    continue
                acc += (df * self._derive(h, b)).mul_ground(weight)
            factor = QQ_I(0, QQ(1, 2)) ** k * QQ_I(QQ(1, factorial(k)), 0)
            out.append(acc.mul_ground(factor))
        return out


class FedosovBaseStar(BaseStar):
    """The Fedosov star product of the base manifold: ``geom`` with the
    bundle dropped"""

    def __init__(self, geom: ChartGeometry):
        self.geom = geom.replace(rank=0, aconn=[], q=[], qinv=[],
                                 name='%s (base)' % geom.name)
        self._state: Optional[FedosovState] = None

    def state(self, K: int) -> FedosovState:
        """A Fedosov state of the base at least ``K`` deep"""
        if self._state is None or self._state.K < K:
            self._state = build_r(self.geom, K)
        return self._state

    def product(self, f: GaussPoly, h: GaussPoly, order: int
                ) -> List[GaussPoly]:
        K = max(2, 2 * order)
        shape = self.geom.shape
        result = star(self.state(K), AlgebraElement.function(shape, f, K),
                      AlgebraElement.function(shape, h, K), order, K)
        zero_key: TermKey = (0, (0,) * shape.dim, (), ())
        return [result.terms.get((t,) + zero_key[1:], f.ring.zero)
                for t in range(order + 1)]


def flat_star(geom: ChartGeometry, phi: AlgebraElement, psi: AlgebraElement,
              T: int, base_star: Optional[BaseStar] = None
              ) -> AlgebraElement:
    """The factorized product for a flat bundle with constant metric:

        (f e^S) * (h e^S') = (f *_F h) (e^S *_Cl e^S')

    :param base_star: The ``*_F`` on functions (default: the Fedosov star
        of the base).
    :raises GeometryError: ``aconn`` is nonzero or ``q`` not constant.
    """
    if not geom.is_flat_bundle():
        raise GeometryError("flat_star needs a flat E connection")
    if not geom.has_constant_metric():
        raise GeometryError("flat_star needs a constant fibre metric")
    _require_c_type(phi, psi)
    base_star = base_star or FedosovBaseStar(geom)
    frames = fibre_product(geom)
    K = 2 * T + geom.rank

    out: Dict[TermKey, GaussPoly] = {}
    zero_mu = (0,) * geom.dim
    for (t1, _, s1, _), f in phi.terms.items():
        for (t2, _, s2, _), h in psi.terms.items():
            if t1 + t2 > T:
                continue
            base = base_star.product(f, h, T - t1 - t2)
            for l, n1, n2, w in frames.frame_pairings(s1, s2):
                sign, eset = merge_sign(n1, n2)
                if not sign:
                    continue
                weight = w.mul_ground(pairing_factor(0, l) * sign)
                for p, coeff in enumerate(base):
                    t = t1 + t2 + l + p
                    if t > T or not coeff:
                        continue
                    key = (t, zero_mu, eset, ())
                    term = coeff * weight
                    out[key] = out[key] + term if key in out else term
    return AlgebraElement(geom.shape, out, K)

# vim: set sw=4 sts=4 expandtab :
