"""The Rothstein super-Poisson bracket, evaluated directly from the curvature

Sections of ``TM (x) Lambda_even E* (x) T*M`` are held as
:class:`EndomorphismField` matrices of even E-forms and multiplied with

    (X (x) phi (x) alpha) . (Y (x) psi (x) beta)
        = alpha(Y) X (x) phi^psi (x) beta

i.e. matrix multiplication with the wedge product on entries. ``R^E-hat``
has E-degree 2 in every entry, so every power series in it terminates.
"""

__author__ = "Stephan Sokolow (deitarion/SSokolow)"
__license__ = "GNU GPL 2.0 or later"

# pylint: disable=unsubscriptable-object,wrong-import-order

import logging
from fractions import Fraction
from functools import lru_cache
from itertools import product

from sympy.polys.domains import QQ, QQ_I

from .geometry import covariant_derivative, curvature_tensors
from .superalgebra import (AlgebraElement, ins_frame, ins_frame_j, ins_form,
                           ins_sym, undeformed_mul)
from .util import InvariantError, TruncationError

# -- Type-Annotation Imports --
from typing import List, NamedTuple, Sequence

from .fedosov import FedosovState
from .geometry import ChartGeometry
from .scalars import GaussRational
from .superalgebra import Shape
# --

log = logging.getLogger(__name__)


def binomial_series(alpha: Fraction, n: int) -> List[GaussRational]:
    """Coefficients of ``x^0 .. x^n`` in ``(1 - 2x)^alpha``

    .. doctest::

        >>> binomial_series(Fraction(-1, 2), 3) == [
        ...     QQ_I(1, 0), QQ_I(1, 0), QQ_I(QQ(3, 2), 0), QQ_I(QQ(5, 2), 0)]
        True
    """
    coeffs = []
    value = Fraction(1)
    for k in range(n + 1):
        coeffs.append(value)
        value = value * (alpha - k) / (k + 1) * -2
    return [QQ_I(QQ(c.numerator, c.denominator), 0) for c in coeffs]


class EndomorphismField:
    """A ``dim x dim`` matrix of even E-form sections under ``.``

    :param shape: Shape of the entries.
    :param entries: ``entries[i][j]`` is the ``d_i (x) dx^j`` component.
    """

    def __init__(self, shape: Shape, entries: List[List[AlgebraElement]]):
        self.shape = shape
        self.entries = entries

    @property
    def trunc(self) -> int:
        """E-degrees are bounded by the rank, so that is always exact"""
        return self.shape.rank

    @classmethod
    def zero(cls, shape: Shape) -> 'EndomorphismField':
        """The zero field"""
        return cls(shape, [[AlgebraElement.zero(shape, shape.rank)
                            for _ in range(shape.dim)]
                           for _ in range(shape.dim)])

    @classmethod
    def identity(cls, shape: Shape) -> 'EndomorphismField':
        """The identity endomorphism with constant entries"""
        result = cls.zero(shape)
        for i in range(shape.dim):
            result.entries[i][i] = AlgebraElement.monomial(
                shape, 1, trunc=shape.rank)
        return result

    def __add__(self, other: 'EndomorphismField') -> 'EndomorphismField':
        return EndomorphismField(self.shape, [
            [a + b for a, b in zip(row_a, row_b)]
            for row_a, row_b in zip(self.entries, other.entries)])

    def __sub__(self, other: 'EndomorphismField') -> 'EndomorphismField':
        return self + other.scale(-1)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EndomorphismField):
            return NotImplemented
        return all(a == b for row_a, row_b in zip(self.entries,
                                                  other.entries)
                   for a, b in zip(row_a, row_b))

    __hash__ = None  # type: ignore

    def __bool__(self) -> bool:
        return any(entry for row in self.entries for entry in row)

    def scale(self, factor) -> 'EndomorphismField':
        """Multiply every entry by a scalar"""
        return EndomorphismField(self.shape, [[e.scale(factor) for e in row]
                                              for row in self.entries])

    def bullet(self, other: 'EndomorphismField') -> 'EndomorphismField':
        """The product ``self . other``"""
        dim, rank = self.shape.dim, self.shape.rank
        out = []
        for i in range(dim):
            row = []
            for l in range(dim):
                acc = AlgebraElement.zero(self.shape, rank)
                for j in range(dim):
                    left = self.entries[i][j]
                    if left:
                        acc = acc + undeformed_mul(left, other.entries[j][l],
                                                   rank)
                row.append(acc)
            out.append(row)
        return EndomorphismField(self.shape, out)

    def power(self, k: int) -> 'EndomorphismField':
        """``self . self . ... . self`` (``k`` factors)"""
        result = EndomorphismField.identity(self.shape)
        for _ in range(k):
            result = result.bullet(self)
        return result

    def series(self, coeffs: Sequence[GaussRational]) -> 'EndomorphismField':
        """``sum_k coeffs[k] self^k``, stopping once a power vanishes"""
        result = EndomorphismField.zero(self.shape)
        term = EndomorphismField.identity(self.shape)
        for coeff in coeffs:
            if not term:
                break
            result = result + term.scale(coeff)
            term = term.bullet(self)
        return result


def rhat_e(g: ChartGeometry) -> EndomorphismField:
    """``(R^E-hat)^i_j = 1/4 Lambda^{ik} R^E_{ABkj} e^A e^B``"""
    shape, dim, rank = g.shape, g.dim, g.rank
    bundle = curvature_tensors(g).bundle
    quarter = QQ_I(QQ(1, 4), 0)
    result = EndomorphismField.zero(shape)
    for i, j in product(range(dim), repeat=2):
        acc = AlgebraElement.zero(shape, rank)
        for k in range(dim):
            lam = g.lam[i][k]
            if not lam:
                continue
            for a, b in product(range(rank), repeat=2):
                comp = bundle[a][b][k][j]
                if a != b and comp:
                    acc = acc + AlgebraElement.monomial(
                        shape, (lam * comp).mul_ground(quarter),
                        eset=(a + 1, b + 1), trunc=rank)
        result.entries[i][j] = acc
    return result


class RothsteinOperator:
    """``R^E-hat`` together with the series the bracket needs"""

    def __init__(self, g: ChartGeometry):
        self.geom = g
        self.RhatE = rhat_e(g)
        terms = g.rank // 2 + 1
        #: ``(1 - 2 R^E-hat)^(-1/2)``
        self.inv_sqrt = self.RhatE.series(binomial_series(Fraction(-1, 2),
                                                          terms))
        #: ``(1 - 2 R^E-hat)^(-1)``
        self.inverse = self.RhatE.series(binomial_series(Fraction(-1),
                                                         terms))
        #: ``(1 - 2 R^E-hat)^(1/2)``
        self.sqrt = self.RhatE.series(binomial_series(Fraction(1, 2),
                                                      terms))


@lru_cache(maxsize=32)
def rothstein_operator(g: ChartGeometry) -> RothsteinOperator:
    """The shared :class:`RothsteinOperator` for ``g``"""
    return RothsteinOperator(g)


class RothsteinForms(NamedTuple):
    """Both evaluations of the bracket"""
    #: ``Lambda^{ij} N^k_i N^l_j nabla_k phi nabla_l psi + q-term``
    two_factor: AlgebraElement
    #: ``Lambda^{ij} (N^2)^k_i nabla_k phi nabla_j psi + q-term``
    one_factor: AlgebraElement

    @property
    def agree(self) -> bool:
        """True if the two forms coincide exactly"""
        return self.two_factor == self.one_factor


def _lift(g: ChartGeometry, phi: AlgebraElement) -> AlgebraElement:
    if any(key[0] or any(key[1]) or key[3] for key in phi.terms):
        raise ValueError("The bracket takes lambda-free sections of C")
    return phi.with_trunc(g.rank)


def frame_term(g: ChartGeometry, phi: AlgebraElement, psi: AlgebraElement
               ) -> AlgebraElement:
    """``q^{AB} (j(e_A) phi) ^ (i(e_B) psi)``"""
    rank = g.rank
    result = AlgebraElement.zero(g.shape, rank)
    for a, b in product(range(rank), repeat=2):
        if g.qinv[a][b]:
            result = result + undeformed_mul(
                ins_frame_j(phi, a + 1).with_trunc(rank),
                ins_frame(psi, b + 1).with_trunc(rank), rank
            ).scale(g.qinv[a][b])
    return result


def rothstein_forms(g: ChartGeometry, phi: AlgebraElement,
                    psi: AlgebraElement) -> RothsteinForms:
    """Evaluate the two-factor and the one-factor form of the bracket

    :raises ValueError: An argument has lambda, symmetric or form factors.
    """
    phi, psi = _lift(g, phi), _lift(g, psi)
    op = rothstein_operator(g)
    dim, rank = g.dim, g.rank
    d_phi = [covariant_derivative(g, phi, k + 1) for k in range(dim)]
    d_psi = [covariant_derivative(g, psi, k + 1) for k in range(dim)]

    def contract(field: EndomorphismField, derivs: List[AlgebraElement]
                 ) -> List[AlgebraElement]:
        """``v_i = field^k_i ^ derivs[k]``"""
        out = []
        for i in range(dim):
            acc = AlgebraElement.zero(g.shape, rank)
            for k in range(dim):
                if field.entries[k][i]:
                    acc = acc + undeformed_mul(field.entries[k][i],
                                               derivs[k], rank)
            out.append(acc)
        return out

    left_two, right_two = (contract(op.inv_sqrt, d_phi),
                           contract(op.inv_sqrt, d_psi))
    left_one = contract(op.inverse, d_phi)
    q_part = frame_term(g, phi, psi)
    two = one = q_part
    for i, j in product(range(dim), repeat=2):
        lam = g.lam[i][j]
        if not lam:
            continue
        two = two + undeformed_mul(left_two[i], right_two[j],
                                   rank).scale(lam)
        one = one + undeformed_mul(left_one[i], d_psi[j].with_trunc(rank),
                                   rank).scale(lam)
    return RothsteinForms(two, one)


def rothstein_bracket(g: ChartGeometry, phi: AlgebraElement,
                      psi: AlgebraElement) -> AlgebraElement:
    """The super-Poisson bracket built directly from ``R^E-hat``.

    :raises InvariantError: The two-factor and one-factor forms disagree.
    """
    forms = rothstein_forms(g, phi, psi)
    if not forms.agree:
        raise InvariantError("Two-factor and one-factor forms of the "
                             "bracket disagree on %r" % g.name)
    return forms.two_factor


def rho_hat(st: FedosovState) -> EndomorphismField:
    """Read ``rho-hat^i_j = Lambda^{ik} (i_s(d_k) rho)_j`` off the
    symmetric-degree-1, lambda-free part ``rho`` of ``r`` and confirm it
    solves ``rho-hat - R^E-hat = 1/2 rho-hat . rho-hat``.

    :raises TruncationError: ``r`` was not built through degree ``n + 1``.
    :raises InvariantError: Either identity fails.
    """
    g = st.geom
    dim, rank = g.dim, g.rank
    if st.K < rank + 1:
        raise TruncationError("rho-hat needs r through degree %d, have %d"
                              % (rank + 1, st.K))
    rho = st.r.select(lambda key: not key[0] and sum(key[1]) == 1)
    slots = [ins_sym(rho, k + 1) for k in range(dim)]
    result = EndomorphismField.zero(g.shape)
    for i, j in product(range(dim), repeat=2):
        acc = AlgebraElement.zero(g.shape, rank)
        for k in range(dim):
            if g.lam[i][k]:
                comp = ins_form(slots[k].select(
                    lambda key, j=j: key[3] == (j + 1,)), j + 1)
                acc = acc + comp.with_trunc(rank).scale(g.lam[i][k])
        result.entries[i][j] = acc

    op = rothstein_operator(g)
    if result - op.RhatE != result.bullet(result).scale(QQ_I(QQ(1, 2), 0)):
        raise InvariantError("rho-hat fails its quadratic relation on %r"
                             % g.name)
    if result != EndomorphismField.identity(g.shape) - op.sqrt:
        raise InvariantError("rho-hat differs from 1 - (1 - 2 R^E-hat)^(1/2)"
                             " on %r" % g.name)
    log.debug("rho-hat of %r verified", g.name)
    return result

# vim: set sw=4 sts=4 expandtab :
