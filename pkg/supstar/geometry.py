"""Chart-level geometric input and the covariant derivative on W (x) Lambda

Index conventions for the component arrays held by :class:`ChartGeometry`
(all 0-based in storage, 1-based in reports):

* ``omega[i][j]`` and ``lam[i][j]``: the symplectic form and its Poisson
  tensor, with ``lam[i][k] * omega[j][k] = delta(i, j)``
* ``gamma[k][i][j]``: Christoffel symbols, ``nabla_i d_j = gamma[k][i][j] d_k``
* ``aconn[B][i][A]``: ``nabla^E_i e_A = aconn[B][i][A] e_B``
* ``q[A][B]`` and ``qinv[A][B]``: the fibre metric and its inverse
"""

__author__ = "Stephan Sokolow (deitarion/SSokolow)"
__license__ = "GNU GPL 2.0 or later"

# pylint: disable=unsubscriptable-object,wrong-import-order

import logging
from itertools import product

from sympy.polys.domains import QQ, QQ_I

from .scalars import matrix_of_polys, poly_partial, poly_ring, poly_to_json
from .superalgebra import (AlgebraElement, Shape, insert_front, remove_front)
from .util import ParseError

# -- Type-Annotation Imports --
from typing import Any, Dict, List, NamedTuple, Optional, Tuple

from .scalars import GaussPoly
from .superalgebra import TermKey

Matrix = List[List[GaussPoly]]
Tensor3 = List[List[List[GaussPoly]]]
# --

log = logging.getLogger(__name__)

THIRD = QQ_I(QQ(1, 3), 0)
HALF = QQ_I(QQ(1, 2), 0)
QUARTER = QQ_I(QQ(1, 4), 0)


class ChartGeometry:
    """The complete geometric input on one chart.

    :param dim: Chart dimension ``2m``.
    :param rank: Rank ``n`` of the bundle E.
    :param omega: Symplectic form components.
    :param lam: Poisson tensor components (supplied, never inverted here).
    :param gamma: Christoffel symbols of the symplectic connection
        (default: all zero).
    :param aconn: Connection coefficients of the E connection
        (default: all zero).
    :param q: Fibre metric (default: identity).
    :param qinv: Inverse fibre metric (default: identity).
    :param name: A label used in reports.
    """

    def __init__(self, dim: int, rank: int, omega: Matrix, lam: Matrix,
                 gamma: Optional[Tensor3] = None,
                 aconn: Optional[Tensor3] = None,
                 q: Optional[Matrix] = None, qinv: Optional[Matrix] = None,
                 name: str = ''):
        R = poly_ring(dim)
        self.dim, self.rank, self.name = dim, rank, name
        self.omega, self.lam = omega, lam
        self.gamma = gamma or [[[R.zero] * dim for _ in range(dim)]
                               for _ in range(dim)]
        self.aconn = aconn or [[[R.zero] * rank for _ in range(dim)]
                               for _ in range(rank)]
        self.q = q or identity_matrix(R, rank)
        self.qinv = qinv or identity_matrix(R, rank)

    def __repr__(self) -> str:
        return "ChartGeometry(%r, dim=%d, rank=%d)" % (
            self.name, self.dim, self.rank)

    @property
    def shape(self) -> Shape:
        """The shape every element over this chart has"""
        return Shape(self.dim, self.rank)

    @property
    def ring(self):
        """The coefficient ring of this chart"""
        return poly_ring(self.dim)

    def is_flat_bundle(self) -> bool:
        """True if every E connection coefficient vanishes"""
        return not any(c for plane in self.aconn for row in plane
                       for c in row)

    def has_constant_metric(self) -> bool:
        """True if ``q`` (and hence ``qinv``) has constant entries"""
        return all(c.is_ground for row in self.q + self.qinv for c in row)

    def replace(self, **changes: Any) -> 'ChartGeometry':
        """Return a copy with some component arrays swapped out"""
        fields = dict(dim=self.dim, rank=self.rank, omega=self.omega,
                      lam=self.lam, gamma=self.gamma, aconn=self.aconn,
                      q=self.q, qinv=self.qinv, name=self.name)
        fields.update(changes)
        return ChartGeometry(**fields)

    @classmethod
    def darboux(cls, m: int, rank: int = 0, q: Optional[Matrix] = None,
                qinv: Optional[Matrix] = None, name: str = ''
                ) -> 'ChartGeometry':
        """Flat ``R^2m`` with positions ``x1..xm``, momenta
        ``x{m+1}..x{2m}`` and ``omega_{i,m+i} = Lambda^{i,m+i} = 1``.

        E is trivial of the given rank with the zero connection.
        """
        dim = 2 * m
        R = poly_ring(dim)
        std = [[R.zero] * dim for _ in range(dim)]
        for i in range(m):
            std[i][m + i], std[m + i][i] = R.one, -R.one
        return cls(dim, rank, std, [row[:] for row in std], q=q, qinv=qinv,
                   name=name or 'darboux(%d)' % m)

    @classmethod
    def from_json(cls, doc: Any, name: str = '') -> 'ChartGeometry':
        """Load ``{dim_m, rank_n, omega, lambda, gamma, aconn, q, qinv}``.
        ``gamma``, ``aconn``, ``q`` and ``qinv`` may be omitted.

        :raises ParseError: Missing keys or arrays of the wrong shape.
        """
        if not isinstance(doc, dict):
            raise ParseError("A geometry must be a JSON object")
        try:
            dim, rank = int(doc['dim_m']), int(doc.get('rank_n', 0))
            omega = matrix_of_polys(doc['omega'], dim, (dim, dim))
            lam = matrix_of_polys(doc['lambda'], dim, (dim, dim))
        except KeyError as err:
            raise ParseError("Geometry is missing %s" % err) from err

        def optional(key, shape):
            if key not in doc:
                return None
            return matrix_of_polys(doc[key], dim, shape)

        return cls(dim, rank, omega, lam,
                   gamma=optional('gamma', (dim, dim, dim)),
                   aconn=optional('aconn', (rank, dim, rank)),
                   q=optional('q', (rank, rank)),
                   qinv=optional('qinv', (rank, rank)),
                   name=doc.get('name', name))

    def to_json(self) -> Dict[str, Any]:
        """Serialize in the format read by :meth:`from_json`"""
        def dump(arr):
            if isinstance(arr, list):
                return [dump(x) for x in arr]
            return poly_to_json(arr)
        return {'name': self.name, 'dim_m': self.dim, 'rank_n': self.rank,
                'omega': dump(self.omega), 'lambda': dump(self.lam),
                'gamma': dump(self.gamma), 'aconn': dump(self.aconn),
                'q': dump(self.q), 'qinv': dump(self.qinv)}


def identity_matrix(R, size: int) -> Matrix:
    """An identity matrix of polynomials"""
    return [[R.one if i == j else R.zero for j in range(size)]
            for i in range(size)]


class Check(NamedTuple):
    """One line of a validation report"""
    name: str
    passed: bool
    detail: str = ''


class ValidationReport(NamedTuple):
    """The outcome of :func:`validate`"""
    checks: List[Check]

    @property
    def ok(self) -> bool:
        """True if every check passed"""
        return all(c.passed for c in self.checks)

    def failures(self) -> List[Check]:
        """The checks that did not pass"""
        return [c for c in self.checks if not c.passed]

    def rows(self) -> List[Tuple[str, str, str]]:
        """Rows for :func:`supstar.util.fmt_table`"""
        return [(c.name, 'PASS' if c.passed else 'FAIL', c.detail)
                for c in self.checks]


def _first_nonzero(name: str, labels: str, indices, func) -> Check:
    """Run ``func`` over ``indices`` and report the first nonzero value"""
    for idx in indices:
        if func(*idx):
            return Check(name, False, "at (%s)=(%s)" % (
                labels, ','.join(str(x + 1) for x in idx)))
    return Check(name, True)


def symplectic_defect(gamma: Tensor3, omega: Matrix, i: int, j: int,
                      k: int) -> GaussPoly:
    """``(nabla_i omega)_{jk}`` for the connection ``gamma``"""
    dim = len(omega)
    value = poly_partial(omega[j][k], i + 1)
    for m in range(dim):
        value -= gamma[m][i][j] * omega[m][k] + gamma[m][i][k] * omega[j][m]
    return value


def metric_defect(aconn: Tensor3, q: Matrix, i: int, a: int, b: int
                  ) -> GaussPoly:
    """``(nabla^E_i q)_{ab}`` for the connection ``aconn``"""
    value = poly_partial(q[a][b], i + 1)
    for c in range(len(q)):
        value -= aconn[c][i][a] * q[c][b] + aconn[c][i][b] * q[a][c]
    return value


def validate(g: ChartGeometry) -> ValidationReport:
    """Check every compatibility condition on the chart data exactly.

    Failures never raise; each check reports the first offending component
    with 1-based indices.
    """
    dim, rank = g.dim, g.rank
    sq, cube = (list(product(range(dim), repeat=2)),
                list(product(range(dim), repeat=3)))
    esq = list(product(range(rank), repeat=2))

    shapes_ok = (len(g.omega) == dim and len(g.lam) == dim
                 and all(len(r) == dim for r in g.omega + g.lam)
                 and len(g.gamma) == dim and len(g.aconn) == rank
                 and len(g.q) == rank and len(g.qinv) == rank)
    if not shapes_ok:
        return ValidationReport([Check('shape', False,
                                       "component arrays do not match "
                                       "dim_m=%d, rank_n=%d" % (dim, rank))])

    R = g.ring
    checks = [
        Check('shape', True),
        _first_nonzero('omega antisymmetry', 'i,j', sq,
                       lambda i, j: g.omega[i][j] + g.omega[j][i]),
        _first_nonzero('lambda antisymmetry', 'i,j', sq,
                       lambda i, j: g.lam[i][j] + g.lam[j][i]),
        _first_nonzero('lambda inverts omega', 'i,j', sq, lambda i, j: sum(
            (g.lam[i][k] * g.omega[j][k] for k in range(dim)), R.zero) - (
                R.one if i == j else R.zero)),
        _first_nonzero('torsion-free', 'k,i,j', cube,
                       lambda k, i, j: g.gamma[k][i][j] - g.gamma[k][j][i]),
        _first_nonzero('symplectic connection', 'i,j,k', cube,
                       lambda i, j, k: symplectic_defect(g.gamma, g.omega,
                                                         i, j, k)),
        _first_nonzero('q symmetry', 'A,B', esq,
                       lambda a, b: g.q[a][b] - g.q[b][a]),
        _first_nonzero('q inverse', 'A,B', esq, lambda a, b: sum(
            (g.q[a][c] * g.qinv[c][b] for c in range(rank)), R.zero) - (
                R.one if a == b else R.zero)),
        _first_nonzero('metric connection', 'i,A,B',
                       list(product(range(dim), range(rank), range(rank))),
                       lambda i, a, b: metric_defect(g.aconn, g.q, i, a, b)),
    ]
    for check in checks:
        if not check.passed:
            log.debug("Geometry %r failed %s %s", g.name, check.name,
                      check.detail)
    return ValidationReport(checks)


def hess_symplectrize(gtilde: Tensor3, omega: Matrix, lam: Matrix
                      ) -> Tensor3:
    """Turn a torsion-free connection into a symplectic one via

        Gamma^m_ij = Gt^m_ij
                     + 1/3 Lambda^mk ((Dt_i omega)_jk + (Dt_j omega)_ik)

    Requires ``omega`` closed and ``lam`` its inverse; the result is again
    torsion-free and preserves ``omega``.
    """
    dim = len(omega)
    R = poly_ring(dim)
    defect = [[[symplectic_defect(gtilde, omega, i, j, k) for k in range(dim)]
               for j in range(dim)] for i in range(dim)]
    return [[[gtilde[m][i][j] + sum(
        (lam[m][k] * (defect[i][j][k] + defect[j][i][k])
         for k in range(dim)), R.zero).mul_ground(THIRD)
        for j in range(dim)] for i in range(dim)] for m in range(dim)]


def make_metric_connection(atilde: Tensor3, q: Matrix, qinv: Matrix
                           ) -> Tensor3:
    """Correct an E connection so it preserves ``q``:

        A^D_iA = At^D_iA + 1/2 q^DB (Dt_i q)_AB
    """
    rank = len(q)
    dim = len(atilde[0]) if rank else 0
    R = q[0][0].ring if rank else None
    defect = [[[metric_defect(atilde, q, i, a, b) for b in range(rank)]
               for a in range(rank)] for i in range(dim)]
    return [[[atilde[d][i][a] + sum(
        (qinv[d][b] * defect[i][a][b] for b in range(rank)),
        R.zero).mul_ground(HALF)
        for a in range(rank)] for i in range(dim)] for d in range(rank)]


def _replace_frame(eset: Tuple[int, ...], pos: int, new: int
                   ) -> Tuple[int, Tuple[int, ...]]:
    """Sign and result of swapping the frame at ``pos`` for ``new``"""
    sign, rest = remove_front(eset[pos], eset)
    inner_sign, result = insert_front(new, rest)
    return sign * inner_sign, result


def covariant_derivative(g: ChartGeometry, F: AlgebraElement, i: int
                         ) -> AlgebraElement:
    """``nabla_{d/dx^i}`` (``i`` 1-based) on the coefficient, symmetric and
    E factors. The form factor only sees the coefficient derivative."""
    dim, rank = g.dim, g.rank
    gam = [[g.gamma[j][i - 1][k] for k in range(dim)] for j in range(dim)]
    acn = [[g.aconn[a][i - 1][b] for b in range(rank)] for a in range(rank)]

    def step(key: TermKey, coeff: GaussPoly):
        t, mu, eset, aset = key
        yield key, poly_partial(coeff, i)
        # dx^j -> -Gamma^j_ik dx^k for each symmetric factor
        for j, power in enumerate(mu):
            if not power:
                continue
            for k in range(dim):
                if not gam[j][k]:
                    continue
                new_mu = list(mu)
                new_mu[j] -= 1
                new_mu[k] += 1
                yield (t, tuple(new_mu), eset, aset), -(
                    coeff * gam[j][k] * power)
        # e^A -> -A^A_iB e^B for each E factor
        for pos, a in enumerate(eset):
            for b in range(rank):
                if not acn[a - 1][b]:
                    continue
                sign, new_eset = _replace_frame(eset, pos, b + 1)
                if sign:
                    yield (t, mu, new_eset, aset), -(
                        coeff * acn[a - 1][b] * sign)
    return F.map_terms(step)


def nabla(g: ChartGeometry, F: AlgebraElement) -> AlgebraElement:
    """``nabla = sum_i dx^i ^ nabla_i`` with ``dx^i`` wedged at the front"""
    result = AlgebraElement.zero(F.shape, F.trunc)
    for i in range(1, g.dim + 1):
        def wedge(key, coeff, i=i):
            sign, aset = insert_front(i, key[3])
            if sign:
                yield key[:3] + (aset,), coeff * sign
        result = result + covariant_derivative(g, F, i).map_terms(wedge)
    return result


class CurvatureTensors(NamedTuple):
    """Component tensors (0-based) behind :class:`CurvatureData`"""
    #: ``riemann[k][l][i][j] = R^k_{l i j}``
    riemann: List
    #: ``lowered[k][l][i][j] = omega_km R^m_{l i j}``
    lowered: List
    #: ``field[a][b][i][j] = F^a_{b i j}`` of the E connection
    field: List
    #: ``bundle[a][b][i][j] = -q_ac F^c_{b i j}``
    bundle: List


class CurvatureData(NamedTuple):
    """The curvature elements ``R^(M)``, ``R^(E)`` and their sum"""
    RM: AlgebraElement
    RE: AlgebraElement
    Rtotal: AlgebraElement
    tensors: CurvatureTensors


def curvature_tensors(g: ChartGeometry) -> CurvatureTensors:
    """Compute the curvature components from ``gamma`` and ``aconn``"""
    dim, rank, R = g.dim, g.rank, g.ring
    gam, acn = g.gamma, g.aconn

    def riem(k, l, i, j):
        value = (poly_partial(gam[k][j][l], i + 1)
                 - poly_partial(gam[k][i][l], j + 1))
        for m in range(dim):
            value += gam[k][i][m] * gam[m][j][l] - gam[k][j][m] * gam[m][i][l]
        return value

    def field(a, b, i, j):
        value = (poly_partial(acn[a][j][b], i + 1)
                 - poly_partial(acn[a][i][b], j + 1))
        for c in range(rank):
            value += acn[a][i][c] * acn[c][j][b] - acn[a][j][c] * acn[c][i][b]
        return value

    riemann = [[[[riem(k, l, i, j) for j in range(dim)] for i in range(dim)]
                for l in range(dim)] for k in range(dim)]
    lowered = [[[[sum((g.omega[k][m] * riemann[m][l][i][j]
                       for m in range(dim)), R.zero)
                  for j in range(dim)] for i in range(dim)]
                for l in range(dim)] for k in range(dim)]
    fld = [[[[field(a, b, i, j) for j in range(dim)] for i in range(dim)]
            for b in range(rank)] for a in range(rank)]
    bundle = [[[[-sum((g.q[a][c] * fld[c][b][i][j] for c in range(rank)),
                      R.zero)
                 for j in range(dim)] for i in range(dim)]
               for b in range(rank)] for a in range(rank)]
    return CurvatureTensors(riemann, lowered, fld, bundle)


def _pair_exponents(dim: int, k: int, l: int) -> Tuple[int, ...]:
    vec = [0] * dim
    vec[k] += 1
    vec[l] += 1
    return tuple(vec)


def curvature(g: ChartGeometry, trunc: int = 10) -> CurvatureData:
    """Assemble ``R^(M) = 1/4 R_klij y^k y^l dx^i dx^j`` and
    ``R^(E) = 1/4 R^E_ABij e^A e^B dx^i dx^j``.

    The 1/4 goes with the exponent-vector convention for ``y^k y^l`` and is
    pinned down by ``nabla^2 = (i/lambda) ad(R)``, which the test suite
    checks exactly. Both elements are homogeneous of total degree 2 and
    exact at every degree up to ``trunc``.
    """
    tensors = curvature_tensors(g)
    shape, dim = g.shape, g.dim
    RM = AlgebraElement.zero(shape, trunc)
    for k, l, i, j in product(range(dim), repeat=4):
        comp = tensors.lowered[k][l][i][j]
        if comp and i != j:
            RM = RM + AlgebraElement.monomial(
                shape, comp.mul_ground(QUARTER), mu=_pair_exponents(dim, k, l),
                aset=(i + 1, j + 1), trunc=trunc)
    RE = AlgebraElement.zero(shape, trunc)
    for a, b in product(range(g.rank), repeat=2):
        if a == b:
            continue
        for i, j in product(range(dim), repeat=2):
            comp = tensors.bundle[a][b][i][j]
            if comp and i != j:
                RE = RE + AlgebraElement.monomial(
                    shape, comp.mul_ground(QUARTER), eset=(a + 1, b + 1),
                    aset=(i + 1, j + 1), trunc=trunc)
    log.debug("Curvature of %r: %d R^(M) terms, %d R^(E) terms", g.name,
              len(RM.terms), len(RE.terms))
    return CurvatureData(RM, RE, RM + RE, tensors)

# vim: set sw=4 sts=4 expandtab :
