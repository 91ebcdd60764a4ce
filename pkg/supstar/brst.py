"""Ghost gradings and the quantum and classical BRST constructions

Both setups live on a Darboux chart with the trivial bundle
``E = F (+) F*`` of rank ``2n``: frames ``e^1 .. e^n`` are the ghosts
``c^a`` and ``e^{n+1} .. e^{2n}`` the antighosts ``b_a``, paired by the fibre
metric ``q(c^a, b_b) = delta^a_b``. The ghost number of ``e^S`` is the
number of ghosts in ``S`` minus the number of antighosts.

The quantum side multiplies with the factorized product of
:func:`supstar.fedosov.flat_star` over a Moyal base; the classical side
uses the Rothstein bracket of the flat composite geometry together with
an explicit Koszul homotopy in constraint-adapted coordinates.
"""

__author__ = "Stephan Sokolow (deitarion/SSokolow)"
__license__ = "GNU GPL 2.0 or later"

# pylint: disable=unsubscriptable-object,wrong-import-order

import logging
from itertools import combinations, product

from sympy.polys.domains import QQ, QQ_I
from sympy.polys.matrices import DomainMatrix

from .fedosov import MoyalStar, flat_star
from .geometry import Check, ChartGeometry, ValidationReport
from .rothstein import rothstein_bracket
from .scalars import (I_UNIT, is_zero, matrix_of_polys, parse_rational,
                      poly_from_json, poly_partial, poly_ring)
from .superalgebra import (AlgebraElement, insert_front, random_frame_element,
                           remove_front)
from .util import (CoordinateChangeError, MomentumMapError, ParseError,
                   RecursionClosureError)

# -- Type-Annotation Imports --
from random import Random
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .scalars import GaussPoly, GaussRational
from .superalgebra import IndexSet, TermKey

Series = List[GaussPoly]
# --

log = logging.getLogger(__name__)

#: Default lambda-order for the quantum identities
QUANTUM_ORDER = 4


def pairing_matrix(R, n: int) -> List[List[GaussPoly]]:
    """The natural pairing of ``F`` and ``F*`` as a ``2n x 2n`` metric"""
    mat = [[R.zero] * (2 * n) for _ in range(2 * n)]
    for a in range(n):
        mat[a][n + a] = mat[n + a][a] = R.one
    return mat


def ghost_frames(n: int) -> Tuple[range, range]:
    """1-based frame indices of the ghosts and of the antighosts"""
    return range(1, n + 1), range(n + 1, 2 * n + 1)


def ghost_degrees(eset: IndexSet, n: int) -> Tuple[int, int]:
    """``(ghost degree, antighost degree)`` of a frame monomial"""
    ghosts = sum(1 for idx in eset if idx <= n)
    return ghosts, len(eset) - ghosts


def ghost_number(F: AlgebraElement, n: int) -> AlgebraElement:
    """``Gh`` as a degree map: scale each term by ghost minus antighost
    degree"""
    def step(key, coeff):
        ghosts, antighosts = ghost_degrees(key[2], n)
        yield key, coeff * (ghosts - antighosts)
    return F.map_terms(step)


def ghost_components(F: AlgebraElement, n: int
                     ) -> Dict[int, AlgebraElement]:
    """Split ``F`` into its ghost-number eigencomponents"""
    parts: Dict[int, Dict[TermKey, GaussPoly]] = {}
    for key, coeff in F.terms.items():
        ghosts, antighosts = ghost_degrees(key[2], n)
        parts.setdefault(ghosts - antighosts, {})[key] = coeff
    return {g: AlgebraElement(F.shape, terms, F.trunc)
            for g, terms in parts.items()}


def antighost_component(F: AlgebraElement, n: int, degree: int
                        ) -> AlgebraElement:
    """The terms of ``F`` with exactly ``degree`` antighosts"""
    return F.select(lambda key: ghost_degrees(key[2], n)[1] == degree)


def substitute(f: GaussPoly, images: Sequence[GaussPoly]) -> GaussPoly:
    """Simultaneously replace every coordinate of ``f`` by ``images``"""
    return f.compose(list(zip(f.ring.gens, images)))


def poisson(g: ChartGeometry, f: GaussPoly, h: GaussPoly) -> GaussPoly:
    """``{f, h} = Lambda^{ij} d_i f d_j h`` on the base"""
    result = g.ring.zero
    for i, j in product(range(g.dim), repeat=2):
        if g.lam[i][j]:
            result += (g.lam[i][j] * poly_partial(f, i + 1)
                       * poly_partial(h, j + 1))
    return result


def _structure(doc: Any, size: int) -> List[List[List[GaussRational]]]:
    try:
        return [[[QQ_I(parse_rational(doc[c][a][b]), 0)
                  for b in range(size)] for a in range(size)]
                for c in range(size)]
    except (IndexError, TypeError, KeyError) as err:
        raise ParseError("structure must be a lie_dim^3 nested list of "
                         "rationals") from err


# -- Quantum BRST --


class QuantumBRSTSetup:
    """A quantum momentum map for a Lie algebra acting on a Darboux chart.

    :param base: The Darboux chart (its Moyal product is ``*_F``).
    :param structure: ``structure[c][a][b] = f^c_{ab}``.
    :param qmm: ``qmm[a][t]`` is the ``lambda^t`` coefficient of
        ``<J, xi_a>``.
    """

    def __init__(self, base: ChartGeometry,
                 structure: List[List[List[GaussRational]]],
                 qmm: List[Series], name: str = ''):
        self.base = base
        self.lie_dim = len(qmm)
        self.structure = structure
        self.qmm = qmm
        self.name = name or base.name
        pairing = pairing_matrix(base.ring, self.lie_dim)
        self.geom = base.replace(rank=2 * self.lie_dim, aconn=None,
                                 q=pairing, qinv=[row[:] for row in pairing],
                                 name='%s (ghosts)' % self.name)
        self.base_star = MoyalStar(self.geom)

    @classmethod
    def from_json(cls, doc: Any, name: str = '') -> 'QuantumBRSTSetup':
        """Load ``{dim_m, structure, qmm}`` where each ``qmm`` entry is a
        polynomial or a list of lambda-coefficients.

        :raises ParseError: Missing keys or malformed data.
        """
        if not isinstance(doc, dict):
            raise ParseError("A BRST setup must be a JSON object")
        try:
            m, raw_qmm = int(doc['dim_m']) // 2, doc['qmm']
        except (KeyError, TypeError, ValueError) as err:
            raise ParseError("Quantum setup is missing %s" % err) from err
        dim = 2 * m
        qmm = []
        for entry in raw_qmm:
            if isinstance(entry, list) and entry and not isinstance(
                    entry[0], dict):
                qmm.append([poly_from_json(x, dim) for x in entry])
            else:
                qmm.append([poly_from_json(entry, dim)])
        size = len(qmm)
        structure = _structure(doc.get('structure', [[[0] * size] * size]
                                       * size), size)
        return cls(ChartGeometry.darboux(m), structure, qmm,
                   doc.get('name', name))

    def theta_trunc(self) -> int:
        """A truncation large enough to hold every term of the charge"""
        return 2 * len(max(self.qmm, key=len)) + 2 * self.lie_dim + 2


def structure_checks(structure: List[List[List[GaussRational]]]
                     ) -> List[Check]:
    """Antisymmetry and the Jacobi identity of ``f^c_{ab}``"""
    size = len(structure)
    idx = range(size)
    antisym = all(structure[c][a][b] == -structure[c][b][a]
                  for c, a, b in product(idx, repeat=3))

    def jacobi(a, b, c, d):
        total = QQ_I.zero
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            for e in idx:
                total += structure[e][x][y] * structure[d][e][z]
        return total

    return [Check('structure constants antisymmetric', antisym),
            Check('Jacobi identity', all(
                is_zero(jacobi(a, b, c, d))
                for a, b, c, d in product(idx, repeat=4)))]


def _series_star(setup: QuantumBRSTSetup, f: Series, h: Series, order: int
                 ) -> Series:
    R = setup.base.ring
    out = [R.zero] * (order + 1)
    for t1, f_t in enumerate(f):
        for t2, h_t in enumerate(h):
            if t1 + t2 > order:
                continue
            for p, coeff in enumerate(setup.base_star.product(
                    f_t, h_t, order - t1 - t2)):
                out[t1 + t2 + p] += coeff
    return out


def momentum_map_defects(setup: QuantumBRSTSetup, T: int = QUANTUM_ORDER
                         ) -> Dict[Tuple[int, int], bool]:
    """For every pair ``a < b`` (1-based), whether
    ``J_a * J_b - J_b * J_a = i lambda f^c_{ab} J_c`` holds mod
    ``lambda^(T+1)``"""
    R = setup.base.ring
    result = {}
    for a, b in combinations(range(setup.lie_dim), 2):
        lhs = [x - y for x, y in zip(
            _series_star(setup, setup.qmm[a], setup.qmm[b], T),
            _series_star(setup, setup.qmm[b], setup.qmm[a], T))]
        rhs = [R.zero] * (T + 1)
        for c in range(setup.lie_dim):
            for t, coeff in enumerate(setup.qmm[c]):
                if t + 1 <= T:
                    rhs[t + 1] += coeff.mul_ground(
                        I_UNIT * setup.structure[c][a][b])
        result[(a + 1, b + 1)] = lhs == rhs
    return result


def quantum_charge(setup: QuantumBRSTSetup, check: bool = True,
                   T: int = QUANTUM_ORDER) -> AlgebraElement:
    """``Theta = sum_a <J, xi_a> c^a - 1/2 f^c_{ab} c^a c^b b_c``

    :param check: Verify the momentum map condition first.
    :raises MomentumMapError: ``check`` is set and a pair fails.
    """
    if check:
        for pair, ok in sorted(momentum_map_defects(setup, T).items()):
            if not ok:
                raise MomentumMapError(
                    "Quantum momentum map condition fails for (%d, %d)"
                    % pair, pair)

    n, shape = setup.lie_dim, setup.geom.shape
    trunc = setup.theta_trunc()
    theta = AlgebraElement.zero(shape, trunc)
    for a, series in enumerate(setup.qmm):
        for t, coeff in enumerate(series):
            theta = theta + AlgebraElement.monomial(
                shape, coeff, t=t, eset=(a + 1,), trunc=trunc)
    half = QQ_I(QQ(-1, 2), 0)
    for c, a, b in product(range(n), repeat=3):
        f_cab = setup.structure[c][a][b]
        if a != b and not is_zero(f_cab):
            theta = theta + AlgebraElement.monomial(
                shape, f_cab * half, eset=(a + 1, b + 1, n + c + 1),
                trunc=trunc)
    return theta


def gamma_element(setup: QuantumBRSTSetup) -> AlgebraElement:
    """``gamma = sum_a c^a b_a``, whose inner derivation is ``Gh``"""
    n, shape = setup.lie_dim, setup.geom.shape
    result = AlgebraElement.zero(shape, 2 * n)
    for a in range(n):
        result = result + AlgebraElement.monomial(
            shape, 1, eset=(a + 1, n + a + 1), trunc=2 * n)
    return result


def quantum_star(setup: QuantumBRSTSetup, phi: AlgebraElement,
                 psi: AlgebraElement, T: int = QUANTUM_ORDER
                 ) -> AlgebraElement:
    """The factorized star product of the composite geometry"""
    return flat_star(setup.geom, phi, psi, T, setup.base_star)


def graded_commutator(setup: QuantumBRSTSetup, A: AlgebraElement,
                      phi: AlgebraElement, odd: bool,
                      T: int = QUANTUM_ORDER) -> AlgebraElement:
    """``(1/i lambda)(A * phi -+ phi * A)`` mod ``lambda^(T+1)``, the sign
    taken per E-parity component of ``phi`` when ``A`` is odd"""
    result = AlgebraElement.zero(setup.geom.shape, 2 * T + setup.geom.rank)
    for (parity_e, _), part in phi.homogeneous_parts().items():
        sign = -1 if odd and parity_e else 1
        forward = quantum_star(setup, A, part, T + 1)
        backward = quantum_star(setup, part, A, T + 1)
        comm = forward - backward.scale(sign)
        result = result + comm.divide_lambda().scale(-I_UNIT)
    return result.lambda_truncate(T)


def quantum_Q(setup: QuantumBRSTSetup, theta: AlgebraElement,
              phi: AlgebraElement, T: int = QUANTUM_ORDER) -> AlgebraElement:
    """``Q(phi) = (1/i lambda)(Theta * phi - (-1)^(a+b) phi * Theta)`` on
    bidegree ``(a, b)`` components, mod ``lambda^(T+1)``"""
    return graded_commutator(setup, theta, phi, True, T)


def strong_invariance(setup: QuantumBRSTSetup, samples: Sequence[GaussPoly],
                      T: int = QUANTUM_ORDER) -> Check:
    """Whether ``<J,xi> * f - f * <J,xi> = i lambda {<J,xi>, f}`` for every
    ``f`` in ``samples``, mod ``lambda^(T+1)``"""
    R = setup.base.ring
    for a, series in enumerate(setup.qmm):
        for f in samples:
            lhs = [x - y for x, y in zip(
                _series_star(setup, series, [f], T),
                _series_star(setup, [f], series, T))]
            rhs = [R.zero] * (T + 1)
            for t, coeff in enumerate(series):
                if t + 1 <= T:
                    rhs[t + 1] += poisson(setup.base, coeff,
                                          f).mul_ground(I_UNIT)
            if lhs != rhs:
                return Check('strong invariance', False,
                             "xi_%d against %s" % (a + 1, f.as_expr()))
    return Check('strong invariance', True)


def quantum_checks(setup: QuantumBRSTSetup, rng: Random, trials: int = 3,
                   T: int = QUANTUM_ORDER, check_map: bool = True
                   ) -> ValidationReport:
    """Verify ``Gh = ad(gamma)/(i lambda)``, that ``Gh`` is a
    ``*``-derivation, ``Theta * Theta = 0`` and ``Q^2 = 0`` on random
    bidegree-homogeneous samples, all mod ``lambda^(T+1)``."""
    n, shape = setup.lie_dim, setup.geom.shape
    theta = quantum_charge(setup, check=check_map, T=T)
    gamma = gamma_element(setup)

    def sample(ghost: Optional[int] = None) -> AlgebraElement:
        while True:
            elem = random_frame_element(shape, rng, 2 * n, poly_deg=2)
            if ghost is None:
                return elem
            parts = ghost_components(elem, n)
            if ghost in parts:
                return parts[ghost]

    def gh_inner():
        for _ in range(trials):
            phi = sample()
            expected = ghost_number(phi, n).lambda_truncate(T)
            if graded_commutator(setup, gamma, phi, False, T) != expected:
                return False
        return True

    def gh_derivation():
        for _ in range(trials):
            phi, psi = sample(), sample()
            lhs = ghost_number(quantum_star(setup, phi, psi, T), n)
            rhs = (quantum_star(setup, ghost_number(phi, n), psi, T)
                   + quantum_star(setup, phi, ghost_number(psi, n), T))
            if lhs != rhs:
                return False
        return True

    def q_squared():
        for _ in range(trials):
            phi = sample(rng.randint(-n, n))
            inner = quantum_Q(setup, theta, phi, T + 1)
            if quantum_Q(setup, theta, inner, T):
                return False
        return True

    theta_sq = quantum_star(setup, theta, theta, T)
    checks = structure_checks(setup.structure) + [
        Check('Gh(Theta) = Theta', ghost_number(theta, n) == theta),
        Check('Gh = (1/i lambda) ad(gamma)', gh_inner()),
        Check('Gh is a derivation of *', gh_derivation()),
        Check('Theta*Theta = 0', not theta_sq,
              '' if not theta_sq else '%d residual terms' %
              len(theta_sq.terms)),
        Check('Q^2 = 0', q_squared()),
    ]
    log.debug("Quantum BRST checks for %r: %s", setup.name,
              ', '.join('%s=%s' % (c.name, c.passed) for c in checks))
    return ValidationReport(checks)


# -- Classical BRST --


class ClassicalBRSTSetup:
    """Constraints ``J_1 .. J_n`` on a Darboux chart that are the first
    ``n`` members of a polynomial coordinate system.

    :param base: The Darboux chart.
    :param constraints: The ``J_a``.
    :param forward: ``u_i(x)``; must begin with the constraints.
    :param inverse: ``x_i(u)``.
    :raises CoordinateChangeError: The maps do not invert each other or
        ``forward`` does not begin with the constraints.
    """

    def __init__(self, base: ChartGeometry, constraints: List[GaussPoly],
                 forward: List[GaussPoly], inverse: List[GaussPoly],
                 name: str = ''):
        self.base, self.constraints = base, constraints
        self.forward, self.inverse = forward, inverse
        self.n = len(constraints)
        self.name = name or base.name
        R = base.ring

        if len(forward) != base.dim or len(inverse) != base.dim:
            raise CoordinateChangeError("Coordinate change needs %d forward "
                                        "and inverse components" % base.dim)
        if list(forward[:self.n]) != list(constraints):
            raise CoordinateChangeError("The forward map must begin with the "
                                        "constraints")
        for label, outer, inner in (('inverse o forward', inverse, forward),
                                    ('forward o inverse', forward, inverse)):
            if [substitute(f, inner) for f in outer] != list(R.gens):
                raise CoordinateChangeError("%s is not the identity" % label)

        pairing = pairing_matrix(R, self.n)
        self.geom = base.replace(rank=2 * self.n, aconn=None, q=pairing,
                                 qinv=[row[:] for row in pairing],
                                 name='%s (ghosts)' % self.name)

    @classmethod
    def from_json(cls, doc: Any, name: str = '') -> 'ClassicalBRSTSetup':
        """Load ``{dim_m, constraints, coord_change: {forward, inverse}}``.
        ``coord_change`` may be omitted when the constraints are the first
        momenta in order.

        :raises ParseError: Missing keys or malformed data.
        """
        if not isinstance(doc, dict):
            raise ParseError("A BRST setup must be a JSON object")
        try:
            dim = int(doc['dim_m'])
            constraints = [poly_from_json(x, dim) for x in doc['constraints']]
            change = doc.get('coord_change')
            if change is None:
                forward = inverse = swap_coordinates(dim)
            else:
                forward = matrix_of_polys(change['forward'], dim, (dim,))
                inverse = matrix_of_polys(change['inverse'], dim, (dim,))
        except (KeyError, TypeError, ValueError) as err:
            raise ParseError("Classical setup is missing %s" % err) from err
        return cls(ChartGeometry.darboux(dim // 2), constraints, forward,
                   inverse, doc.get('name', name))

    def element(self, terms: Dict[IndexSet, Any]) -> AlgebraElement:
        """Build a lambda-free element of the composite from frame sets"""
        return AlgebraElement.frames(self.geom.shape, terms, self.geom.rank)


def swap_coordinates(dim: int) -> List[GaussPoly]:
    """The involution exchanging ``x_i`` and ``p_i``"""
    gens = poly_ring(dim).gens
    m = dim // 2
    return list(gens[m:]) + list(gens[:m])


def to_adapted(setup: ClassicalBRSTSetup, f: GaussPoly) -> GaussPoly:
    """Rewrite ``f(x)`` as ``F(u)``"""
    return substitute(f, setup.inverse)


def from_adapted(setup: ClassicalBRSTSetup, F: GaussPoly) -> GaussPoly:
    """Rewrite ``F(u)`` as ``f(x)``"""
    return substitute(F, setup.forward)


def restrict(setup: ClassicalBRSTSetup, f: GaussPoly) -> GaussPoly:
    """Restrict ``f`` to the constraint surface and pull it back along the
    projection ``u -> (0, u_{n+1}, ...)``"""
    R = setup.base.ring
    F = to_adapted(setup, f)
    zeroed = substitute(F, [R.zero] * setup.n + list(R.gens[setup.n:]))
    return from_adapted(setup, zeroed)


def koszul_boundary(setup: ClassicalBRSTSetup, w: AlgebraElement
                    ) -> AlgebraElement:
    """``d = sum_a J_a i(e_{n+a})``: contract antighosts against the
    constraints"""
    n = setup.n

    def step(key, coeff):
        for a in range(n):
            sign, eset = remove_front(n + a + 1, key[2])
            if sign:
                yield ((key[0], key[1], eset, key[3]),
                       coeff * setup.constraints[a] * sign)
    return w.map_terms(step)


def koszul_homotopy(setup: ClassicalBRSTSetup, w: AlgebraElement
                    ) -> AlgebraElement:
    """The contracting homotopy ``h`` with ``h d + d h = 1 - pi`` and
    ``h^2 = 0``.

    In adapted coordinates ``h`` sends ``u^alpha b_S`` to
    ``sum_a b_a d(u^alpha)/du_a / (|alpha| + |S|)`` where ``|alpha|`` only
    counts the constraint coordinates.
    """
    n, R = setup.n, setup.base.ring

    def step(key, coeff):
        antighosts = ghost_degrees(key[2], n)[1]
        for exps, value in to_adapted(setup, coeff).items():
            weight = sum(exps[:n]) + antighosts
            if not weight:
                continue
            scale = QQ_I(QQ(1, weight), 0) * value
            for a in range(n):
                if not exps[a]:
                    continue
                sign, eset = insert_front(n + a + 1, key[2])
                if not sign:
                    continue
                lowered = exps[:a] + (exps[a] - 1,) + exps[a + 1:]
                mono = R.from_dict({lowered: scale * exps[a] * sign})
                yield ((key[0], key[1], eset, key[3]),
                       from_adapted(setup, mono))
    return w.map_terms(step)


def koszul_projection(setup: ClassicalBRSTSetup, w: AlgebraElement
                      ) -> AlgebraElement:
    """``pi``: drop antighost terms and restrict coefficients to the
    constraint surface"""
    n = setup.n

    def step(key, coeff):
        if not ghost_degrees(key[2], n)[1]:
            yield key, restrict(setup, coeff)
    return w.map_terms(step)


def coisotropy_check(setup: ClassicalBRSTSetup) -> Check:
    """``pi({J_a, J_b}) = 0``: the constraint surface is coisotropic"""
    for a, b in combinations(range(setup.n), 2):
        bracket = poisson(setup.base, setup.constraints[a],
                          setup.constraints[b])
        if restrict(setup, bracket):
            return Check('coisotropy', False, "at (a,b)=(%d,%d)" % (
                a + 1, b + 1))
    return Check('coisotropy', True)


def classical_Q(setup: ClassicalBRSTSetup, theta: AlgebraElement,
                phi: AlgebraElement) -> AlgebraElement:
    """``Q = {Theta, .}_R`` on the flat composite geometry"""
    return rothstein_bracket(setup.geom, theta, phi)


def classical_charge(setup: ClassicalBRSTSetup) -> AlgebraElement:
    """Run ``Theta_0 = J_a c^a``, ``Theta_{i+1} = -1/2 h(B_i)`` where
    ``B_i`` is the antighost-degree-``i`` part of ``{Theta, Theta}_R``.

    :raises RecursionClosureError: ``{Theta, Theta}_R`` is nonzero at the
        end, or a step breaks ghost number one.
    """
    n = setup.n
    theta = setup.element({(a + 1,): J
                           for a, J in enumerate(setup.constraints)})
    half = QQ_I(QQ(-1, 2), 0)
    for i in range(n):
        bracket = classical_Q(setup, theta, theta)
        step = koszul_homotopy(setup, antighost_component(bracket, n, i))
        if not step:
            continue
        theta = theta + step.scale(half)
        log.debug("Theta_%d: %d terms", i + 1, len(step.terms))

    if ghost_number(theta, n) != theta:
        raise RecursionClosureError("Charge left ghost number one",
                                    residual=theta)
    residual = classical_Q(setup, theta, theta)
    if residual:
        raise RecursionClosureError(
            "{Theta, Theta} does not vanish on %r (%d terms)" % (
                setup.name, len(residual.terms)), residual=residual)
    return theta


def _ghost_basis(setup: ClassicalBRSTSetup, ghost: int, max_deg: int
                 ) -> List[TermKey]:
    """Frame monomials of the given ghost number times coordinate
    monomials up to ``max_deg``"""
    n, dim = setup.n, setup.base.dim
    ghosts, antighosts = ghost_frames(n)
    framesets = []
    for g_count in range(n + 1):
        b_count = g_count - ghost
        if not 0 <= b_count <= n:
            continue
        for g_set in combinations(ghosts, g_count):
            for b_set in combinations(antighosts, b_count):
                framesets.append(g_set + b_set)
    exps = [e for d in range(max_deg + 1) for e in _exponents(dim, d)]
    return [(0, e, s, ()) for s in framesets for e in exps]


def _exponents(dim: int, degree: int) -> List[Tuple[int, ...]]:
    if dim == 1:
        return [(degree,)]
    return [(k,) + rest for k in range(degree, -1, -1)
            for rest in _exponents(dim - 1, degree - k)]


def _q_matrix(setup: ClassicalBRSTSetup, theta: AlgebraElement,
              source: List[TermKey]):
    """Images of ``source`` under ``Q`` as columns over an index of
    ``(exponents, frame set)`` pairs"""
    R, shape = setup.base.ring, setup.geom.shape
    columns = []
    index: Dict[Tuple[tuple, tuple], int] = {}
    for key in source:
        elem = AlgebraElement(shape, {(0, (0,) * shape.dim, key[2], ()):
                                      R.from_dict({key[1]: QQ_I.one})},
                              shape.rank)
        image: Dict[int, GaussRational] = {}
        for img_key, coeff in classical_Q(setup, theta, elem).terms.items():
            for exps, value in coeff.items():
                row = index.setdefault((exps, img_key[2]), len(index))
                image[row] = value
        columns.append(image)
    return columns, index


def _rank(columns: List[Dict[int, GaussRational]], rows: Sequence[int]
          ) -> int:
    """Rank of the submatrix on ``rows``"""
    if not columns or not rows:
        return 0
    data = [[col.get(r, QQ_I.zero) for col in columns] for r in rows]
    return DomainMatrix(data, (len(rows), len(columns)), QQ_I).rank()


def cohomology_probe(setup: ClassicalBRSTSetup, theta: AlgebraElement,
                     max_deg: int) -> Dict[int, int]:
    """Dimension of ``H^g`` of ``Q`` restricted to coefficients of degree
    at most ``max_deg``, for every ghost number ``g``.

    ``dim ker`` comes from the rank of ``Q`` on the bounded space; for the
    boundaries, sources go one degree higher so that degree-lowering terms
    of ``Q`` are not missed, and only the part of the image that lands back
    in the bounded space counts.
    """
    n = setup.n
    result = {}
    for ghost in range(-n, n + 1):
        source = _ghost_basis(setup, ghost, max_deg)
        cols, index = _q_matrix(setup, theta, source)
        kernel = len(source) - _rank(cols, list(index.values()))

        prev = _ghost_basis(setup, ghost - 1, max_deg + 1)
        cols, index = _q_matrix(setup, theta, prev)
        high = [row for (exps, _), row in index.items()
                if sum(exps) > max_deg]
        boundaries = (_rank(cols, list(index.values()))
                      - _rank(cols, high))
        result[ghost] = kernel - boundaries
        log.debug("Ghost number %d: kernel %d, boundaries %d", ghost,
                  kernel, boundaries)
    return result


def invariance_check(setup: ClassicalBRSTSetup, theta: AlgebraElement,
                     max_deg: int) -> Check:
    """Ghost-number-0 cocycles of bounded degree restrict to functions that
    are constant along every constraint flow on the constraint surface"""
    source = _ghost_basis(setup, 0, max_deg)
    cols, index = _q_matrix(setup, theta, source)
    R = setup.base.ring
    if index:
        data = [[col.get(r, QQ_I.zero) for col in cols]
                for r in range(len(index))]
        kernel = [[QQ_I.from_sympy(x) for x in vec] for vec in DomainMatrix(
            data, (len(index), len(cols)), QQ_I).to_Matrix().nullspace()]
    else:
        kernel = [[QQ_I.one if i == j else QQ_I.zero
                   for i in range(len(source))] for j in range(len(source))]
    for vec in kernel:
        func = R.zero
        for value, key in zip(vec, source):
            if key[2] or is_zero(value):
                continue
            func += R.from_dict({key[1]: value})
        for J in setup.constraints:
            if restrict(setup, poisson(setup.base, J, func)):
                return Check('cocycles invariant on the surface', False,
                             "flow of %s moves %s" % (J.as_expr(),
                                                      func.as_expr()))
    return Check('cocycles invariant on the surface', True)

# vim: set sw=4 sts=4 expandtab :
