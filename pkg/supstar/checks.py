"""Seeded property suites behind the ``check`` command

Each suite owns a context (the preset charts and solved Fedosov states it
needs, built once per run) and a list of named identities. A per-trial
check draws its operands from the suite's :class:`random.Random` and
returns a failure description, or :any:`None` when the identity held.
"""

__author__ = "Stephan Sokolow (deitarion/SSokolow)"
__license__ = "GNU GPL 2.0 or later"

# pylint: disable=unsubscriptable-object,wrong-import-order

import logging
from functools import wraps
from random import Random

from . import charts
from .brst import (QuantumBRSTSetup, classical_charge, classical_Q,
                   coisotropy_check, invariance_check, koszul_boundary,
                   koszul_homotopy, koszul_projection, momentum_map_defects,
                   quantum_charge, quantum_checks, quantum_star)
from .fedosov import (apply_D, build_r, extract_Mt, flat_section_check,
                      flat_star, locality_probe, r_invariants, star, taylor)
from .fibrewise import ad_over_ilambda, circ
from .geometry import curvature, nabla, validate
from .rothstein import rho_hat, rothstein_bracket
from .scalars import (GaussPoly, I_UNIT, gauss, poly_arith, poly_conj,
                      poly_partial, random_poly)
from .superalgebra import (AlgebraElement, conj, degree_map, delta,
                           delta_inv, delta_star, kernel_projection, parity,
                           random_element, random_frame_element, sigma0,
                           undeformed_mul)
from .util import SupstarError, fmt_table

# -- Type-Annotation Imports --
from typing import (Any, Callable, Dict, Iterable, List, NamedTuple,
                    Optional, Tuple)

from .fedosov import FedosovState
from .geometry import ChartGeometry

#: A per-trial identity: ``(context, rng) -> failure detail or None``
CheckFunc = Callable[[Any, Random], Optional[str]]
#: Builds a suite context, optionally around a user geometry
ContextFactory = Callable[[Optional[ChartGeometry]], Any]
# --

log = logging.getLogger(__name__)


class CheckOutcome(NamedTuple):
    """Pass count of one identity over the requested trials"""
    suite: str
    name: str
    passed: int
    trials: int
    detail: str = ''

    @property
    def ok(self) -> bool:
        """True if every trial passed"""
        return self.passed == self.trials


class SuiteReport(NamedTuple):
    """Everything one ``check`` run produced"""
    seed: int
    outcomes: List[CheckOutcome]

    @property
    def ok(self) -> bool:
        """True if every identity held on every trial"""
        return all(x.ok for x in self.outcomes)

    def rows(self) -> List[Tuple[str, str, str, str]]:
        """Rows for :func:`supstar.util.fmt_table`, grouped by suite"""
        return [(x.name, '%d/%d' % (x.passed, x.trials),
                 x.detail or ('PASS' if x.ok else 'FAIL'), x.suite)
                for x in self.outcomes]

    def __str__(self) -> str:
        return fmt_table(self.rows(), ('Identity', 'Passed', 'Result', 'Suite'),
                         group_by=3)

    def to_json(self) -> Dict[str, Any]:
        """A deterministic, JSON-serializable summary"""
        return {'seed': self.seed, 'ok': self.ok, 'checks': [
            {'suite': x.suite, 'name': x.name, 'passed': x.passed,
             'trials': x.trials, 'detail': x.detail}
            for x in self.outcomes]}


class SuiteRegistry:
    """Lookup and dispatch boilerplate for the property suites"""

    def __init__(self):
        self.contexts: Dict[str, ContextFactory] = {}
        self.checks: Dict[str, List[Tuple[str, CheckFunc, bool]]] = {}

    def __iter__(self):
        return iter(self.contexts)

    def context(self, suite: str
                ) -> Callable[[ContextFactory], ContextFactory]:
        """Decorator registering the context factory of ``suite``. The
        factory receives the user-supplied geometry or :any:`None`."""
        def decorate(func: ContextFactory) -> ContextFactory:
            self.contexts[suite] = func
            self.checks.setdefault(suite, [])
            return func
        return decorate

    def add(self, suite: str, name: str, once: bool = False
            ) -> Callable[[CheckFunc], CheckFunc]:
        """Decorator adding an identity to ``suite``.

        :param once: Run a single time regardless of the trial count (for
            deterministic identities or ones that loop internally).
        """
        def decorate(func: CheckFunc) -> CheckFunc:
            @wraps(func)
            def wrapper(ctx: Any, rng: Random) -> Optional[str]:
                try:
                    return func(ctx, rng)
                except SupstarError as err:
                    return '%s: %s' % (type(err).__name__, err)

            self.checks.setdefault(suite, []).append((name, wrapper, once))
            return func
        return decorate

    def run(self, suites: Iterable[str], trials: int, seed: int,
            geom: Optional[ChartGeometry] = None) -> SuiteReport:
        """Run the named suites, each with its own ``Random(seed)``

        :param geom: Replaces the preset geometry of the suites that take
            one.

        :raises KeyError: Unknown suite name.
        """
        outcomes = []
        for suite in suites:
            ctx = self.contexts[suite](geom)
            rng = Random(seed)
            for name, func, once in self.checks[suite]:
                count = 1 if once else trials
                passed, detail = 0, ''
                for _ in range(count):
                    failure = func(ctx, rng)
                    if failure is None:
                        passed += 1
                    elif not detail:
                        detail = failure
                outcome = CheckOutcome(suite, name, passed, count, detail)
                if not outcome.ok:
                    log.warning("%s: %s failed %d/%d (%s)", suite, name,
                                count - passed, count, detail)
                outcomes.append(outcome)
        return SuiteReport(seed, outcomes)


suites = SuiteRegistry()


def _expect(ok: bool, detail: str) -> Optional[str]:
    return None if ok else detail


def _first_failure(details: Iterable[Optional[str]]) -> Optional[str]:
    return next((x for x in details if x), None)


# -- scalars --

@suites.context('scalars')
def _scalars_context(geom: Optional[ChartGeometry]) -> List[int]:
    return [geom.dim] if geom else [2, 4]


def _polys(dim: int, rng: Random, count: int) -> List[GaussPoly]:
    return [random_poly(dim, rng) for _ in range(count)]


@suites.add('scalars', 'ring axioms')
def _ring_axioms(dims: List[int], rng: Random) -> Optional[str]:
    for dim in dims:
        a, b, c = _polys(dim, rng, 3)
        if poly_arith(poly_arith(a, b, 'mul'), c, 'mul') != poly_arith(
                a, poly_arith(b, c, 'mul'), 'mul'):
            return 'associativity (dim %d)' % dim
        if poly_arith(a, poly_arith(b, c, 'add'), 'mul') != poly_arith(
                poly_arith(a, b, 'mul'), poly_arith(a, c, 'mul'), 'add'):
            return 'distributivity (dim %d)' % dim
        if poly_arith(a, b, 'mul') != poly_arith(b, a, 'mul'):
            return 'commutativity (dim %d)' % dim
    return None


@suites.add('scalars', 'partial derivatives commute')
def _partials_commute(dims: List[int], rng: Random) -> Optional[str]:
    for dim in dims:
        a = random_poly(dim, rng, max_deg=4, nterms=4)
        i, j = rng.randint(1, dim), rng.randint(1, dim)
        if (poly_partial(poly_partial(a, i), j)
                != poly_partial(poly_partial(a, j), i)):
            return '(i,j)=(%d,%d)' % (i, j)
    return None


@suites.add('scalars', 'conj is an involutive ring homomorphism')
def _conj_homomorphism(dims: List[int], rng: Random) -> Optional[str]:
    for dim in dims:
        a, b = _polys(dim, rng, 2)
        if poly_conj(poly_conj(a)) != a:
            return 'involution'
        if poly_conj(a + b) != poly_conj(a) + poly_conj(b):
            return 'sum'
        if poly_conj(a * b) != poly_conj(a) * poly_conj(b):
            return 'product'
    return None


# -- algebra --

class AlgebraContext(NamedTuple):
    """The charts under test and the truncation random elements use"""
    geoms: List[ChartGeometry]
    trunc: int


class AlgebraCase(NamedTuple):
    """One chart of an :class:`AlgebraContext`"""
    geom: ChartGeometry
    trunc: int


@suites.context('algebra')
def _algebra_context(geom: Optional[ChartGeometry]) -> AlgebraContext:
    geoms = [geom] if geom else [charts.darboux_plane(),
                                 charts.curved_plane()]
    return AlgebraContext(geoms, 5)


def _on_each_chart(func: CheckFunc) -> CheckFunc:
    """Run an algebra identity on every chart of the context, reporting
    the first chart it fails on"""
    @wraps(func)
    def wrapper(ctx: AlgebraContext, rng: Random) -> Optional[str]:
        for g in ctx.geoms:
            failure = func(AlgebraCase(g, ctx.trunc), rng)
            if failure:
                return '%s: %s' % (g.name, failure)
        return None
    return wrapper


def _element(ctx: Any, rng: Random, parities=None) -> AlgebraElement:
    return random_element(ctx.geom.shape, rng, ctx.trunc, nterms=3,
                          parities=parities)


def _parities(rng: Random) -> Tuple[int, int]:
    return rng.randint(0, 1), rng.randint(0, 1)


@suites.add('algebra', 'delta^2 = 0')
@_on_each_chart
def _delta_squared(ctx: AlgebraCase, rng: Random) -> Optional[str]:
    return _expect(not delta(delta(_element(ctx, rng))), 'nonzero')


@suites.add('algebra', 'delta*^2 = 0')
@_on_each_chart
def _delta_star_squared(ctx: AlgebraCase, rng: Random) -> Optional[str]:
    return _expect(not delta_star(delta_star(_element(ctx, rng))),
                   'nonzero')


@suites.add('algebra', 'delta delta^-1 + delta^-1 delta + sigma_0 = id')
@_on_each_chart
def _homotopy(ctx: AlgebraCase, rng: Random) -> Optional[str]:
    F = _element(ctx, rng)
    total = delta(delta_inv(F)) + delta_inv(delta(F)) + sigma0(F)
    return _expect(total == F, 'residual')


@suites.add('algebra', 'Ker delta in form degree 0 is C')
@_on_each_chart
def _kernel(ctx: AlgebraCase, rng: Random) -> Optional[str]:
    G = _element(ctx, rng).select(lambda key: not key[3])
    return _expect((not delta(G)) == (G == kernel_projection(G)),
                   'kernel and C differ')


@suites.add('algebra', 'o is associative')
@_on_each_chart
def _associative(ctx: AlgebraCase, rng: Random) -> Optional[str]:
    F, G, H = (_element(ctx, rng) for _ in range(3))
    g = ctx.geom
    return _expect(circ(g, circ(g, F, G), H) == circ(g, F, circ(g, G, H)),
                   'associator nonzero')


@suites.add('algebra', 'o at lambda^0 is the undeformed product')
@_on_each_chart
def _lambda_zero(ctx: AlgebraCase, rng: Random) -> Optional[str]:
    F, G = (_element(ctx, rng).lambda_truncate(0) for _ in range(2))
    return _expect(circ(ctx.geom, F, G).lambda_truncate(0)
                   == undeformed_mul(F, G, ctx.trunc), 'differs')


@suites.add('algebra', 'Deg and deg_a are derivations of o')
@_on_each_chart
def _derivations(ctx: AlgebraCase, rng: Random) -> Optional[str]:
    F, G = _element(ctx, rng), _element(ctx, rng)
    g = ctx.geom
    for which in ('Deg', 'a'):
        lhs = degree_map(circ(g, F, G), which)
        rhs = (circ(g, degree_map(F, which), G)
               + circ(g, F, degree_map(G, which)))
        if lhs != rhs:
            return which
    return None


@suites.add('algebra', 'P_E is an automorphism of o')
@_on_each_chart
def _parity_e(ctx: AlgebraCase, rng: Random) -> Optional[str]:
    F, G = _element(ctx, rng), _element(ctx, rng)
    g = ctx.geom
    return _expect(parity(circ(g, F, G), 'E')
                   == circ(g, parity(F, 'E'), parity(G, 'E')), 'differs')


@suites.add('algebra', 'P_lambda and C are graded antiautomorphisms of o')
@_on_each_chart
def _antiautomorphisms(ctx: AlgebraCase, rng: Random) -> Optional[str]:
    p1, p2 = _parities(rng), _parities(rng)
    F, G = _element(ctx, rng, p1), _element(ctx, rng, p2)
    sign = -1 if (p1[0] * p2[0] + p1[1] * p2[1]) % 2 else 1
    g = ctx.geom
    for label, op in (('P_lambda', lambda x: parity(x, 'lambda')),
                      ('C', conj)):
        if op(circ(g, F, G)) != circ(g, op(G), op(F)).scale(sign):
            return label
    return None


@suites.add('algebra', 'delta is a superderivation of o')
@_on_each_chart
def _delta_derivation(ctx: AlgebraCase, rng: Random) -> Optional[str]:
    p1 = _parities(rng)
    F, G = _element(ctx, rng, p1), _element(ctx, rng)
    g = ctx.geom
    lhs = delta(circ(g, F, G))
    rhs = (circ(g, delta(F), G)
           + circ(g, F, delta(G)).scale(-1 if p1[1] else 1))
    return _expect(lhs == rhs, 'differs')


@suites.add('algebra', '(i/lambda)[1, F] = 0')
@_on_each_chart
def _unit_central(ctx: AlgebraCase, rng: Random) -> Optional[str]:
    F = _element(ctx, rng)
    one = AlgebraElement.function(ctx.geom.shape, ctx.geom.ring.one,
                                  ctx.trunc)
    return _expect(not ad_over_ilambda(ctx.geom, one, F), 'nonzero')


@suites.add('algebra', 'delta delta* + delta* delta = deg_s + deg_a')
@_on_each_chart
def _laplacian(ctx: AlgebraCase, rng: Random) -> Optional[str]:
    F = _element(ctx, rng)
    lhs = delta(delta_star(F)) + delta_star(delta(F))
    return _expect(lhs == degree_map(F, 's') + degree_map(F, 'a'),
                   'differs')


@suites.add('algebra', 'the undeformed product is supercommutative')
@_on_each_chart
def _supercommutative(ctx: AlgebraCase, rng: Random) -> Optional[str]:
    p1, p2 = _parities(rng), _parities(rng)
    F, G = _element(ctx, rng, p1), _element(ctx, rng, p2)
    sign = -1 if (p1[0] * p2[0] + p1[1] * p2[1]) % 2 else 1
    return _expect(undeformed_mul(G, F) == undeformed_mul(F, G).scale(sign),
                   'parities %r, %r' % (p1, p2))


@suites.add('algebra', 'degree maps are derivations of the undeformed '
                       'product')
@_on_each_chart
def _undeformed_derivations(ctx: AlgebraCase, rng: Random
                            ) -> Optional[str]:
    F, G = _element(ctx, rng), _element(ctx, rng)
    for which in ('s', 'E', 'a', 'lambda', 'Deg'):
        lhs = degree_map(undeformed_mul(F, G), which)
        rhs = (undeformed_mul(degree_map(F, which), G)
               + undeformed_mul(F, degree_map(G, which)))
        if lhs != rhs:
            return which
    return None


@suites.add('algebra', 'P_E and P_lambda are automorphisms of the '
                       'undeformed product')
@_on_each_chart
def _undeformed_parities(ctx: AlgebraCase, rng: Random) -> Optional[str]:
    F, G = _element(ctx, rng), _element(ctx, rng)
    for which in ('E', 'lambda'):
        if parity(undeformed_mul(F, G), which) != undeformed_mul(
                parity(F, which), parity(G, which)):
            return 'P_' + which
    return None


# -- geometry --

class GeometryContext(NamedTuple):
    """Every geometry preset, plus the ones with curvature to exercise"""
    presets: List[ChartGeometry]
    curved: List[ChartGeometry]
    trunc: int


@suites.context('geometry')
def _geometry_context(geom: Optional[ChartGeometry]) -> GeometryContext:
    curved = ([geom] if geom else
              [charts.curved_plane(), charts.metric_example()])
    return GeometryContext(
        [charts.darboux_plane(), charts.curved_plane_flat_bundle(),
         charts.hess_example()] + curved, curved, 5)


@suites.add('geometry', 'presets validate', once=True)
def _presets_validate(ctx: GeometryContext, rng: Random) -> Optional[str]:
    bad = [g.name for g in ctx.presets if not validate(g).ok]
    return _expect(not bad, ', '.join(bad))


@suites.add('geometry', 'delta R = 0 and nabla R = 0', once=True)
def _bianchi(ctx: GeometryContext, rng: Random) -> Optional[str]:
    for g in ctx.curved:
        R = curvature(g, trunc=ctx.trunc).Rtotal
        if delta(R) or nabla(g, R):
            return g.name
    return None


@suites.add('geometry', 'nabla^2 = (i/lambda) ad(R)')
def _nabla_squared(ctx: GeometryContext, rng: Random) -> Optional[str]:
    for g in ctx.curved:
        F = random_element(g.shape, rng, ctx.trunc, nterms=3)
        R = curvature(g, trunc=ctx.trunc + 2).Rtotal
        if nabla(g, nabla(g, F)) != ad_over_ilambda(g, R, F, ctx.trunc):
            return g.name
    return None


@suites.add('geometry', 'nabla is a superderivation of o')
def _nabla_derivation(ctx: GeometryContext, rng: Random) -> Optional[str]:
    for g in ctx.curved:
        p1 = _parities(rng)
        F = random_element(g.shape, rng, ctx.trunc, nterms=3, parities=p1)
        G = random_element(g.shape, rng, ctx.trunc, nterms=3)
        lhs = nabla(g, circ(g, F, G))
        rhs = (circ(g, nabla(g, F), G)
               + circ(g, F, nabla(g, G)).scale(-1 if p1[1] else 1))
        if lhs != rhs:
            return g.name
    return None


@suites.add('geometry', 'delta nabla + nabla delta = 0')
def _delta_nabla(ctx: GeometryContext, rng: Random) -> Optional[str]:
    for g in ctx.presets:
        F = random_element(g.shape, rng, ctx.trunc, nterms=3)
        if delta(nabla(g, F)) + nabla(g, delta(F)):
            return g.name
    return None


@suites.add('geometry', 'R is fixed by P_E, P_lambda and C', once=True)
def _curvature_fixed(ctx: GeometryContext, rng: Random) -> Optional[str]:
    for g in ctx.curved:
        R = curvature(g, trunc=ctx.trunc).Rtotal
        for label, op in (('P_E', lambda x: parity(x, 'E')),
                          ('P_lambda', lambda x: parity(x, 'lambda')),
                          ('C', conj)):
            if op(R) != R:
                return '%s: %s' % (g.name, label)
    return None


# -- fedosov --

class FedosovContext(NamedTuple):
    """Solved states for the suite geometry and its flat-bundle variant,
    deep enough for lambda-order ``T``, plus the Moyal plane and a deeper
    state for the per-order symmetries of ``M_t``"""
    state: FedosovState
    flat_state: FedosovState
    moyal_state: FedosovState
    T: int
    deep_state: FedosovState
    deep_T: int


#: Highest lambda-order at which the symmetry and realness of ``M_t`` are
#: checked
SYMMETRY_ORDER = 4


def fedosov_context(geom: ChartGeometry, flat: ChartGeometry, T: int = 2,
                    deep_T: int = SYMMETRY_ORDER) -> FedosovContext:
    """Solve every state the fedosov suite needs"""
    return FedosovContext(build_r(geom, 2 * T + geom.rank),
                          build_r(flat, 2 * T + flat.rank),
                          build_r(charts.darboux(1), 2), T,
                          build_r(geom, 2 * deep_T + geom.rank), deep_T)


@suites.context('fedosov')
def _fedosov_context(geom: Optional[ChartGeometry]) -> FedosovContext:
    geom = geom or charts.curved_plane()
    if geom.has_constant_metric():
        flat = geom.replace(aconn=None, name="%s (flat bundle)" % geom.name)
    else:
        flat = charts.curved_plane_flat_bundle()
    return fedosov_context(geom, flat)


def _section(st: FedosovState, rng: Random, degree: Optional[int] = None,
             real: bool = False) -> AlgebraElement:
    return random_frame_element(
        st.geom.shape, rng, st.K,
        degrees=None if degree is None else [degree], real=real)


def _homogeneous(st: FedosovState, rng: Random
                 ) -> Tuple[AlgebraElement, int]:
    degree = rng.randint(0, st.geom.rank)
    return _section(st, rng, degree), degree


@suites.add('fedosov', 'r satisfies its defining identities', once=True)
def _r_invariants(ctx: FedosovContext, rng: Random) -> Optional[str]:
    failed = [c.name for c in r_invariants(ctx.state) if not c.passed]
    return _expect(not failed, ', '.join(failed))


@suites.add('fedosov', 'D^2 = 0')
def _d_squared(ctx: FedosovContext, rng: Random) -> Optional[str]:
    st = ctx.state
    w = random_element(st.geom.shape, rng, st.K, nterms=3)
    return _expect(not apply_D(st, apply_D(st, w)), 'nonzero')


@suites.add('fedosov', 'Taylor series are the D-flat sections')
def _flat_sections(ctx: FedosovContext, rng: Random) -> Optional[str]:
    st = ctx.state
    checks = flat_section_check(st, _section(st, rng), _section(st, rng))
    return _first_failure(c.name for c in checks if not c.passed)


@suites.add('fedosov', 'tau commutes with P_E, P_lambda and C')
def _tau_symmetries(ctx: FedosovContext, rng: Random) -> Optional[str]:
    st = ctx.state
    phi = _section(st, rng) + _section(st, rng).mul_lambda().with_trunc(st.K)
    tau = taylor(st, phi)
    for label, op in (('P_E', lambda x: parity(x, 'E')),
                      ('P_lambda', lambda x: parity(x, 'lambda')),
                      ('C', conj)):
        if taylor(st, op(phi)) != op(tau):
            return label
    return None


@suites.add('fedosov', 'tau is C[[lambda]]-linear')
def _tau_linear(ctx: FedosovContext, rng: Random) -> Optional[str]:
    st = ctx.state
    phi, psi = _section(st, rng), _section(st, rng)
    c = gauss(rng.randint(-3, 3), rng.randint(-3, 3))
    combo = phi.scale(c) + psi.mul_lambda().with_trunc(st.K)
    expected = taylor(st, phi).scale(c) + taylor(st, psi).mul_lambda()
    return _expect(taylor(st, combo) == expected, 'differs')


@suites.add('fedosov', 'star is associative')
def _star_associative(ctx: FedosovContext, rng: Random) -> Optional[str]:
    st, T = ctx.state, ctx.T
    phi, psi, chi = (_section(st, rng) for _ in range(3))
    lhs = star(st, star(st, phi, psi, T), chi, T)
    rhs = star(st, phi, star(st, psi, chi, T), T)
    return _expect(lhs == rhs, 'associator nonzero through lambda^%d' % T)


@suites.add('fedosov', 'M_0 is the undeformed product')
def _m0(ctx: FedosovContext, rng: Random) -> Optional[str]:
    st = ctx.state
    phi, psi = _section(st, rng), _section(st, rng)
    M0 = extract_Mt(star(st, phi, psi, 0), 0)[0]
    return _expect(M0 == undeformed_mul(phi, psi, st.K), 'differs')


@suites.add('fedosov', 'M_t(psi, phi) = (-1)^t (-1)^(d1 d2) M_t(phi, psi)')
def _symmetry(ctx: FedosovContext, rng: Random) -> Optional[str]:
    st, T = ctx.deep_state, ctx.deep_T
    (phi, d1), (psi, d2) = _homogeneous(st, rng), _homogeneous(st, rng)
    forward = extract_Mt(star(st, phi, psi, T), T)
    backward = extract_Mt(star(st, psi, phi, T), T)
    for t in range(T + 1):
        sign = -1 if (t + d1 * d2) % 2 else 1
        if backward[t] != forward[t].scale(sign):
            return 't=%d' % t
    return None


@suites.add('fedosov', '1 * phi = phi * 1 = phi')
def _unit(ctx: FedosovContext, rng: Random) -> Optional[str]:
    st, T = ctx.state, ctx.T
    phi = _section(st, rng)
    one = AlgebraElement.function(st.geom.shape, st.geom.ring.one, st.K)
    return _expect(star(st, one, phi, T) == phi
                   and star(st, phi, one, T) == phi, 'M_t(1, .) nonzero')


@suites.add('fedosov', 'M_1 equals the Rothstein bracket')
def _m1_rothstein(ctx: FedosovContext, rng: Random) -> Optional[str]:
    st = ctx.state
    phi, psi = _section(st, rng), _section(st, rng)
    M1 = extract_Mt(star(st, phi, psi, 1), 1)[1]
    return _expect(M1 == rothstein_bracket(st.geom, phi, psi), 'differs')


@suites.add('fedosov', 'M_1 is a super-Poisson bracket')
def _super_poisson(ctx: FedosovContext, rng: Random) -> Optional[str]:
    st = ctx.state
    g, rank = st.geom, st.geom.rank
    (phi, d1), (psi, d2) = _homogeneous(st, rng), _homogeneous(st, rng)
    chi = _section(st, rng)
    sign = -1 if d1 * d2 % 2 else 1

    def br(a, b):
        return rothstein_bracket(g, a.with_trunc(rank), b.with_trunc(rank))

    def mul(a, b):
        return undeformed_mul(a, b, rank)

    if br(psi, phi) != br(phi, psi).scale(-sign):
        return 'antisymmetry'
    if br(phi, mul(psi, chi)) != (mul(br(phi, psi), chi)
                                  + mul(psi, br(phi, chi)).scale(sign)):
        return 'Leibniz rule'
    if br(phi, br(psi, chi)) != (br(br(phi, psi), chi)
                                 + br(psi, br(phi, chi)).scale(sign)):
        return 'Jacobi identity'
    return None


@suites.add('fedosov', 'rho-hat - R-hat = 1/2 rho-hat . rho-hat', once=True)
def _rho_hat(ctx: FedosovContext, rng: Random) -> Optional[str]:
    rho_hat(ctx.state)
    return None


@suites.add('fedosov', 'C(phi * psi) = (-1)^(d1 d2) C(psi) * C(phi)')
def _realness(ctx: FedosovContext, rng: Random) -> Optional[str]:
    st, T = ctx.deep_state, ctx.deep_T
    (phi, d1), (psi, d2) = _homogeneous(st, rng), _homogeneous(st, rng)
    lhs = conj(star(st, phi, psi, T))
    rhs = star(st, conj(psi), conj(phi), T).scale(-1 if d1 * d2 % 2 else 1)
    return _expect(lhs == rhs, 'differs')


@suites.add('fedosov', 'M_1 is local')
def _locality(ctx: FedosovContext, rng: Random) -> Optional[str]:
    st = ctx.state
    point = [rng.randint(-1, 1) for _ in range(st.geom.dim)]
    check = locality_probe(st, _section(st, rng), _section(st, rng), 1,
                           point)
    return _expect(check.passed, check.detail)


@suites.add('fedosov', 'flat bundle: star = *_F (x) *_Cl')
def _flat_factorization(ctx: FedosovContext, rng: Random) -> Optional[str]:
    st, T = ctx.flat_state, ctx.T
    phi, psi = _section(st, rng), _section(st, rng)
    return _expect(star(st, phi, psi, T) == flat_star(st.geom, phi, psi, T),
                   'differs')


@suites.add('fedosov', 'Moyal: x * p - p * x = i lambda', once=True)
def _moyal(ctx: FedosovContext, rng: Random) -> Optional[str]:
    st = ctx.moyal_state
    shape, R = st.geom.shape, st.geom.ring
    x, p = (AlgebraElement.function(shape, v, st.K) for v in R.gens)
    comm = star(st, x, p, 1) - star(st, p, x, 1)
    return _expect(comm == AlgebraElement.monomial(shape, I_UNIT, t=1,
                                                   trunc=st.K), 'differs')


# -- brst --

class BRSTContext(NamedTuple):
    """Quantum setups with their negative controls, and classical setups
    with their charges"""
    quantum: List[QuantumBRSTSetup]
    corrupted: List[QuantumBRSTSetup]
    classical: List[Tuple[Any, AlgebraElement]]


def corrupted_setups() -> List[QuantumBRSTSetup]:
    """Momentum maps that break the quantum momentum map condition: a
    translated ``J_2`` and doubled structure constants"""
    plane = charts.brst_quantum_plane()
    x1 = plane.base.ring.gens[0]
    shifted = QuantumBRSTSetup(plane.base, plane.structure,
                               [plane.qmm[0], [plane.qmm[1][0] + x1]],
                               name='plane with J_2 + x1')
    affine = charts.brst_quantum_affine()
    doubled = [[[f + f for f in row] for row in plane_]
               for plane_ in affine.structure]
    return [shifted, QuantumBRSTSetup(affine.base, doubled, affine.qmm,
                                      name='affine with doubled f')]


@suites.context('brst')
def _brst_context(geom: Optional[ChartGeometry]) -> BRSTContext:
    classical = []
    for setup in (charts.brst_classical_abelian(),
                  charts.brst_classical_single(),
                  charts.brst_classical_affine()):
        classical.append((setup, classical_charge(setup)))
    return BRSTContext(
        [charts.brst_quantum_abelian(), charts.brst_quantum_so2(),
         charts.brst_quantum_affine()], corrupted_setups(), classical)


@suites.add('brst', 'quantum: Gh, Theta * Theta = 0 and Q^2 = 0')
def _quantum(ctx: BRSTContext, rng: Random) -> Optional[str]:
    for setup in ctx.quantum:
        report = quantum_checks(setup, rng, trials=1)
        if not report.ok:
            return '%s: %s' % (setup.name, ', '.join(
                c.name for c in report.failures()))
    return None


@suites.add('brst', 'quantum: broken momentum maps are detected', once=True)
def _quantum_negative(ctx: BRSTContext, rng: Random) -> Optional[str]:
    for setup in ctx.corrupted:
        if all(momentum_map_defects(setup).values()):
            return '%s passed the momentum map check' % setup.name
        theta = quantum_charge(setup, check=False)
        if not quantum_star(setup, theta, theta):
            return '%s has Theta * Theta = 0' % setup.name
    return None


@suites.add('brst', 'classical: constraints are coisotropic', once=True)
def _coisotropic(ctx: BRSTContext, rng: Random) -> Optional[str]:
    return _first_failure(
        setup.name for setup, _ in ctx.classical
        if not coisotropy_check(setup).passed)


@suites.add('brst', 'classical: Koszul homotopy')
def _koszul(ctx: BRSTContext, rng: Random) -> Optional[str]:
    for setup, _ in ctx.classical:
        w = random_frame_element(setup.geom.shape, rng, setup.geom.rank)
        d, h = koszul_boundary, koszul_homotopy
        if d(setup, d(setup, w)):
            return '%s: d^2' % setup.name
        if h(setup, h(setup, w)):
            return '%s: h^2' % setup.name
        if (h(setup, d(setup, w)) + d(setup, h(setup, w))
                != w - koszul_projection(setup, w)):
            return '%s: hd + dh' % setup.name
    return None


@suites.add('brst', 'classical: Q^2 = 0')
def _classical_q(ctx: BRSTContext, rng: Random) -> Optional[str]:
    for setup, theta in ctx.classical:
        w = random_frame_element(setup.geom.shape, rng, setup.geom.rank)
        if classical_Q(setup, theta, classical_Q(setup, theta, w)):
            return setup.name
    return None


@suites.add('brst', 'classical: cocycles are invariant', once=True)
def _invariance(ctx: BRSTContext, rng: Random) -> Optional[str]:
    return _first_failure(
        check.detail for check in (invariance_check(setup, theta, 1)
                                   for setup, theta in ctx.classical)
        if not check.passed)

# vim: set sw=4 sts=4 expandtab :
