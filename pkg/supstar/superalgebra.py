"""The graded Fedosov algebra W (x) Lambda and its undeformed structure

An :class:`AlgebraElement` is a finite sum of terms

    c(x) * lambda^t * y^mu * e^S * dx^A

keyed by ``(t, mu, eset, aset)`` where ``mu`` is an exponent vector over the
chart coordinates (the symmetric factor), ``eset`` an ascending tuple of
frame indices of E* and ``aset`` an ascending tuple of coordinate indices for
the form factor. Indices inside ``eset`` and ``aset`` are 1-based; ``mu`` is
a plain tuple indexed from 0.

Every element carries a truncation order ``trunc`` and stands for its class
modulo terms of total degree ``Deg = 2t + |mu| + |eset|`` above it. Sums take
the smaller truncation, and each operation below documents how it moves the
truncation so that callers always know which degrees are exact.

Sign conventions: the two Grassmann factors multiply independently (no cross
sign between E-forms and ordinary forms), wedging and insertion always act at
the front of a factor.
"""

__author__ = "Stephan Sokolow (deitarion/SSokolow)"
__license__ = "GNU GPL 2.0 or later"

# pylint: disable=unsubscriptable-object,wrong-import-order

from bisect import bisect_left
from collections import namedtuple
from fractions import Fraction

from sympy.polys.domains import QQ, QQ_I

from .scalars import (poly_conj, poly_from_json, poly_ring, poly_to_json,
                      random_poly)
from .util import DimensionError, LambdaDivisionError, ParseError

# -- Type-Annotation Imports --
from random import Random
from typing import (Any, Callable, Dict, Iterable, Iterator, Optional,
                    Sequence, Tuple, Union)

from .scalars import GaussPoly, GaussRational

IndexSet = Tuple[int, ...]
TermKey = Tuple[int, Tuple[int, ...], IndexSet, IndexSet]
Scalar = Union[int, Fraction, GaussRational, GaussPoly]
# --

#: Names accepted by :func:`degree_map`
DEGREE_NAMES = ('s', 'E', 'a', 'lambda', 'Deg')


class Shape(namedtuple('Shape', 'dim rank')):
    """Chart dimension ``2m`` and bundle rank ``n`` shared by all operands"""
    __slots__ = ()

    @property
    def ring(self):
        """The coefficient ring of this chart"""
        return poly_ring(self.dim)


def key_degree(key: TermKey) -> int:
    """Total degree ``Deg = 2t + |mu| + |eset|`` of a term key"""
    return 2 * key[0] + sum(key[1]) + len(key[2])


def merge_sign(left: IndexSet, right: IndexSet) -> Tuple[int, IndexSet]:
    """Sign and sorted union for ``e^left ^ e^right`` (0 on overlap).

    .. doctest::

        >>> merge_sign((2,), (1,))
        (-1, (1, 2))
        >>> merge_sign((1, 3), (2,))
        (-1, (1, 2, 3))
        >>> merge_sign((1,), (1, 2))
        (0, ())
    """
    if set(left) & set(right):
        return 0, ()
    inversions = sum(1 for a in left for b in right if a > b)
    return (-1 if inversions % 2 else 1), tuple(sorted(left + right))


def insert_front(idx: int, iset: IndexSet) -> Tuple[int, IndexSet]:
    """Sign and result of wedging basis element ``idx`` onto the front"""
    if idx in iset:
        return 0, iset
    pos = bisect_left(iset, idx)
    return (-1 if pos % 2 else 1), iset[:pos] + (idx,) + iset[pos:]


def remove_front(idx: int, iset: IndexSet) -> Tuple[int, IndexSet]:
    """Sign and result of the interior product with the dual of ``idx``"""
    if idx not in iset:
        return 0, iset
    pos = iset.index(idx)
    return (-1 if pos % 2 else 1), iset[:pos] + iset[pos + 1:]


def _as_coeff(ring, value: Scalar):
    """Lift a scalar to the coefficient ring"""
    if isinstance(value, Fraction):
        value = QQ_I(QQ(value.numerator, value.denominator), 0)
    return ring.ring_new(value) if not hasattr(value, 'ring') else value


class AlgebraElement:
    """A truncated element of the Fedosov algebra.

    :param shape: Chart dimension and bundle rank.
    :param terms: Mapping of term keys to coefficient polynomials. Zero
        coefficients and terms above ``trunc`` are dropped.
    :param trunc: The maximal retained total degree.
    """
    __slots__ = ('shape', 'terms', 'trunc')

    def __init__(self, shape: Shape, terms: Optional[Dict[TermKey, Any]] =
                 None, trunc: int = 0):
        self.shape = shape
        self.trunc = trunc
        self.terms: Dict[TermKey, GaussPoly] = {
            key: coeff for key, coeff in (terms or {}).items()
            if coeff and key_degree(key) <= trunc}

    # -- Construction --

    @classmethod
    def zero(cls, shape: Shape, trunc: int) -> 'AlgebraElement':
        """The zero element"""
        return cls(shape, {}, trunc)

    @classmethod
    def monomial(cls, shape: Shape, coeff: Scalar = 1, t: int = 0,
                 mu: Union[None, Sequence[int], Dict[int, int]] = None,
                 eset: Iterable[int] = (), aset: Iterable[int] = (),
                 trunc: int = 8) -> 'AlgebraElement':
        """Build a single term.

        :param mu: Either a full exponent vector or a dict mapping 1-based
            coordinate indices to exponents.
        :param eset: E-frame indices (any order; the sign of sorting them
            is applied).
        :param aset: Form indices (any order; sign applied likewise).
        """
        if mu is None:
            mu = (0,) * shape.dim
        elif isinstance(mu, dict):
            vec = [0] * shape.dim
            for idx, power in mu.items():
                vec[idx - 1] += power
            mu = tuple(vec)
        mu = tuple(mu)
        if len(mu) != shape.dim:
            raise DimensionError("Symmetric multi-index %r has the wrong "
                                 "length for dimension %d" % (mu, shape.dim))

        sign = 1
        sorted_sets = []
        for raw, bound in ((tuple(eset), shape.rank), (tuple(aset),
                                                      shape.dim)):
            result: IndexSet = ()
            for idx in reversed(raw):
                if not 1 <= idx <= bound:
                    raise DimensionError("Index %r out of range 1..%d" % (
                        idx, bound))
                step, result = insert_front(idx, result)
                sign *= step
            sorted_sets.append(result)

        coeff = _as_coeff(shape.ring, coeff)
        return cls(shape, {(t, mu, sorted_sets[0], sorted_sets[1]):
                           coeff * sign}, trunc)

    @classmethod
    def function(cls, shape: Shape, poly: GaussPoly, trunc: int
                 ) -> 'AlgebraElement':
        """Embed a coefficient function as a degree-0 element"""
        return cls.monomial(shape, poly, trunc=trunc)

    @classmethod
    def frames(cls, shape: Shape, components: Dict[IndexSet, Scalar],
               trunc: int) -> 'AlgebraElement':
        """Build a C-type element ``sum f_S e^S`` from a map of frame index
        sets to coefficients"""
        result = cls.zero(shape, trunc)
        for eset, coeff in components.items():
            result = result + cls.monomial(shape, coeff, eset=eset,
                                           trunc=trunc)
        return result

    # -- Arithmetic --

    def _check(self, other: 'AlgebraElement'):
        if self.shape != other.shape:
            raise DimensionError("Shape mismatch: %r vs %r" % (
                self.shape, other.shape))

    def __add__(self, other: 'AlgebraElement') -> 'AlgebraElement':
        self._check(other)
        terms = dict(self.terms)
        for key, coeff in other.terms.items():
            terms[key] = terms[key] + coeff if key in terms else coeff
        return AlgebraElement(self.shape, terms, min(self.trunc, other.trunc))

    def __neg__(self) -> 'AlgebraElement':
        return AlgebraElement(self.shape, {k: -c for k, c in
                                           self.terms.items()}, self.trunc)

    def __sub__(self, other: 'AlgebraElement') -> 'AlgebraElement':
        return self + (-other)

    def __eq__(self, other: object) -> bool:
        """Compare as classes modulo the smaller truncation"""
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        if self.shape != other.shape:
            return False
        return not (self - other).terms

    __hash__ = None  # type: ignore

    def __repr__(self) -> str:
        return "AlgebraElement(%r, <%d terms>, trunc=%d)" % (
            self.shape, len(self.terms), self.trunc)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __iter__(self) -> Iterator[Tuple[TermKey, GaussPoly]]:
        return iter(sorted(self.terms.items()))

    def scale(self, factor: Scalar) -> 'AlgebraElement':
        """Multiply every coefficient by a scalar or a function"""
        factor = _as_coeff(self.shape.ring, factor)
        return AlgebraElement(self.shape, {k: c * factor for k, c in
                                           self.terms.items()}, self.trunc)

    def map_terms(self, func: Callable[[TermKey, GaussPoly],
                                       Iterable[Tuple[TermKey, GaussPoly]]],
                  trunc: Optional[int] = None) -> 'AlgebraElement':
        """Apply a term-level linear map and collect the results"""
        out: Dict[TermKey, GaussPoly] = {}
        for key, coeff in self.terms.items():
            for new_key, new_coeff in func(key, coeff):
                out[new_key] = (out[new_key] + new_coeff if new_key in out
                                else new_coeff)
        return AlgebraElement(self.shape, out,
                              self.trunc if trunc is None else trunc)

    def select(self, pred: Callable[[TermKey], bool]) -> 'AlgebraElement':
        """Keep only the terms whose key satisfies ``pred``"""
        return AlgebraElement(self.shape, {k: c for k, c in self.terms.items()
                                           if pred(k)}, self.trunc)

    # -- Truncation and lambda bookkeeping --

    def with_trunc(self, trunc: int) -> 'AlgebraElement':
        """Same terms under a new truncation order (terms above it drop)"""
        return AlgebraElement(self.shape, self.terms, trunc)

    def part(self, degree: int) -> 'AlgebraElement':
        """The homogeneous component of total degree ``degree``"""
        return self.select(lambda key: key_degree(key) == degree)

    def max_degree(self) -> int:
        """Largest total degree present, -1 for zero"""
        return max((key_degree(k) for k in self.terms), default=-1)

    def lambda_coefficient(self, t: int) -> 'AlgebraElement':
        """The coefficient of ``lambda^t`` as a lambda-free element"""
        return AlgebraElement(
            self.shape, {(0,) + k[1:]: c for k, c in self.terms.items()
                         if k[0] == t}, self.trunc - 2 * t)

    def lambda_truncate(self, order: int) -> 'AlgebraElement':
        """Drop every term with lambda-power above ``order``"""
        return self.select(lambda key: key[0] <= order)

    def divide_lambda(self) -> 'AlgebraElement':
        """Divide by the formal parameter.

        :raises LambdaDivisionError: A term carries no factor of lambda.
        """
        terms = {}
        for key, coeff in self.terms.items():
            if key[0] < 1:
                raise LambdaDivisionError(
                    "Term %r has no factor of lambda to divide by" % (key,),
                    term=key)
            terms[(key[0] - 1,) + key[1:]] = coeff
        return AlgebraElement(self.shape, terms, self.trunc - 2)

    def mul_lambda(self, power: int = 1) -> 'AlgebraElement':
        """Multiply by ``lambda^power``"""
        return AlgebraElement(
            self.shape, {(k[0] + power,) + k[1:]: c
                         for k, c in self.terms.items()},
            self.trunc + 2 * power)

    def homogeneous_parts(self) -> Dict[Tuple[int, int], 'AlgebraElement']:
        """Split into components of definite (E-parity, form-degree parity)"""
        parts: Dict[Tuple[int, int], Dict[TermKey, GaussPoly]] = {}
        for key, coeff in self.terms.items():
            parts.setdefault((len(key[2]) % 2, len(key[3]) % 2), {}
                             )[key] = coeff
        return {p: AlgebraElement(self.shape, t, self.trunc)
                for p, t in parts.items()}

    # -- Serialization --

    def to_json(self) -> Dict[str, Any]:
        """Serialize as ``{trunc, terms: [{t, mu, eset, aset, coeff}]}``"""
        return {'trunc': self.trunc, 'terms': [
            {'t': key[0], 'mu': list(key[1]), 'eset': list(key[2]),
             'aset': list(key[3]), 'coeff': poly_to_json(coeff)}
            for key, coeff in self]}

    @classmethod
    def from_json(cls, shape: Shape, doc: Any,
                  trunc: Optional[int] = None) -> 'AlgebraElement':
        """Parse either the full ``terms`` form or the compact ``frames``
        form (``{"": "x1*x2", "1 2": "3/2"}``).

        :param trunc: Fallback truncation if the document names none.
        :raises ParseError: Malformed or out-of-range data.
        """
        if not isinstance(doc, dict):
            raise ParseError("An element must be a JSON object")
        trunc = doc.get('trunc', trunc)
        if not isinstance(trunc, int) or trunc < 0:
            raise ParseError("Element truncation must be a nonnegative "
                             "integer, got %r" % (trunc,))

        terms: Dict[TermKey, GaussPoly] = {}
        if 'terms' in doc:
            for entry in doc['terms']:
                try:
                    key = (int(entry.get('t', 0)), tuple(entry['mu']),
                           tuple(entry.get('eset', ())),
                           tuple(entry.get('aset', ())))
                    coeff = poly_from_json(entry['coeff'], shape.dim)
                except (KeyError, TypeError, AttributeError) as err:
                    raise ParseError("Malformed element term: %r" % (
                        entry,)) from err
                _validate_key(shape, key)
                terms[key] = terms[key] + coeff if key in terms else coeff
        elif 'frames' in doc:
            for label, expr in doc['frames'].items():
                try:
                    eset = tuple(int(x) for x in str(label).split())
                except ValueError as err:
                    raise ParseError("Bad frame label: %r" % label) from err
                key = (0, (0,) * shape.dim, eset, ())
                _validate_key(shape, key)
                terms[key] = poly_from_json(expr, shape.dim)
        else:
            raise ParseError("An element needs either 'terms' or 'frames'")
        return cls(shape, terms, trunc)


def _validate_key(shape: Shape, key: TermKey):
    t, mu, eset, aset = key
    if t < 0 or len(mu) != shape.dim or any(x < 0 for x in mu):
        raise ParseError("Bad lambda power or multi-index in %r" % (key,))
    for iset, bound, label in ((eset, shape.rank, 'eset'),
                               (aset, shape.dim, 'aset')):
        if list(iset) != sorted(set(iset)) or any(
                not 1 <= x <= bound for x in iset):
            raise ParseError("%s must be strictly ascending within 1..%d: "
                             "%r" % (label, bound, list(iset)))


def _same_shape(*elements: AlgebraElement):
    for elem in elements[1:]:
        if elem.shape != elements[0].shape:
            raise DimensionError("Shape mismatch: %r vs %r" % (
                elements[0].shape, elem.shape))


def mul_keys(left: TermKey, right: TermKey) -> Tuple[int, Optional[TermKey]]:
    """Sign and key of the undeformed product of two basis terms"""
    e_sign, eset = merge_sign(left[2], right[2])
    if not e_sign:
        return 0, None
    a_sign, aset = merge_sign(left[3], right[3])
    if not a_sign:
        return 0, None
    mu = tuple(a + b for a, b in zip(left[1], right[1]))
    return e_sign * a_sign, (left[0] + right[0], mu, eset, aset)


def undeformed_mul(F: AlgebraElement, G: AlgebraElement,
                   trunc: Optional[int] = None) -> AlgebraElement:
    """The pointwise product: coefficients multiply, multi-indices add and
    both Grassmann factors merge with their own exterior sign.

    Total degree is additive, so the result (at ``min`` of the two
    truncations unless ``trunc`` is given) is exact wherever the inputs are.

    :raises DimensionError: Operands of different shapes.
    """
    _same_shape(F, G)
    limit = min(F.trunc, G.trunc) if trunc is None else trunc
    right = sorted(((key_degree(k), k, c) for k, c in G.terms.items()),
                   key=lambda x: x[0])
    out: Dict[TermKey, GaussPoly] = {}
    for k1, c1 in F.terms.items():
        room = limit - key_degree(k1)
        for deg2, k2, c2 in right:
            if deg2 > room:
                break
            sign, key = mul_keys(k1, k2)
            if not sign:
                continue
            prod = c1 * c2 if sign > 0 else -(c1 * c2)
            out[key] = out[key] + prod if key in out else prod
    return AlgebraElement(F.shape, out, limit)


def degree_map(F: AlgebraElement, which: str) -> AlgebraElement:
    """Scale each term by its ``s``, ``E``, ``a``, ``lambda`` or ``Deg``
    eigenvalue."""
    if which not in DEGREE_NAMES:
        raise ValueError("Unknown degree map: %r" % which)
    eigen = {
        's': lambda k: sum(k[1]),
        'E': lambda k: len(k[2]),
        'a': lambda k: len(k[3]),
        'lambda': lambda k: k[0],
        'Deg': key_degree,
    }[which]
    return F.map_terms(lambda k, c: [(k, c * eigen(k))])


def parity(F: AlgebraElement, which: str) -> AlgebraElement:
    """Apply ``P_E`` (``which='E'``) or ``P_lambda`` (``which='lambda'``)"""
    if which == 'E':
        return F.map_terms(lambda k, c: [(k, -c if len(k[2]) % 2 else c)])
    elif which == 'lambda':
        return F.map_terms(lambda k, c: [(k, -c if k[0] % 2 else c)])
    raise ValueError("Unknown parity: %r" % which)


def conj(F: AlgebraElement) -> AlgebraElement:
    """Complex conjugation of coefficients; the formal parameter is real"""
    return F.map_terms(lambda k, c: [(k, poly_conj(c))])


def delta(F: AlgebraElement) -> AlgebraElement:
    """``delta``: move one symmetric index into the form factor.

    Lowers total degree by one, so the result is exact one degree below
    the input's truncation (and carries that truncation).
    """
    def step(key, coeff):
        t, mu, eset, aset = key
        for i, power in enumerate(mu):
            if not power:
                continue
            sign, new_aset = insert_front(i + 1, aset)
            if sign:
                new_mu = mu[:i] + (power - 1,) + mu[i + 1:]
                yield (t, new_mu, eset, new_aset), coeff * (sign * power)
    return F.map_terms(step, F.trunc - 1)


def _delta_star_terms(key: TermKey, coeff: GaussPoly, weight=1):
    t, mu, eset, aset = key
    for pos, idx in enumerate(aset):
        new_mu = mu[:idx - 1] + (mu[idx - 1] + 1,) + mu[idx:]
        sign = -1 if pos % 2 else 1
        yield ((t, new_mu, eset, aset[:pos] + aset[pos + 1:]),
               coeff * sign * weight)


def delta_star(F: AlgebraElement) -> AlgebraElement:
    """``delta*``: move one form index into the symmetric factor"""
    return F.map_terms(_delta_star_terms)


def delta_inv(F: AlgebraElement) -> AlgebraElement:
    """``delta^-1 = delta* / (s + a)`` on terms with ``s + a > 0``, zero on
    the rest."""
    def step(key, coeff):
        weight = sum(key[1]) + len(key[3])
        if weight:
            yield from _delta_star_terms(key, coeff,
                                         QQ_I(QQ(1, weight), 0))
    return F.map_terms(step)


def sigma(F: AlgebraElement, c_valued: bool = False) -> AlgebraElement:
    """Project onto symmetric degree zero; with ``c_valued`` also onto form
    degree zero."""
    if c_valued:
        return F.select(lambda k: not any(k[1]) and not k[3])
    return F.select(lambda k: not any(k[1]))


def sigma0(F: AlgebraElement) -> AlgebraElement:
    """Project onto ``s + a = 0``, the complement of ``delta^-1``'s domain.

    This is also the projection onto ``C`` (no symmetric and no form
    indices), exported a second time as :func:`kernel_projection`.
    """
    return sigma(F, c_valued=True)


kernel_projection = sigma0


def _check_index(idx: int, bound: int, what: str):
    if not 1 <= idx <= bound:
        raise DimensionError("%s index out of range 1..%d: %r" % (
            what, bound, idx))


def ins_sym(F: AlgebraElement, i: int) -> AlgebraElement:
    """``i_s(d/dx^i)``: multiply by ``mu_i`` then lower it"""
    _check_index(i, F.shape.dim, "Coordinate")

    def step(key, coeff):
        t, mu, eset, aset = key
        power = mu[i - 1]
        if power:
            yield ((t, mu[:i - 1] + (power - 1,) + mu[i:], eset, aset),
                   coeff * power)
    return F.map_terms(step, F.trunc - 1)


def ins_frame(F: AlgebraElement, idx: int) -> AlgebraElement:
    """``i(e_A)``: remove ``e^A`` from the front of the E-factor"""
    _check_index(idx, F.shape.rank, "Frame")

    def step(key, coeff):
        sign, eset = remove_front(idx, key[2])
        if sign:
            yield (key[0], key[1], eset, key[3]), coeff * sign
    return F.map_terms(step, F.trunc - 1)


def ins_frame_j(F: AlgebraElement, idx: int) -> AlgebraElement:
    """``j(e_A) = P_E i(e_A)``"""
    return parity(ins_frame(F, idx), 'E')


def ins_form(F: AlgebraElement, i: int) -> AlgebraElement:
    """``i_a(d/dx^i)``: remove ``dx^i`` from the front of the form factor"""
    _check_index(i, F.shape.dim, "Coordinate")

    def step(key, coeff):
        sign, aset = remove_front(i, key[3])
        if sign:
            yield (key[0], key[1], key[2], aset), coeff * sign
    return F.map_terms(step)


def frame_components(F: AlgebraElement) -> Dict[IndexSet, GaussPoly]:
    """Read off ``{eset: coeff}`` from a lambda-free C-type element"""
    return {key[2]: coeff for key, coeff in F.terms.items()}


def random_element(shape: Shape, rng: Random, trunc: int, nterms: int = 4,
                   max_t: int = 1, max_s: int = 2, max_a: int = 2,
                   poly_deg: int = 2, parities: Optional[Tuple[int, int]] =
                   None) -> AlgebraElement:
    """Draw a random element for the property suites.

    :param parities: If given, restrict to terms of this
        ``(|eset| % 2, |aset| % 2)`` so the result is homogeneous.
    """
    terms: Dict[TermKey, GaussPoly] = {}
    attempts = 0
    while len(terms) < nterms and attempts < 50 * nterms:
        attempts += 1
        t = rng.randint(0, max_t)
        mu = [0] * shape.dim
        for _ in range(rng.randint(0, max_s)):
            mu[rng.randrange(shape.dim)] += 1
        eset = tuple(sorted(rng.sample(range(1, shape.rank + 1),
                                       rng.randint(0, shape.rank))))
        aset = tuple(sorted(rng.sample(range(1, shape.dim + 1),
                                       rng.randint(0, min(max_a,
                                                          shape.dim)))))
        if parities and (len(eset) % 2, len(aset) % 2) != parities:
            continue
        key = (t, tuple(mu), eset, aset)
        if key_degree(key) > trunc:
            continue
        coeff = random_poly(shape.dim, rng, poly_deg)
        if coeff:
            terms[key] = coeff
    return AlgebraElement(shape, terms, trunc)


def random_frame_element(shape: Shape, rng: Random, trunc: int,
                         degrees: Optional[Iterable[int]] = None,
                         poly_deg: int = 2, real: bool = False
                         ) -> AlgebraElement:
    """Draw a random lambda-free C-type element ``sum f_S e^S``

    :param degrees: Allowed E-degrees ``|S|`` (default: all).
    """
    allowed = set(range(shape.rank + 1) if degrees is None else degrees)
    terms: Dict[TermKey, GaussPoly] = {}
    for size in sorted(allowed):
        eset = tuple(sorted(rng.sample(range(1, shape.rank + 1), size)))
        coeff = random_poly(shape.dim, rng, poly_deg,
                            complex_coeffs=not real)
        if coeff:
            terms[(0, (0,) * shape.dim, eset, ())] = coeff
    return AlgebraElement(shape, terms, trunc)

# vim: set sw=4 sts=4 expandtab :
