"""Available batch commands

Every command takes the effective :class:`supstar.config.Settings`, the
spec argument and a list of operand arguments, and returns a
:class:`Report`. Spec and operand arguments are file paths, inline JSON
objects or (for specs) ``builtin:<preset>``.
"""

__author__ = "Stephan Sokolow (deitarion/SSokolow)"
__license__ = "GNU GPL 2.0 or later"

# Silence PyLint being flat-out wrong about MyPy type annotations and
# complaining about my grouped imports
# pylint: disable=unsubscriptable-object,invalid-sequence-index
# pylint: disable=wrong-import-order

import json, logging, time
from functools import wraps
from random import Random

from . import charts
from .brst import (ClassicalBRSTSetup, QuantumBRSTSetup, classical_charge,
                   classical_Q, coisotropy_check, cohomology_probe,
                   invariance_check, momentum_map_defects, quantum_charge,
                   quantum_checks, strong_invariance, structure_checks)
from .checks import suites
from .fedosov import build_r, extract_Mt, r_invariants, star, taylor
from .geometry import Check, ChartGeometry, validate
from .rothstein import rothstein_forms
from .scalars import random_poly
from .superalgebra import AlgebraElement, random_frame_element
from .util import ParseError, RecursionClosureError, fmt_table
from .version import __version__

# -- Type-Annotation Imports --
from typing import (Any, Callable, Dict, Iterator, List, NamedTuple,
                    Optional, Sequence, Tuple, Union)

from .config import Settings

#: MyPy type alias for what gets stored in `CommandRegistry`
CommandFunc = Callable[[Settings, Optional[str], Sequence[str]], 'Report']
# --

log = logging.getLogger(__name__)

#: Prefix selecting a preset from :mod:`supstar.charts`
BUILTIN_PREFIX = 'builtin:'


class Report(NamedTuple):
    """What a command hands back to the front end"""
    ok: bool
    payload: Dict[str, Any]
    rows: List[Tuple[str, ...]]
    headers: Tuple[str, ...] = ('Item', 'Value')
    #: Wall-clock seconds the command took, stamped by the registry
    elapsed: float = 0.0

    def table(self) -> str:
        """The human-readable summary, ending with the elapsed time"""
        return '%s\n\nFinished in %.2fs' % (
            fmt_table(self.rows, self.headers), self.elapsed)

    def dumps(self, timing: bool = False) -> str:
        """The machine-readable report, byte-identical for equal inputs
        unless ``timing`` adds the ``elapsed`` key"""
        payload = dict(self.payload)
        if timing:
            payload['elapsed'] = self.elapsed
        return json.dumps(payload, indent=1, sort_keys=True)


class CommandRegistry:
    """Lookup and dispatch boilerplate for batch commands."""

    def __init__(self):
        self.commands: Dict[str, CommandFunc] = {}
        self.help: Dict[str, str] = {}

    def __iter__(self) -> Iterator[str]:
        for name in self.commands:
            yield name

    def __str__(self) -> str:
        """Pretty-print a table of registered commands"""
        return fmt_table(self.help, ('Known Commands', 'desc'))

    def add(self, name: str) -> Callable[[CommandFunc], CommandFunc]:
        """Decorator to add a function to the command registry under the
            given name, stamping its report with the command name and tool
            version.

            :param name: The name to register the command for lookup by.

            :raises AssertionError: Raised if the wrapped function has no
                docstring.
            """

        def decorate(func: CommandFunc) -> CommandFunc:
            """Closure used to allow decorator to take arguments"""
            @wraps(func)
            def wrapper(settings: Settings, spec: Optional[str],
                        operands: Sequence[str]) -> Report:
                start = time.perf_counter()
                report = func(settings, spec, operands)
                report.payload.update({'command': name,
                                       'version': __version__})
                return report._replace(
                    elapsed=time.perf_counter() - start)

            if name in self.commands:
                log.warning("Redefining existing command: %s", name)
            self.commands[name] = wrapper

            if not func.__doc__:
                raise AssertionError("All commands must have a docstring: "
                                     "%r" % func)
            help_str = func.__doc__.strip().split('\n')[0].split('. ')[0]
            self.help[name] = help_str.strip('.')
            return func
        return decorate

    def call(self, command: str, settings: Settings,
             spec: Optional[str] = None, operands: Sequence[str] = ()
             ) -> Optional[Report]:
        """Look up a registered command by name and execute it.

        :returns: The command's report, or :any:`None` for an unknown name.
        """
        cmd = self.commands.get(command, None)

        if cmd:
            log.debug("Executing command '%s' with spec %r and operands %r",
                      command, spec, operands)
            return cmd(settings, spec, operands)

        log.error("Unrecognized command: %s", command)
        return None


#: The instance of :class:`CommandRegistry` to be used in 99.9% of use cases.
commands = CommandRegistry()


# -- Input loading --

def load_document(arg: str) -> Tuple[Any, str]:
    """Resolve an argument to ``(document, label)``

    Presets come back as built objects, everything else as parsed JSON.

    :raises ParseError: Invalid JSON (with its position) or an unknown
        preset.
    :raises FileNotFoundError: A path that does not exist.
    """
    if arg.startswith(BUILTIN_PREFIX):
        return charts.lookup(arg[len(BUILTIN_PREFIX):]), arg
    if arg.lstrip().startswith('{'):
        text, label = arg, '<inline>'
    else:
        with open(arg) as fobj:
            text, label = fobj.read(), arg
    try:
        return json.loads(text), label
    except json.JSONDecodeError as err:
        raise ParseError(err.msg, path=label,
                         position=(err.lineno, err.colno)) from err


def _reraise_with_path(err: ParseError, label: str) -> ParseError:
    if not err.path:
        err.path = label
    return err


def load_geometry(arg: Optional[str]) -> ChartGeometry:
    """Load a chart geometry spec

    :raises ParseError: Missing or malformed spec.
    """
    if not arg:
        raise ParseError("This command needs a geometry spec")
    doc, label = load_document(arg)
    if isinstance(doc, ChartGeometry):
        return doc
    try:
        return ChartGeometry.from_json(doc, name=label)
    except ParseError as err:
        raise _reraise_with_path(err, label)


def load_setup(arg: Optional[str], mode: Optional[str] = None
               ) -> Union[QuantumBRSTSetup, ClassicalBRSTSetup]:
    """Load a quantum or classical BRST setup.

    Without ``mode``, documents with ``qmm`` are quantum and documents with
    ``constraints`` are classical.

    :raises ParseError: Missing or malformed spec, or one that doesn't match
        ``mode``.
    """
    if not arg:
        raise ParseError("This command needs a BRST spec")
    doc, label = load_document(arg)
    if isinstance(doc, dict):
        if mode is None:
            mode = 'quantum' if 'qmm' in doc else 'classical'
        cls = QuantumBRSTSetup if mode == 'quantum' else ClassicalBRSTSetup
        try:
            doc = cls.from_json(doc, name=label)
        except ParseError as err:
            raise _reraise_with_path(err, label)
    wanted = {'quantum': QuantumBRSTSetup,
              'classical': ClassicalBRSTSetup}.get(mode or '')
    if not isinstance(doc, (QuantumBRSTSetup, ClassicalBRSTSetup)) or (
            wanted and not isinstance(doc, wanted)):
        raise ParseError("%s is not a %s BRST setup" % (
            label, mode or 'quantum or classical'))
    return doc


def load_element(geom: ChartGeometry, arg: str, trunc: int
                 ) -> AlgebraElement:
    """Load an operand, lifting it to ``trunc`` when it names none

    :raises ParseError: Malformed element.
    """
    doc, label = load_document(arg)
    try:
        return AlgebraElement.from_json(geom.shape, doc, trunc)
    except ParseError as err:
        raise _reraise_with_path(err, label)


def _operands(operands: Sequence[str], count: int) -> Sequence[str]:
    if len(operands) != count:
        raise ParseError("Expected %d operand(s), got %d" % (
            count, len(operands)))
    return operands


def _check_rows(checks: Sequence[Check]) -> List[Tuple[str, ...]]:
    return [(c.name, 'PASS' if c.passed else 'FAIL', c.detail)
            for c in checks]


def _check_json(checks: Sequence[Check]) -> List[Dict[str, Any]]:
    return [{'name': c.name, 'passed': c.passed, 'detail': c.detail}
            for c in checks]


def _term_rows(label: str, elem: AlgebraElement) -> List[Tuple[str, ...]]:
    return [(label, ' '.join('e%d' % i for i in key[2]) or '1',
             str(coeff.as_expr())) for key, coeff in elem]


# -- Commands --

@commands.add('validate')
def cmd_validate(settings: Settings, spec: Optional[str],
                 operands: Sequence[str]) -> Report:
    """Check a geometry or BRST spec for consistency.

    Geometry specs get every compatibility check; quantum BRST specs the
    structure constants and the momentum map condition; classical ones
    coisotropy and closure of the charge recursion.
    """
    if not spec:
        raise ParseError("validate needs a spec")
    doc, label = load_document(spec)
    if isinstance(doc, (QuantumBRSTSetup, ClassicalBRSTSetup)) or (
            isinstance(doc, dict) and ('qmm' in doc or 'constraints' in doc)):
        setup = load_setup(spec)
        if isinstance(setup, QuantumBRSTSetup):
            checks = structure_checks(setup.structure) + [
                Check('momentum map (%d,%d)' % pair, ok)
                for pair, ok in sorted(momentum_map_defects(
                    setup, settings.order).items())]
        else:
            checks = [coisotropy_check(setup)]
            try:
                classical_charge(setup)
                checks.append(Check('charge recursion closes', True))
            except RecursionClosureError as err:
                checks.append(Check('charge recursion closes', False,
                                    str(err)))
    else:
        checks = validate(load_geometry(spec)).checks

    ok = all(c.passed for c in checks)
    return Report(ok, {'spec': label, 'ok': ok, 'checks': _check_json(checks)},
                  _check_rows(checks), ('Check', 'Result', 'Detail'))


@commands.add('star')
def cmd_star(settings: Settings, spec: Optional[str],
             operands: Sequence[str]) -> Report:
    """Star product of two sections with its M_t table.

    Works through lambda-order ``--order`` at the truncation ``2T + n``.
    """
    geom = load_geometry(spec)
    T = settings.order
    K = 2 * T + geom.rank
    phi, psi = (load_element(geom, arg, K)
                for arg in _operands(operands, 2))
    st = build_r(geom, max(K, 2))
    series = star(st, phi, psi, T, K)
    table = extract_Mt(series, T)
    rows: List[Tuple[str, ...]] = []
    for t, M in enumerate(table):
        rows.extend(_term_rows('M_%d' % t, M))
    return Report(True, {'T': T, 'K': K, 'product': series.to_json(),
                         'M': [M.to_json() for M in table]},
                  rows, ('Term', 'Frames', 'Coefficient'))


@commands.add('bracket')
def cmd_bracket(settings: Settings, spec: Optional[str],
                operands: Sequence[str]) -> Report:
    """The Rothstein bracket of two lambda-free sections.

    Both closed forms are evaluated and their agreement reported.
    """
    geom = load_geometry(spec)
    phi, psi = (load_element(geom, arg, geom.rank)
                for arg in _operands(operands, 2))
    forms = rothstein_forms(geom, phi, psi)
    rows = _term_rows('{phi, psi}', forms.two_factor)
    rows.append(('forms agree', 'PASS' if forms.agree else 'FAIL', ''))
    return Report(forms.agree, {'bracket': forms.two_factor.to_json(),
                                'forms_agree': forms.agree},
                  rows, ('Term', 'Frames', 'Coefficient'))


@commands.add('taylor')
def cmd_taylor(settings: Settings, spec: Optional[str],
               operands: Sequence[str]) -> Report:
    """The Fedosov-Taylor series of a section through degree ``--trunc``."""
    geom = load_geometry(spec)
    K = settings.trunc
    phi = load_element(geom, _operands(operands, 1)[0], K)
    tau = taylor(build_r(geom, K), phi.with_trunc(K), K)
    rows = [(str(d), str(len(tau.part(d).terms)))
            for d in range(K + 1)]
    return Report(True, {'K': K, 'taylor': tau.to_json()}, rows,
                  ('Degree', 'Terms'))


@commands.add('fedosov-r')
def cmd_fedosov_r(settings: Settings, spec: Optional[str],
                  operands: Sequence[str]) -> Report:
    """Solve for the Fedosov connection through degree ``--trunc``."""
    geom = load_geometry(spec)
    st = build_r(geom, settings.trunc)
    checks = r_invariants(st)
    ok = all(c.passed for c in checks)
    rows = [('r^(%d)' % d, '%d terms' % len(part.terms), '')
            for d, part in sorted(st.r_parts.items())]
    return Report(ok, {'K': st.K, 'ok': ok, 'checks': _check_json(checks),
                       'r': {str(d): part.to_json()
                             for d, part in sorted(st.r_parts.items())}},
                  rows + _check_rows(checks), ('Item', 'Value', 'Detail'))


@commands.add('check')
def cmd_check(settings: Settings, spec: Optional[str],
              operands: Sequence[str]) -> Report:
    """Run the seeded property suites.

    Operands name the suites (default: all). A spec replaces the preset
    geometry of the algebra, geometry and fedosov suites and sets the
    dimension of the scalars suite.
    """
    names = [x for x in operands if x != 'all'] or list(suites)
    unknown = sorted(set(names) - set(suites))
    if unknown:
        raise ParseError("Unknown suite(s): %s" % ', '.join(unknown))
    geom = load_geometry(spec) if spec else None
    report = suites.run(names, settings.trials, settings.seed, geom)
    return Report(report.ok, report.to_json(), report.rows(),
                  ('Identity', 'Passed', 'Result', 'Suite'))


def _quantum_report(settings: Settings, setup: QuantumBRSTSetup
                    ) -> Report:
    rng = Random(settings.seed)
    defects = momentum_map_defects(setup)
    checks = [Check('momentum map (%d,%d)' % pair, ok)
              for pair, ok in sorted(defects.items())]
    theta = quantum_charge(setup, check=False)
    if all(defects.values()):
        checks += quantum_checks(setup, rng, settings.trials,
                                 check_map=False).checks
    ok = all(c.passed for c in checks)

    samples = list(setup.base.ring.gens) + [
        random_poly(setup.base.dim, rng, max_deg=3)]
    info = strong_invariance(setup, samples)
    rows = _check_rows(checks) + [
        (info.name + ' (informational)', 'yes' if info.passed else 'no',
         info.detail)]
    rows += _term_rows('Theta', theta.lambda_truncate(0))
    return Report(ok, {'mode': 'quantum', 'ok': ok,
                       'theta': theta.to_json(),
                       'checks': _check_json(checks),
                       'strong_invariance': info.passed}, rows,
                  ('Check', 'Result', 'Detail'))


def _classical_report(settings: Settings, setup: ClassicalBRSTSetup
                      ) -> Report:
    checks = [coisotropy_check(setup)]
    payload: Dict[str, Any] = {'mode': 'classical'}
    rows: List[Tuple[str, ...]] = []
    try:
        theta = classical_charge(setup)
    except RecursionClosureError as err:
        checks.append(Check('charge recursion closes', False, str(err)))
    else:
        checks.append(Check('charge recursion closes', True))
        rng = Random(settings.seed)
        q_ok = True
        for _ in range(settings.trials):
            w = random_frame_element(setup.geom.shape, rng, setup.geom.rank)
            if classical_Q(setup, theta, classical_Q(setup, theta, w)):
                q_ok = False
                break
        checks.append(Check('Q^2 = 0', q_ok))
        checks.append(invariance_check(setup, theta, settings.probe_degree))
        probe = cohomology_probe(setup, theta, settings.probe_degree)
        payload.update({'theta': theta.to_json(),
                        'probe_degree': settings.probe_degree,
                        'cohomology': {str(g): dim
                                       for g, dim in sorted(probe.items())}})
        rows += _term_rows('Theta', theta)
        rows += [('H^%d' % g, 'dim', str(dim))
                 for g, dim in sorted(probe.items())]
    ok = all(c.passed for c in checks)
    payload.update({'ok': ok, 'checks': _check_json(checks)})
    return Report(ok, payload, _check_rows(checks) + rows,
                  ('Check', 'Result', 'Detail'))


@commands.add('brst')
def cmd_brst(settings: Settings, spec: Optional[str],
             operands: Sequence[str]) -> Report:
    """Build and verify a quantum or classical BRST charge.

    The mode is the first operand (``quantum`` or ``classical``); without
    it, the spec decides.
    """
    mode = operands[0] if operands else None
    if mode not in (None, 'quantum', 'classical'):
        raise ParseError("Unknown BRST mode: %r" % mode)
    setup = load_setup(spec, mode)
    if isinstance(setup, QuantumBRSTSetup):
        return _quantum_report(settings, setup)
    return _classical_report(settings, setup)

# vim: set sw=4 sts=4 expandtab :
