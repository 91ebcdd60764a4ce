"""Entry point for the batch front end"""

__author__ = "Stephan Sokolow (deitarion/SSokolow)"
__license__ = "GNU GPL 2.0 or later"

# Silence PyLint being flat-out wrong about MyPy type annotations and
# complaining about my grouped imports
# pylint: disable=unsubscriptable-object
# pylint: disable=wrong-import-order

import errno, logging, os, sys
from argparse import ArgumentParser

from .checks import suites
from .commands import commands
from .config import Settings, load_config
from .util import DimensionError, ParseError, SupstarError
from .version import __version__

# -- Type-Annotation Imports --
from typing import List, Optional, Sequence
# --

log = logging.getLogger(__name__)


def argparser() -> ArgumentParser:
    """:class:`argparse.ArgumentParser` definition that is compatible with
        `sphinxcontrib.autoprogram
        <https://sphinxcontrib-autoprogram.readthedocs.io/en/stable/>`_"""
    parser = ArgumentParser(prog='supstar', description='Exact Fedosov '
        'star products, Rothstein brackets and BRST charges on a chart')
    parser.add_argument('-V', '--version', action='version',
            version="%%(prog)s v%s" % __version__)
    parser.add_argument('--debug', action="store_true", default=False,
        help="Display debug messages")
    parser.add_argument('--config', metavar='PATH', default=None,
        help="Read settings from PATH instead of the XDG config file")
    parser.add_argument('command', action="store", nargs="?",
        help="Command to execute (see --show-commands)")
    parser.add_argument('spec', action="store", nargs="?",
        help="Geometry or BRST spec: a path, inline JSON or builtin:<name>")
    parser.add_argument('operands', action="store", nargs="*",
        help="Element operands: paths or inline JSON")

    knobs = parser.add_argument_group("Computation")
    knobs.add_argument('--order', type=int, metavar='T', default=None,
        help="lambda-order for star (config: Order)")
    knobs.add_argument('--trunc', type=int, metavar='K', default=None,
        help="Truncation for taylor and fedosov-r (config: Trunc)")
    knobs.add_argument('--seed', type=int, default=None,
        help="Random seed (config: Seed)")
    knobs.add_argument('--trials', type=int, default=None,
        help="Random trials per identity (config: Trials)")
    knobs.add_argument('--probe-degree', type=int, metavar='D',
        default=None, help="Polynomial degree bound of the cohomology probe "
        "(config: ProbeDegree)")
    knobs.add_argument('--suite', action='append', default=None,
        choices=sorted(suites) + ['all'],
        help="Suite to run with check (repeatable; default: all)")
    knobs.add_argument('--mode', choices=('quantum', 'classical'),
        default=None, help="BRST flavour (default: decided by the spec)")
    knobs.add_argument('--out', metavar='DIR', default=None,
        help="Write <command>.json reports to DIR (env: SUPSTAR_OUTPUT_DIR, "
        "config: OutputDir)")

    help_group = parser.add_argument_group("Additional Help")
    help_group.add_argument('--show-commands', action="store_true",
        default=False, help="List valid commands")

    return parser


def _operands(args) -> List[str]:
    """Fold the per-command flags into the operand list"""
    if args.command == 'check':
        return list(args.suite or []) + list(args.operands)
    if args.command == 'brst' and args.mode:
        return [args.mode] + list(args.operands)
    return list(args.operands)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse ``argv``, run one command and return the exit status"""
    args = argparser().parse_args(argv)

    # Set up the output verbosity
    logging.basicConfig(level=logging.DEBUG if args.debug else logging.INFO,
                        format='%(levelname)s: %(message)s')

    if args.show_commands:
        print(commands)
        return 0
    if not args.command:
        print(commands)
        print("\nUse --help for a list of valid options.")
        return errno.ENOENT

    try:
        settings = Settings.from_sources(args, load_config(args.config))
        report = commands.call(args.command, settings, args.spec,
                               _operands(args))
    except (ParseError, DimensionError) as err:
        log.error("%s", err)
        return errno.EINVAL
    except FileNotFoundError as err:
        log.error("No such file: %s", err.filename)
        return errno.ENOENT
    except SupstarError as err:
        log.error("%s: %s", type(err).__name__, err)
        return 1

    if report is None:
        return errno.EINVAL
    log.info("%s finished in %.2fs", args.command, report.elapsed)

    print(report.table())
    if settings.output_dir:
        os.makedirs(settings.output_dir, exist_ok=True)
        path = os.path.join(settings.output_dir, '%s.json' % args.command)
        with open(path, 'w') as fobj:
            fobj.write(report.dumps())
        log.info("Wrote report to %s", path)
    return 0 if report.ok else 1


def main() -> None:
    """setuptools-compatible entry point"""
    sys.exit(run())


if __name__ == '__main__':
    main()

# vim: set sw=4 sts=4 expandtab :
