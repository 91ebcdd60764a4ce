"""Configuration parsing code"""

__author__ = "Stephan Sokolow (deitarion/SSokolow)"
__license__ = "GNU GPL 2.0 or later"

# pylint: disable=unsubscriptable-object,wrong-import-order

import logging, os
from configparser import ConfigParser

from .util import ParseError

# -- Type-Annotation Imports --
from typing import Any, Dict, Mapping, NamedTuple, Optional, Union
# --

log = logging.getLogger(__name__)

#: Location for config files (determined at runtime).
XDG_CONFIG_DIR = os.environ.get('XDG_CONFIG_HOME',
                                os.path.expanduser('~/.config'))

#: Name of the config file inside :data:`XDG_CONFIG_DIR`
CONFIG_NAME = 'supstar.cfg'

#: Environment variable consulted for the default output directory
OUTPUT_DIR_ENV = 'SUPSTAR_OUTPUT_DIR'

#: MyPy type alias for fields loaded from config files
CfgDict = Dict[str, Union[str, int, float, bool, None]]  # pylint:disable=C0103

#: Default content for the configuration file
DEFAULTS: Dict[str, CfgDict] = {
    'general': {
        # lambda-order T for ``star``
        'Order': 1,
        # Truncation K for ``taylor`` and ``fedosov-r``
        'Trunc': 6,
        'Seed': 0,
        # Random trials per identity in ``check``
        'Trials': 25,
        # Polynomial degree bound of the cohomology probe
        'ProbeDegree': 2,
        'OutputDir': '',
    },
}

#: Keys of ``[general]`` that must parse as non-negative integers
INT_KEYS = ('Order', 'Trunc', 'Seed', 'Trials', 'ProbeDegree')


def default_path() -> str:
    """Where :func:`load_config` looks when no path is given"""
    return os.path.join(XDG_CONFIG_DIR, CONFIG_NAME)


def load_config(path: Optional[str] = None) -> ConfigParser:
    """Load the config file from the given path, applying fixes as needed.
    If it does not exist, create it from the configuration defaults.

    :param path: The path to load or initialize (default:
        :func:`default_path`).

    Failure to write the file back is logged and otherwise ignored so that
    a read-only home directory never blocks a computation.
    """
    path = path or default_path()
    first_run = not os.path.exists(path)

    config = ConfigParser(interpolation=None)

    # Keep keys as written so ``ProbeDegree`` reads back as ``ProbeDegree``
    config.optionxform = str  # type: ignore

    config.read(path)
    dirty = False

    if not config.has_section('general'):
        config.add_section('general')
        # Change this if you make backwards-incompatible changes to the
        # section and key naming in the config file.
        config.set('general', 'cfg_schema', '1')
        dirty = True

    # Transparently update the config to add missing keys
    for key, val in DEFAULTS['general'].items():
        if not config.has_option('general', key):
            config.set('general', key, str(val))
            dirty = True

    if dirty:
        try:
            os.makedirs(os.path.dirname(path) or '.', exist_ok=True)
            with open(path, 'w') as cfg_file:
                config.write(cfg_file)
        except OSError as err:
            log.warning("Could not write config file %s: %s", path, err)
        else:
            if first_run:
                log.info("Wrote default config file to %s", path)

    return config


def _config_int(config: ConfigParser, key: str) -> int:
    raw = config.get('general', key, fallback=str(DEFAULTS['general'][key]))
    try:
        value = int(raw)
    except ValueError as err:
        raise ParseError("Config key %s must be an integer, got %r" % (
            key, raw)) from err
    if value < 0:
        raise ParseError("Config key %s must not be negative, got %d" % (
            key, value))
    return value


class Settings(NamedTuple):
    """The effective values for one CLI invocation"""
    order: int = 1
    trunc: int = 6
    seed: int = 0
    trials: int = 25
    probe_degree: int = 2
    output_dir: str = ''

    @classmethod
    def from_sources(cls, args: Any, config: ConfigParser,
                     environ: Mapping[str, str] = os.environ
                     ) -> 'Settings':
        """Resolve each value from the command line, then the config file.

        The output directory additionally honours
        :data:`OUTPUT_DIR_ENV` between the two.

        :param args: An :class:`argparse.Namespace` whose unset options are
            :any:`None`.
        :raises ParseError: A config value is not a valid integer.
        """
        values: Dict[str, Any] = {}
        for key, attr in zip(INT_KEYS, ('order', 'trunc', 'seed', 'trials',
                                        'probe_degree')):
            flag = getattr(args, attr, None)
            values[attr] = (flag if flag is not None
                            else _config_int(config, key))

        output_dir = getattr(args, 'out', None)
        if output_dir is None:
            output_dir = environ.get(OUTPUT_DIR_ENV) or config.get(
                'general', 'OutputDir', fallback='')
        values['output_dir'] = output_dir
        return cls(**values)

# vim: set sw=4 sts=4 expandtab :
