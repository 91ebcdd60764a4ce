"""Helper functions and the exception hierarchy"""

__author__ = "Stephan Sokolow (deitarion/SSokolow)"
__license__ = "GNU GPL 2.0 or later"

# Silence PyLint being flat-out wrong about MyPy type annotations and
# complaining about my grouped imports
# pylint: disable=unsubscriptable-object,invalid-sequence-index
# pylint: disable=wrong-import-order

# -- Type-Annotation Imports --
from typing import (Any, Dict, Iterable, List, Optional, Sequence, Tuple,
                    Union)
# --


def fmt_table(rows: Union[Dict, Iterable[Sequence]],
              headers: Sequence[str],
              group_by: Optional[int] = None,
              ) -> str:
    """Format a collection as a textual table.

    :param rows: A dict or iterable of sequences representing the rows.
        If a dict is provided, it will be :func:`sorted` so that reports come
        out identical from run to run.
    :param headers: Header labels for the columns
    :param group_by: Index of the column to group results by.

    .. doctest::

        >>> print(fmt_table([("delta^2 = 0", "PASS"), ("D^2 = 0", "PASS")],
        ...                 ("Identity", "Result")))
        Identity    Result
        ----------- ------
         delta^2 = 0  PASS
         D^2 = 0      PASS

        >>> print(fmt_table({"star": "Star product", "check": "Run suites"},
        ...                 ("Command", "Description")))
        Command Description
        ------- ------------
         check    Run suites
         star     Star product

        >>> print(fmt_table([
        ...         ("torsion-free", "PASS", "geometry"),
        ...         ("Theta*Theta = 0", "PASS", "brst")],
        ...     ("Check", "Result", "Suite"), group_by=2))
        Check           Result
        --------------- ------
        <BLANKLINE>
        brst
         Theta*Theta = 0  PASS
        <BLANKLINE>
        geometry
         torsion-free     PASS

    .. warning:: This uses :func:`zip` to combine things. The number of columns
        displayed will be defined by the row with the fewest columns.
    """
    # Ensure that, internally, we have a list of lists of strings
    if isinstance(rows, dict):
        rows = sorted(rows.items())
    table = [[str(cell) for cell in row] for row in rows]

    groups: Dict[str, List[List[str]]] = {}
    if group_by is not None:
        headers = list(headers)
        headers.pop(group_by)
        for row in table:
            groups.setdefault(row.pop(group_by), []).append(row)
    else:
        groups[''] = table

    col_widths = []
    for pos, header in enumerate(headers):
        widest = max((len(x[pos]) for x in table if len(x) > pos), default=0)
        col_widths.append(max(widest, len(header)))

    def fmt_row(row: Sequence[str], pad: str = ' ', indent: int = 0,
                min_width: int = 0) -> str:
        """Format a fmt_table row"""
        cells = ['%s%s ' % (' ' * indent, label.ljust(width, pad))
                 for width, label in zip(col_widths, row)]

        width = sum(len(x) for x in cells)
        if width < min_width:
            cells[-1] = cells[-1][:-1]
            cells.append(pad * (min_width - width + 1))
        return ''.join(cells).rstrip() + '\n'

    group_width = max(len(x) for x in groups)
    output = [fmt_row(headers),
              fmt_row([''] * len(headers), '-', min_width=group_width + 1)]

    for group in sorted(groups):
        if group:
            output.append("\n%s\n" % group)
        output.extend(fmt_row(row, indent=1) for row in groups[group])

    return ''.join(output).rstrip('\n')


class SupstarError(Exception):
    """Base class for every error raised by the library"""


class ParseError(SupstarError, ValueError):
    """Raised when a rational, polynomial, element or spec document can't be
    parsed.

    :param message: What went wrong.
    :param path: The file (or ``<inline>``) being read, if known.
    :param position: ``(line, column)`` within that file, if known.
    """

    def __init__(self, message: str, path: Optional[str] = None,
                 position: Optional[Tuple[int, int]] = None):
        super().__init__(message)
        self.path = path
        self.position = position

    def __str__(self) -> str:
        """Augment :any:`str` output with the location of the problem

        .. code-block:: text

            ParseError: Zero denominator in rational: '3/0'
                (in spec.json, line 4, column 17)
        """
        where = []
        if self.path:
            where.append("in %s" % self.path)
        if self.position:
            where.append("line %d, column %d" % self.position)
        if not where:
            return Exception.__str__(self)
        return "%s\n\t(%s)" % (Exception.__str__(self), ', '.join(where))


class DimensionError(SupstarError, ValueError):
    """Raised on chart dimension or bundle rank mismatches and on
    out-of-range coordinate or frame indices."""


class GeometryError(SupstarError):
    """Raised when chart data lacks a property an operation requires"""


class LambdaDivisionError(SupstarError, ArithmeticError):
    """Raised when dividing by the formal parameter meets a term with no
    factor of it left.

    :param term: The offending term key ``(t, mu, eset, aset)``.
    """

    def __init__(self, message: str, term: Any = None):
        super().__init__(message)
        self.term = term


class TruncationError(SupstarError):
    """Raised when a requested lambda-order needs a deeper truncation than
    the computed data holds."""


class InvariantError(SupstarError, AssertionError):
    """Raised when an identity that must hold by construction fails. This
    always means an implementation bug, never bad input."""


class MomentumMapError(SupstarError):
    """Raised when a quantum momentum map fails the commutator condition

    :param pair: The offending pair of Lie algebra indices (1-based).
    """

    def __init__(self, message: str, pair: Tuple[int, int]):
        super().__init__(message)
        self.pair = pair


class RecursionClosureError(SupstarError):
    """Raised when the classical BRST charge recursion leaves a residual

    :param residual: The nonzero leftover of ``{Theta, Theta}``.
    """

    def __init__(self, message: str, residual: Any = None):
        super().__init__(message)
        self.residual = residual


class CoordinateChangeError(SupstarError):
    """Raised when coordinate-change data does not compose to the identity or
    does not begin with the constraint functions."""

# vim: set sw=4 sts=4 expandtab :
