"""Matrix text format used for density-matrix artifacts.

Row-major, one matrix row per line, entries separated by whitespace, each
entry written as ``<re><+/-im>i`` with 12 significant digits, e.g.::

    0.5+0i 0+0i 0+0i 0.5-0i
"""
import re
from typing import List

import numpy as np
import numpy.typing as npt

from tangle.quantum.operators import Operator, as_operator
from tangle.utils.errors import ParseError

_ENTRY = re.compile(
    r'^(?P<re>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?|[+-]?(?:nan|inf))'
    r'(?P<im>[+-](?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?|[+-](?:nan|inf))i$'
)


def format_entry(z: complex) -> str:
    return f"{z.real:.12g}{z.imag:+.12g}i"


def format_operator(op: npt.ArrayLike) -> str:
    """Serialise an operator to the matrix text format (trailing newline)."""
    op = as_operator(op)
    rows = [" ".join(format_entry(complex(z)) for z in row) for row in op]
    return "\n".join(rows) + "\n"


def parse_operator(text: str) -> Operator:
    """Parse the matrix text format back into an operator.

    Raises:
        ParseError: With the 1-based line number of the first bad row.
    """
    rows: List[List[complex]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        row = []
        for token in line.split():
            match = _ENTRY.match(token)
            if match is None:
                raise ParseError(f"malformed matrix entry {token!r}", line=lineno)
            row.append(complex(float(match.group('re')), float(match.group('im'))))
        if rows and len(row) != len(rows[0]):
            raise ParseError(f"expected {len(rows[0])} entries, found {len(row)}", line=lineno)
        rows.append(row)
    if not rows:
        raise ParseError("empty matrix text")
    if len(rows) != len(rows[0]):
        raise ParseError(f"matrix is not square: {len(rows)} rows of {len(rows[0])} entries",
                         line=len(rows))
    return as_operator(np.array(rows, dtype=complex))
