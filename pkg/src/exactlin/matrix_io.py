"""Exact matrix interchange as CSV with `p/q` rational entries."""
import io
import re
from fractions import Fraction
from pathlib import Path
from typing import List, Union

import pandas as pd

from ..errors import InvalidArgumentError
from .rational import as_fraction_rows, shape

MATRIX_HEADER = "# mzn-matrix v1 rows={rows} cols={cols}"
_HEADER_PATTERN = re.compile(r"^# mzn-matrix v1 rows=(\d+) cols=(\d+)$")


def format_rational(value: Fraction) -> str:
    """`3`, `-1/2`, ... (Fraction's own str)."""
    return str(Fraction(value))


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise InvalidArgumentError(f"Not an exact rational: {text!r}")


def dumps_matrix(matrix) -> str:
    """Serialize a rational matrix to the versioned CSV text."""
    rows, cols = shape(matrix)
    frame = pd.DataFrame([[format_rational(x) for x in row] for row in as_fraction_rows(matrix)])
    body = frame.to_csv(header=False, index=False) if rows and cols else ""
    return MATRIX_HEADER.format(rows=rows, cols=cols) + "\n" + body


def loads_matrix(text: str) -> List[List[Fraction]]:
    """
    Parse the versioned CSV text.

    Raises:
        InvalidArgumentError: On a missing header, bad entries or wrong dimensions
    """
    header, _, body = text.partition("\n")
    match = _HEADER_PATTERN.match(header.strip())
    if not match:
        raise InvalidArgumentError(f"Missing or unsupported matrix header: {header!r}")
    rows, cols = int(match.group(1)), int(match.group(2))
    if rows == 0 or cols == 0:
        return [[] for _ in range(rows)]

    frame = pd.read_csv(io.StringIO(body), header=None, dtype=str, keep_default_na=False)
    if frame.shape != (rows, cols):
        raise InvalidArgumentError(f"Header announces {rows}x{cols}, body is {frame.shape[0]}x{frame.shape[1]}")
    return [[parse_rational(x) for x in row] for row in frame.itertuples(index=False)]


def write_matrix(path: Union[str, Path], matrix) -> None:
    Path(path).write_text(dumps_matrix(matrix))


def read_matrix(path: Union[str, Path]) -> List[List[Fraction]]:
    return loads_matrix(Path(path).read_text())
