"""Text formats for color matrices and loop tables.

Scheme files come in three shapes:

* native: a header line ``n r`` followed by n rows of n colors;
* a bare square matrix of colors, one row per line;
* a GAP-style list of lists ``[[0,1],[2,0]]``.

Bare and GAP matrices may be 0- or 1-based; the smallest entry decides.
Loop files are a line ``n`` followed by n rows. Lines starting with ``#``
are comments everywhere.
"""
from __future__ import annotations

import ast
import logging
import re

import numpy as np

from .cayley import CayleyTable, loop_from_table
from .errors import ParseSyntaxError
from .rainbow import ColorMatrix, canonical, validate_rainbow

logger = logging.getLogger(__name__)

_INT = re.compile(r"-?\d+")


def _content_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped and not stripped.startswith("#"):
            out.append((number, line))
    return out


def _tokens(number: int, line: str) -> list[int]:
    values = []
    for match in re.finditer(r"\S+", line):
        if not _INT.fullmatch(match.group()):
            raise ParseSyntaxError(f"expected an integer, found {match.group()!r}", number, match.start() + 1)
        values.append(int(match.group()))
    return values


def _rows(lines: list[tuple[int, str]], n: int, what: str) -> list[list[int]]:
    if len(lines) != n:
        where = lines[-1][0] + 1 if lines else 1
        raise ParseSyntaxError(f"expected {n} {what} rows, found {len(lines)}", where, 1)
    rows = []
    for number, line in lines:
        row = _tokens(number, line)
        if len(row) != n:
            raise ParseSyntaxError(f"expected {n} entries, found {len(row)}", number, len(line.rstrip()) + 1)
        rows.append(row)
    return rows


def _shift_one_based(rows) -> list[list[int]]:
    arr = np.array(rows, dtype=np.int64)
    if arr.size and arr.min() == 1:
        arr = arr - 1
    return arr.tolist()


def _blank_comments(text: str) -> str:
    # keep the line count so parser errors point at the right line
    return "\n".join("" if line.strip().startswith("#") else line for line in text.splitlines())


def _is_gap(lines: list[tuple[int, str]]) -> bool:
    return bool(lines) and lines[0][1].lstrip().startswith("[")


def _parse_gap(text: str) -> list[list[int]]:
    try:
        value = ast.literal_eval(_blank_comments(text).rstrip().rstrip(";"))
    except (SyntaxError, ValueError) as exc:
        line = getattr(exc, "lineno", None) or 1
        col = getattr(exc, "offset", None) or 1
        raise ParseSyntaxError(f"malformed list of lists: {exc.__class__.__name__}", line, col) from None
    if not (isinstance(value, (list, tuple)) and value and all(isinstance(r, (list, tuple)) for r in value)):
        raise ParseSyntaxError("expected a list of rows", 1, 1)
    n = len(value)
    for i, row in enumerate(value):
        if len(row) != n or not all(isinstance(x, int) for x in row):
            raise ParseSyntaxError(f"row {i} must hold {n} integers", 1, 1)
    return _shift_one_based([list(r) for r in value])


def parse_scheme_file(text: str) -> ColorMatrix:
    """Parse any of the supported scheme formats into a validated rainbow."""
    lines = _content_lines(text)
    if not lines:
        raise ParseSyntaxError("empty scheme file", 1, 1)
    if _is_gap(lines):
        return validate_rainbow(_parse_gap(text))
    widths = [len(_tokens(number, line)) for number, line in lines]
    if all(w == len(lines) for w in widths):
        rows = [_tokens(number, line) for number, line in lines]
        return validate_rainbow(_shift_one_based(rows))
    number, header = lines[0]
    head = _tokens(number, header)
    if len(head) != 2 or head[0] < 1:
        raise ParseSyntaxError("header must be 'n r' with n >= 1", number, 1)
    n, r = head
    rows = _rows(lines[1:], n, "color")
    cm = validate_rainbow(rows)
    if cm.rank != r:
        raise ParseSyntaxError(f"header declares rank {r} but the matrix has {cm.rank} colors", number, 1)
    return cm


def serialize_scheme(cm: ColorMatrix, comment: str = "") -> str:
    """Native format with the canonical color numbering."""
    cm = canonical(cm)
    lines = [f"# {line}" for line in comment.splitlines()]
    lines.append(f"{cm.n} {cm.rank}")
    lines += [" ".join(str(x) for x in row) for row in cm.colors.tolist()]
    return "\n".join(lines) + "\n"


def parse_matrix_file(text: str) -> np.ndarray:
    """A bare square integer matrix (used for seed matrices)."""
    lines = _content_lines(text)
    if _is_gap(lines):
        try:
            return np.array(ast.literal_eval(_blank_comments(text).rstrip()), dtype=np.int64)
        except (SyntaxError, ValueError):
            raise ParseSyntaxError("malformed list of lists", 1, 1) from None
    if not lines:
        raise ParseSyntaxError("empty matrix file", 1, 1)
    return np.array(_rows(lines, len(lines), "matrix"), dtype=np.int64)


def parse_loop_file(text: str) -> CayleyTable:
    lines = _content_lines(text)
    if not lines:
        raise ParseSyntaxError("empty loop file", 1, 1)
    number, header = lines[0]
    head = _tokens(number, header)
    if len(head) != 1 or head[0] < 1:
        raise ParseSyntaxError("first line must be the order n >= 1", number, 1)
    rows = _rows(lines[1:], head[0], "table")
    loop = loop_from_table(rows)
    if loop.relabeling is not None:
        logger.warning("identity moved to 0 by relabeling %s", list(loop.relabeling))
    return loop


def serialize_loop(L: CayleyTable) -> str:
    lines = [str(L.n)] + [" ".join(str(x) for x in row) for row in L.table.tolist()]
    return "\n".join(lines) + "\n"
