"""Text file format for exact matrices.

    field: 2 3
    rows: 2
    cols: 2
    1*sqrt(6); 1*sqrt(2)
    1*sqrt(2); 1*sqrt(6)

A rational matrix has an empty ``field:`` line and plain rational entries.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from .errors import ParseError
from .exactla import FieldMatrix, RationalMatrix
from .numfield import PrimeBasis, field_make, parse_element


def emit_matrix(M) -> str:
    if isinstance(M, RationalMatrix):
        field = ""
        cells = [str(x) for x in M.entries]
    else:
        field = " ".join(str(p) for p in M.basis.primes)
        cells = [e.to_text() for e in M.entries]
    lines = [f"field: {field}".rstrip(), f"rows: {M.rows}", f"cols: {M.cols}"]
    for i in range(M.rows):
        lines.append("; ".join(cells[i * M.cols:(i + 1) * M.cols]))
    return "\n".join(lines) + "\n"


def _header(line: str, key: str) -> str:
    k, sep, v = line.partition(":")
    if not sep or k.strip() != key:
        raise ParseError(f"expected '{key}:' header, got {line!r}")
    return v.strip()


def parse_matrix(text: str):
    """Inverse of emit_matrix; returns a RationalMatrix when no radicals occur."""
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if len(lines) < 3:
        raise ParseError("matrix file needs field/rows/cols headers")
    try:
        primes = [int(p) for p in _header(lines[0], "field").split()]
        rows = int(_header(lines[1], "rows"))
        cols = int(_header(lines[2], "cols"))
    except ValueError as exc:
        raise ParseError(f"bad matrix header: {exc}") from None
    body = lines[3:]
    if len(body) != rows:
        raise ParseError(f"header says {rows} rows, found {len(body)}")
    cells = []
    for i, ln in enumerate(body):
        parts = [c.strip() for c in ln.split(";")]
        if len(parts) != cols:
            raise ParseError(f"row {i} has {len(parts)} entries, expected {cols}")
        cells.append(parts)
    if not primes and not any("sqrt" in c for r in cells for c in r):
        try:
            return RationalMatrix.from_rows([[Fraction(c) for c in r] for r in cells])
        except ValueError as exc:
            raise ParseError(f"bad rational entry: {exc}") from None
    basis = field_make(primes) if primes else PrimeBasis(())
    return FieldMatrix.from_rows(basis, [[parse_element(c, basis) for c in r] for r in cells])


def write_matrix(M, path) -> None:
    Path(path).write_text(emit_matrix(M))


def read_matrix(path):
    return parse_matrix(Path(path).read_text())
