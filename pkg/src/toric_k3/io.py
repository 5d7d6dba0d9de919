"""Vertex-list input in the Kreuzer-Skarke distribution format.

A record is a header ``r c [label...]`` followed by r rows of c integers.
With r <= c the rows are coordinates and the columns are vertices (the
usual layout of the published lists); with r > c each row is a vertex.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .lattice import Vector


class ParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class PolytopeRecord:
    label: str
    vertices: tuple[Vector, ...]
    line: int = 0

    @property
    def dimension(self) -> int:
        return len(self.vertices[0])


def _ints(tokens: list[str], lineno: int) -> list[int]:
    out = []
    for t in tokens:
        try:
            out.append(int(t))
        except ValueError:
            raise ParseError(lineno, f"non-integer token {t!r}") from None
    return out


def parse_vertex_list(text: str | Iterable[str], default_label: str = "") -> list[PolytopeRecord]:
    lines = text.splitlines() if isinstance(text, str) else [ln.rstrip("\n") for ln in text]
    records = []
    i = 0
    while i < len(lines):
        raw = lines[i].strip()
        if not raw or raw.startswith("#"):
            i += 1
            continue
        header_line = i + 1
        tokens = raw.split()
        if len(tokens) < 2:
            raise ParseError(header_line, f"header needs two integers, got {raw!r}")
        r, c = _ints(tokens[:2], header_line)
        if r < 1 or c < 1:
            raise ParseError(header_line, f"matrix size {r} x {c} must be positive")
        label = " ".join(tokens[2:]) or default_label or f"#{len(records) + 1}"
        rows = []
        i += 1
        while len(rows) < r:
            if i >= len(lines):
                raise ParseError(i, f"expected {r} rows after the header on line {header_line}, found {len(rows)}")
            body = lines[i].strip()
            i += 1
            if not body:
                raise ParseError(i, f"blank line inside the record started on line {header_line}")
            row = _ints(body.split(), i)
            if len(row) != c:
                raise ParseError(i, f"row has {len(row)} entries, header says {c}")
            rows.append(row)
        if r <= c:
            verts = tuple(tuple(rows[k][j] for k in range(r)) for j in range(c))
        else:
            verts = tuple(tuple(row) for row in rows)
        records.append(PolytopeRecord(label, verts, header_line))
    return records


def read_vertex_file(path: str) -> list[PolytopeRecord]:
    with open(path, encoding="utf-8") as fh:
        return parse_vertex_list(fh.read())


def format_record(rec: PolytopeRecord) -> str:
    """Column layout (rows are coordinates), readable by :func:`parse_vertex_list`."""
    d, n = rec.dimension, len(rec.vertices)
    head = f"{d} {n}" + (f" {rec.label}" if rec.label else "")
    rows = [" ".join(str(v[k]) for v in rec.vertices) for k in range(d)]
    return "\n".join([head] + rows) + "\n"
