"""Exact sparse rational matrices.

Elimination runs on integer rows (each row cleared of denominators) through
a fraction-free kernel; the compiled kernel is used when it was built and
the pure-Python one otherwise. Set ``EDGESPEC_PURE_PYTHON=1`` to force the
fallback.
"""

from __future__ import annotations

import os
import re
from fractions import Fraction
from math import lcm

from .errors import DimensionMismatch

if os.environ.get("EDGESPEC_PURE_PYTHON"):
    from ._elim_py import echelon as _echelon

    BACKEND = "python"
else:
    try:
        from ._elim import echelon as _echelon

        BACKEND = "compiled"
    except ImportError:
        from ._elim_py import echelon as _echelon

        BACKEND = "python"

__all__ = [
    "BACKEND",
    "RationalMatrix",
    "parse_rational",
    "format_rational",
    "rref",
    "rank",
    "nullspace",
    "matvec",
    "matmul",
    "span_equal",
    "vectors_rank",
]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``; ints and Fractions pass through."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    m = _RATIONAL_RE.match(str(text))
    if not m:
        raise ValueError(f"not a rational: {text!r}")
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return Fraction(int(m.group(1)), den)


def format_rational(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


class RationalMatrix:
    """Sparse ``rows x cols`` matrix; ``entries`` maps ``(i, j)`` to a nonzero Fraction."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries=None):
        self.rows = rows
        self.cols = cols
        self.entries = {}
        if entries:
            for (i, j), v in entries.items():
                if not (0 <= i < rows and 0 <= j < cols):
                    raise DimensionMismatch(f"entry ({i}, {j}) outside {rows}x{cols}")
                v = Fraction(v)
                if v:
                    self.entries[(i, j)] = v

    @classmethod
    def from_rows(cls, rows):
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise DimensionMismatch("ragged rows")
        return cls(len(rows), ncols, {(i, j): v for i, r in enumerate(rows) for j, v in enumerate(r) if v})

    @classmethod
    def identity(cls, n: int):
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def zeros(cls, rows: int, cols: int):
        return cls(rows, cols)

    def __getitem__(self, key):
        return self.entries.get(key, Fraction(0))

    def to_rows(self):
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def row_dicts(self):
        rows = [{} for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            rows[i][j] = v
        return rows

    def transpose(self):
        return RationalMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()})

    def _check_same_shape(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch(
                f"{self.rows}x{self.cols} vs {other.rows}x{other.cols}"
            )

    def __add__(self, other):
        self._check_same_shape(other)
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out.get(k, 0) + v
        return RationalMatrix(self.rows, self.cols, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = Fraction(c)
        return RationalMatrix(self.rows, self.cols, {k: c * v for k, v in self.entries.items()})

    def __matmul__(self, other):
        return matmul(self, other)

    def __eq__(self, other):
        return (
            isinstance(other, RationalMatrix)
            and (self.rows, self.cols) == (other.rows, other.cols)
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, frozenset(self.entries.items())))

    def __repr__(self):
        return f"RationalMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"


def matvec(m: RationalMatrix, v) -> list:
    if len(v) != m.cols:
        raise DimensionMismatch(f"matrix has {m.cols} columns, vector has {len(v)} entries")
    out = [Fraction(0)] * m.rows
    for (i, j), a in m.entries.items():
        if v[j]:
            out[i] += a * v[j]
    return out


def matmul(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    if a.cols != b.rows:
        raise DimensionMismatch(f"{a.rows}x{a.cols} times {b.rows}x{b.cols}")
    brows = b.row_dicts()
    out = {}
    for (i, k), x in a.entries.items():
        for j, y in brows[k].items():
            out[(i, j)] = out.get((i, j), 0) + x * y
    return RationalMatrix(a.rows, b.cols, out)


def _integer_rows(m: RationalMatrix):
    rows = [[0] * m.cols for _ in range(m.rows)]
    for i, row in enumerate(m.row_dicts()):
        if not row:
            continue
        scale = lcm(*(v.denominator for v in row.values()))
        target = rows[i]
        for j, v in row.items():
            target[j] = v.numerator * (scale // v.denominator)
    return rows


def rref(m: RationalMatrix):
    """Return ``(rank, pivot_cols, reduced)`` with ``reduced`` in reduced row-echelon form."""
    rows = _integer_rows(m)
    pivots = _echelon(rows, m.cols)
    r = len(pivots)
    red = []
    for i in range(r):
        piv = rows[i][pivots[i]]
        red.append({j: Fraction(x, piv) for j, x in enumerate(rows[i]) if x})
    for i in range(r - 1, -1, -1):
        c = pivots[i]
        for k in range(i):
            a = red[k].get(c)
            if a:
                for j, x in red[i].items():
                    y = red[k].get(j, 0) - a * x
                    if y:
                        red[k][j] = y
                    else:
                        red[k].pop(j, None)
    entries = {(i, j): x for i, row in enumerate(red) for j, x in row.items()}
    return r, pivots, RationalMatrix(m.rows, m.cols, entries)


def rank(m: RationalMatrix) -> int:
    return len(_echelon(_integer_rows(m), m.cols))


def nullspace(m: RationalMatrix) -> list:
    """Basis of the right kernel; each vector's first nonzero entry is 1."""
    r, pivots, red = rref(m)
    pivot_set = set(pivots)
    rows = red.row_dicts()
    basis = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            a = rows[i].get(f)
            if a:
                v[c] = -a
        lead = next(x for x in v if x)
        basis.append([x / lead for x in v])
    return basis


def vectors_rank(vectors) -> int:
    """Rank of a list of equal-length vectors."""
    vectors = list(vectors)
    if not vectors:
        return 0
    return rank(RationalMatrix.from_rows(vectors))


def span_equal(a, b) -> bool:
    """True iff two lists of vectors span the same subspace."""
    ra, rb = vectors_rank(a), vectors_rank(b)
    if ra != rb:
        return False
    return vectors_rank(list(a) + list(b)) == ra
