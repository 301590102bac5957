"""Immutable sparse matrices over the rationals."""

import json
from fractions import Fraction

import numpy as np

from .rational import format_rational, parse_rational, to_fraction

__all__ = ["SparseMatrix", "sparse_vector", "dense_vector"]


def sparse_vector(v):
    """Dict ``{index: Fraction}`` of the nonzero entries of a sequence or dict."""
    if isinstance(v, dict):
        return {int(i): to_fraction(x) for i, x in v.items() if x != 0}
    out = {}
    for i, x in enumerate(v):
        if x != 0:
            out[i] = to_fraction(x)
    return out


def dense_vector(v, n):
    out = [Fraction(0)] * n
    for i, x in v.items():
        out[i] = x
    return out


class SparseMatrix:
    """A ``rows x cols`` matrix stored as canonically sorted ``(r, c, value)`` triples."""

    __slots__ = ("rows", "cols", "entries", "_row_index")

    def __init__(self, rows, cols, entries=()):
        rows, cols = int(rows), int(cols)
        if rows < 0 or cols < 0:
            raise ValueError("negative matrix shape")
        acc = {}
        for r, c, v in entries:
            r, c = int(r), int(c)
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError(f"entry ({r},{c}) outside {rows}x{cols}")
            if (r, c) in acc:
                raise ValueError(f"duplicate entry ({r},{c})")
            v = to_fraction(v)
            if v:
                acc[(r, c)] = v
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", tuple((r, c, acc[r, c]) for r, c in sorted(acc)))
        object.__setattr__(self, "_row_index", None)

    def __setattr__(self, name, value):
        raise AttributeError("SparseMatrix is immutable")

    # construction helpers
    @classmethod
    def from_dense(cls, a):
        a = np.asarray(a, dtype=object)
        if a.ndim != 2:
            raise ValueError("expected a 2-d array")
        ents = [(r, c, a[r, c]) for r in range(a.shape[0]) for c in range(a.shape[1]) if a[r, c] != 0]
        return cls(a.shape[0], a.shape[1], ents)

    @classmethod
    def from_columns(cls, nrows, columns):
        """Build from a list of column vectors given as dicts ``{row: value}``."""
        ents = [(r, c, v) for c, col in enumerate(columns) for r, v in col.items()]
        return cls(nrows, len(columns), ents)

    @classmethod
    def from_rows(cls, ncols, rows):
        ents = [(r, c, v) for r, row in enumerate(rows) for c, v in row.items()]
        return cls(len(rows), ncols, ents)

    @classmethod
    def identity(cls, n):
        return cls(n, n, [(i, i, 1) for i in range(n)])

    @classmethod
    def zero(cls, rows, cols):
        return cls(rows, cols)

    @property
    def shape(self):
        return (self.rows, self.cols)

    @property
    def nnz(self):
        return len(self.entries)

    def to_dense(self):
        a = np.full((self.rows, self.cols), Fraction(0), dtype=object)
        for r, c, v in self.entries:
            a[r, c] = v
        return a

    def row_dicts(self):
        out = [dict() for _ in range(self.rows)]
        for r, c, v in self.entries:
            out[r][c] = v
        return out

    def column_dicts(self):
        out = [dict() for _ in range(self.cols)]
        for r, c, v in self.entries:
            out[c][r] = v
        return out

    def transpose(self):
        return SparseMatrix(self.cols, self.rows, [(c, r, v) for r, c, v in self.entries])

    T = property(transpose)

    def matvec(self, x):
        """Product with a vector given as a sequence or an index dict; returns a dense list."""
        xs = sparse_vector(x)
        out = [Fraction(0)] * self.rows
        for r, c, v in self.entries:
            if c in xs:
                out[r] += v * xs[c]
        return out

    def __matmul__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        rows_b = other.row_dicts()
        acc = {}
        for r, k, v in self.entries:
            for c, w in rows_b[k].items():
                acc[(r, c)] = acc.get((r, c), 0) + v * w
        return SparseMatrix(self.rows, other.cols, [(r, c, x) for (r, c), x in acc.items() if x])

    def hstack(self, other):
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        ents = list(self.entries) + [(r, c + self.cols, v) for r, c, v in other.entries]
        return SparseMatrix(self.rows, self.cols + other.cols, ents)

    def is_zero(self):
        return not self.entries

    def __eq__(self, other):
        return (
            isinstance(other, SparseMatrix)
            and self.shape == other.shape
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={self.nnz})"

    # serialization
    def to_json_obj(self):
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[r, c, format_rational(v)] for r, c, v in self.entries],
        }

    def to_json(self):
        return json.dumps(self.to_json_obj(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj):
        return cls(obj["rows"], obj["cols"], [(r, c, parse_rational(str(v))) for r, c, v in obj["entries"]])

    @classmethod
    def from_json(cls, s):
        return cls.from_json_obj(json.loads(s))
