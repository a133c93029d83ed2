"""Exact rational linear algebra with replayable row-operation transcripts.

Everything here works over :class:`fractions.Fraction`; there is no floating
point.  Matrices may be empty (zero rows and/or zero columns).

Row operations are recorded as tuples:

* ``("swap", i, j)``      exchange rows ``i`` and ``j``
* ``("scale", i, c)``     multiply row ``i`` by the nonzero rational ``c``
* ``("add", i, j, c)``    add ``c`` times row ``i`` to row ``j``

A column permutation ``perm`` places old column ``perm[p]`` at position ``p``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import IndexOutOfRange, InvalidInput, NormalizationUnavailable


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise InvalidInput("floating point entries are not accepted; use exact rationals")
    if isinstance(value, (list, tuple)):
        if len(value) == 1:
            return Fraction(int(value[0]))
        if len(value) != 2:
            raise InvalidInput(f"rational must be [num, den], got {value!r}")
        num, den = int(value[0]), int(value[1])
        if den == 0:
            raise InvalidInput("zero denominator")
        return Fraction(num, den)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInput(f"cannot parse rational {value!r}") from exc
    return Fraction(value)


@dataclass(frozen=True)
class RationalMatrix:
    rows: int
    cols: int
    data: tuple = ()

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise InvalidInput("matrix dimensions must be non-negative")
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            raise InvalidInput("entries do not match the declared shape")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence], cols: int | None = None) -> "RationalMatrix":
        data = tuple(tuple(as_fraction(x) for x in r) for r in rows)
        if cols is None:
            if not data:
                raise InvalidInput("column count required for a matrix with no rows")
            cols = len(data[0])
        return cls(len(data), cols, data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls(rows, cols, tuple((Fraction(0),) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(n, n, tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)))

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def row(self, i):
        return self.data[i]

    def column(self, j):
        return tuple(r[j] for r in self.data)

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    def entries(self):
        """Row-major flat tuple of entries."""
        return tuple(x for r in self.data for x in r)

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(self.cols, self.rows, tuple(self.columns()))

    def submatrix(self, rows=None, cols=None) -> "RationalMatrix":
        rows = range(self.rows) if rows is None else list(rows)
        cols = range(self.cols) if cols is None else list(cols)
        for j in cols:
            if not 0 <= j < self.cols:
                raise IndexOutOfRange(f"column index {j} out of range for {self.cols} columns")
        for i in rows:
            if not 0 <= i < self.rows:
                raise IndexOutOfRange(f"row index {i} out of range for {self.rows} rows")
        return RationalMatrix(len(rows), len(cols), tuple(tuple(self.data[i][j] for j in cols) for i in rows))

    def hstack(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.rows != other.rows:
            raise InvalidInput("hstack needs equal row counts")
        return RationalMatrix(self.rows, self.cols + other.cols,
                              tuple(a + b for a, b in zip(self.data, other.data)))

    def vstack(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.cols:
            raise InvalidInput("vstack needs equal column counts")
        return RationalMatrix(self.rows + other.rows, self.cols, self.data + other.data)

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for r in self.data for x in r)

    def int_rows(self) -> list[list[int]]:
        if not self.is_integral():
            raise InvalidInput("matrix has non-integer entries")
        return [[int(x) for x in r] for r in self.data]

    def mul_vector(self, v: Sequence) -> tuple:
        if len(v) != self.cols:
            raise InvalidInput("vector length does not match column count")
        return tuple(sum((a * x for a, x in zip(r, v)), Fraction(0)) for r in self.data)

    def zero_columns(self) -> list[int]:
        return [j for j in range(self.cols) if all(r[j] == 0 for r in self.data)]

    def column_sum(self) -> tuple:
        return tuple(sum(r, Fraction(0)) for r in self.data)

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols,
                "entries": [fraction_to_json(x) for x in self.entries()]}

    @classmethod
    def from_json(cls, obj) -> "RationalMatrix":
        try:
            rows, cols, entries = int(obj["rows"]), int(obj["cols"]), list(obj["entries"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"malformed matrix JSON: {exc}") from exc
        if len(entries) != rows * cols:
            raise InvalidInput("entries length must equal rows*cols")
        flat = [as_fraction(e) for e in entries]
        return cls(rows, cols, tuple(tuple(flat[i * cols:(i + 1) * cols]) for i in range(rows)))

    def __str__(self):
        if not self.rows:
            return f"<empty {self.rows}x{self.cols}>"
        return "\n".join("[" + " ".join(f"{str(x):>5}" for x in r) + "]" for r in self.data)


def fraction_to_json(x: Fraction):
    x = as_fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return [str(x.numerator), str(x.denominator)]


def matrix(rows, cols=None) -> RationalMatrix:
    """Shorthand constructor: ``matrix([[1, -2, 1, 0], [1, -1, 0, 1]])``."""
    if isinstance(rows, RationalMatrix):
        return rows
    return RationalMatrix.from_rows(rows, cols)


@dataclass(frozen=True)
class Transform:
    row_ops: tuple = ()
    col_perm: tuple = field(default=None)

    def to_json(self) -> dict:
        ops = []
        for op in self.row_ops:
            if op[0] == "swap":
                ops.append(["swap", op[1], op[2]])
            elif op[0] == "scale":
                ops.append(["scale", op[1], fraction_to_json(op[2])])
            else:
                ops.append(["add", op[1], op[2], fraction_to_json(op[3])])
        return {"rowOps": ops, "colPerm": None if self.col_perm is None else list(self.col_perm)}

    @classmethod
    def from_json(cls, obj) -> "Transform":
        ops = []
        for op in obj.get("rowOps", []):
            if op[0] == "swap":
                ops.append(("swap", int(op[1]), int(op[2])))
            elif op[0] == "scale":
                ops.append(("scale", int(op[1]), as_fraction(op[2])))
            elif op[0] == "add":
                ops.append(("add", int(op[1]), int(op[2]), as_fraction(op[3])))
            else:
                raise InvalidInput(f"unknown row operation {op[0]!r}")
        perm = obj.get("colPerm")
        return cls(tuple(ops), None if perm is None else tuple(int(p) for p in perm))


def apply_row_ops(rows: list[list], ops) -> list[list]:
    """Apply ``ops`` in place to a list-of-lists matrix and return it."""
    for op in ops:
        kind = op[0]
        if kind == "swap":
            _, i, j = op
            rows[i], rows[j] = rows[j], rows[i]
        elif kind == "scale":
            _, i, c = op
            if c == 0:
                raise InvalidInput("scale by zero is not an invertible row operation")
            rows[i] = [c * x for x in rows[i]]
        elif kind == "add":
            _, i, j, c = op
            if i == j:
                raise InvalidInput("add operation needs distinct rows")
            ri = rows[i]
            rows[j] = [y + c * x for x, y in zip(ri, rows[j])]
        else:
            raise InvalidInput(f"unknown row operation {kind!r}")
    return rows


def apply_transform(M: RationalMatrix, T: Transform) -> RationalMatrix:
    perm = range(M.cols) if T.col_perm is None else T.col_perm
    if sorted(perm) != list(range(M.cols)):
        raise InvalidInput("column permutation is not a bijection on the columns")
    rows = [[r[p] for p in perm] for r in M.data]
    apply_row_ops(rows, T.row_ops)
    return RationalMatrix(M.rows, M.cols, tuple(tuple(r) for r in rows))


def _rref_rows(rows: list[list[Fraction]], ncols: int, ops: list | None = None,
               pivot_cols: Sequence[int] | None = None):
    """Gauss-Jordan elimination in place; returns the pivot columns."""
    nrows = len(rows)
    pivots = []
    r = 0
    for c in (range(ncols) if pivot_cols is None else pivot_cols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            rows[p], rows[r] = rows[r], rows[p]
            if ops is not None:
                ops.append(("swap", p, r))
        piv = rows[r][c]
        if piv != 1:
            inv = 1 / piv
            rows[r] = [inv * x for x in rows[r]]
            if ops is not None:
                ops.append(("scale", r, inv))
        pr = rows[r]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                f = -rows[i][c]
                rows[i] = [y + f * x for x, y in zip(pr, rows[i])]
                if ops is not None:
                    ops.append(("add", r, i, f))
        pivots.append(c)
        r += 1
    return pivots


def rref(M: RationalMatrix):
    """Reduced row echelon form and the transcript that produces it.

    >>> R, T = rref(matrix([[2, 4], [1, 2]]))
    >>> [[int(x) for x in row] for row in R.data]
    [[1, 2], [0, 0]]
    """
    rows = [list(r) for r in M.data]
    ops: list = []
    _rref_rows(rows, M.cols, ops)
    R = RationalMatrix(M.rows, M.cols, tuple(tuple(r) for r in rows))
    return R, Transform(tuple(ops), tuple(range(M.cols)))


def pivot_columns(M: RationalMatrix) -> list[int]:
    rows = [list(r) for r in M.data]
    return _rref_rows(rows, M.cols)


def _integer_rows(vectors) -> list[list[int]]:
    out = []
    for v in vectors:
        den = 1
        for x in v:
            if isinstance(x, Fraction) and x.denominator != 1:
                den = den * x.denominator // math.gcd(den, x.denominator)
        out.append([int(x * den) for x in v])
    return out


def int_rank(rows: list[list[int]]) -> int:
    """Rank of an integer matrix by fraction-free elimination (rows are copied)."""
    rows = [r[:] for r in rows if any(r)]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for c in range(ncols):
        p = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if p is None:
            continue
        rows[rank], rows[p] = rows[p], rows[rank]
        pr = rows[rank]
        a = pr[c]
        for i in range(rank + 1, len(rows)):
            b = rows[i][c]
            if b:
                ri = [a * y - b * x for x, y in zip(pr, rows[i])]
                g = math.gcd(*ri)
                rows[i] = [y // g for y in ri] if g > 1 else ri
        rank += 1
        if rank == len(rows):
            break
    return rank


def vectors_rank(vectors) -> int:
    """Rank of a finite family of rational vectors of equal length."""
    vectors = [v for v in vectors]
    if not vectors:
        return 0
    return int_rank(_integer_rows(vectors))


def rank(M: RationalMatrix) -> int:
    if M.rows == 0 or M.cols == 0:
        return 0
    return int_rank(_integer_rows(M.data))


def column_span_dim(M: RationalMatrix, subset) -> int:
    subset = list(subset)
    for j in subset:
        if not 0 <= j < M.cols:
            raise IndexOutOfRange(f"column index {j} out of range for {M.cols} columns")
    if not subset or M.rows == 0:
        return 0
    return vectors_rank([M.column(j) for j in subset])


def primitive_integer_vector(v: Sequence) -> tuple:
    """Scale a rational vector to coprime integers, keeping its direction."""
    ints = _integer_rows([v])[0]
    g = math.gcd(*ints) if ints else 0
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(Fraction(x) for x in ints)


def kernel_basis(M: RationalMatrix, normalize: bool = False) -> tuple:
    """Basis of the right null space of ``M`` as primitive integer vectors.

    With ``normalize=True`` the all-ones vector comes first and every other
    basis vector has first coordinate zero; this needs the columns of ``M``
    to sum to zero.
    """
    rows = [list(r) for r in M.data]
    pivots = _rref_rows(rows, M.cols)
    free = [c for c in range(M.cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * M.cols
        v[f] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -rows[r][f]
        basis.append(primitive_integer_vector(v))
    if not normalize:
        return tuple(basis)

    if any(x != 0 for x in M.column_sum()):
        raise NormalizationUnavailable("columns do not sum to zero, so the all-ones vector is not in the kernel")
    ones = tuple(Fraction(1) for _ in range(M.cols))
    out = [ones]
    for v in basis:
        w = tuple(x - v[0] for x in v)
        if vectors_rank(out + [w]) > len(out):
            out.append(primitive_integer_vector(w))
    return tuple(out)


def solve(M: RationalMatrix, b: Sequence):
    """One solution of ``M x = b`` (free variables set to 0), or ``None``."""
    if len(b) != M.rows:
        raise InvalidInput("right-hand side length does not match row count")
    rows = [list(r) + [as_fraction(x)] for r, x in zip(M.data, b)]
    pivots = _rref_rows(rows, M.cols + 1, pivot_cols=range(M.cols))
    for r in range(len(pivots), M.rows):
        if rows[r][M.cols] != 0:
            return None
    x = [Fraction(0)] * M.cols
    for r, c in enumerate(pivots):
        x[c] = rows[r][M.cols]
    return tuple(x)


def det(M: RationalMatrix) -> Fraction:
    if M.rows != M.cols:
        raise InvalidInput("determinant needs a square matrix")
    rows = [list(r) for r in M.data]
    n = M.rows
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            rows[p], rows[c] = rows[c], rows[p]
            d = -d
        d *= rows[c][c]
        for i in range(c + 1, n):
            if rows[i][c] != 0:
                f = rows[i][c] / rows[c][c]
                rows[i] = [y - f * x for x, y in zip(rows[c], rows[i])]
    return d


def integralize_rows(rows: list[list[Fraction]], ops: list, row_indices=None) -> None:
    """Scale rows in place to primitive integer rows, recording ``scale`` ops."""
    for i in (range(len(rows)) if row_indices is None else row_indices):
        r = rows[i]
        if not any(r):
            continue
        prim = primitive_integer_vector(r)
        j = next(j for j, x in enumerate(r) if x != 0)
        c = prim[j] / r[j]
        if c != 1:
            rows[i] = [c * x for x in r]
            ops.append(("scale", i, c))
