"""Columns condition certificates, the (A B; 0 C) normal form, the
quasi-partitionable block decomposition and the integrality preprocessing
applied to a split system ``A x^k = B y^k, C y^k = 0``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

from .errors import (ColumnsConditionFails, HypothesisFails, InvalidInput, InvariantViolation,
                     NotFullRowRank, NotInteger, RankDeficient, SizeLimitExceeded)
from .linalg import (RationalMatrix, Transform, _integer_rows, _rref_rows, apply_transform,
                     fraction_to_json, int_rank, integralize_rows, matrix, primitive_integer_vector,
                     rank, solve)
from .matroid import ColumnMatroid, is_quasi_partitionable, largest_flat, mu, q_profile

COLUMNS_CONDITION_CAP = 12


# ---------------------------------------------------------------- columns condition

@dataclass(frozen=True)
class ColumnsCertificate:
    blocks: tuple
    witnesses: tuple  # witnesses[t] maps earlier column -> coefficient; witnesses[0] is empty

    def to_json(self):
        return {"blocks": [list(b) for b in self.blocks],
                "witnesses": [{str(j): fraction_to_json(c) for j, c in sorted(w.items())}
                              for w in self.witnesses]}


def _lex_subsets(items):
    for i, a in enumerate(items):
        yield (a,)
        for rest in _lex_subsets(items[i + 1:]):
            yield (a,) + rest


class _ColumnsSearch:
    """Depth-first search over ordered set partitions, memoising dead ends."""

    def __init__(self, M: RationalMatrix):
        self.M = M
        self.s = M.cols
        scaled = _integer_rows([M.entries()])[0] if M.rows else []
        self.cols = [tuple(scaled[i * M.cols + j] for i in range(M.rows)) for j in range(M.cols)]
        self.dead = set()
        self._rank = {}

    def _span_rank(self, used):
        r = self._rank.get(used)
        if r is None:
            vecs = [list(self.cols[j]) for j in range(self.s) if used >> j & 1]
            r = int_rank(vecs) if vecs and self.M.rows else 0
            self._rank[used] = r
        return r

    def block_ok(self, used, block):
        total = [sum(self.cols[j][i] for j in block) for i in range(self.M.rows)]
        if not any(total):
            return True
        if not used:
            return False
        vecs = [list(self.cols[j]) for j in range(self.s) if used >> j & 1]
        return int_rank(vecs + [total]) == self._span_rank(used)

    def complete(self, used):
        """Lexicographically least list of remaining blocks, or None."""
        full = (1 << self.s) - 1
        if used == full:
            return []
        if used in self.dead:
            return None
        remaining = [j for j in range(self.s) if not used >> j & 1]
        for block in _lex_subsets(remaining):
            if not self.block_ok(used, block):
                continue
            mask = used
            for j in block:
                mask |= 1 << j
            tail = self.complete(mask)
            if tail is not None:
                return [block] + tail
        self.dead.add(used)
        return None

    def first_blocks(self):
        """All zero-sum subsets that extend to a full certificate."""
        out = []
        for block in _lex_subsets(list(range(self.s))):
            if self.block_ok(0, block):
                mask = sum(1 << j for j in block)
                if self.complete(mask) is not None:
                    out.append(block)
        return out


def _witnesses(M: RationalMatrix, blocks):
    out = [{}]
    prior = []
    for t, block in enumerate(blocks):
        if t:
            target = [sum((M[i, j] for j in block), Fraction(0)) for i in range(M.rows)]
            coeffs = solve(M.submatrix(cols=prior), target)
            if coeffs is None:
                raise InvariantViolation("columns certificate block has no witness")
            out.append({j: c for j, c in zip(prior, coeffs) if c != 0})
        prior.extend(block)
    return tuple(out)


def _certificate(M, blocks):
    blocks = tuple(tuple(b) for b in blocks)
    return ColumnsCertificate(blocks, _witnesses(M, blocks))


def _check_cap(M, cap):
    if M.cols < 1:
        raise InvalidInput("the columns condition needs at least one column")
    if M.cols > cap:
        raise SizeLimitExceeded(f"{M.cols} columns exceeds the columns-condition cap of {cap}")


def check_columns_condition(M, cap: int = COLUMNS_CONDITION_CAP):
    """Lexicographically least columns-condition certificate, or ``None``."""
    M = matrix(M)
    _check_cap(M, cap)
    blocks = _ColumnsSearch(M).complete(0)
    if blocks is None:
        return None
    return _certificate(M, blocks)


def validate_columns_certificate(M, cert: ColumnsCertificate) -> bool:
    M = matrix(M)
    flat = sorted(j for b in cert.blocks for j in b)
    if flat != list(range(M.cols)) or any(not b for b in cert.blocks):
        return False
    prior = []
    for t, block in enumerate(cert.blocks):
        total = [sum((M[i, j] for j in block), Fraction(0)) for i in range(M.rows)]
        if t == 0:
            if any(total):
                return False
        else:
            w = cert.witnesses[t]
            if any(j not in prior for j in w):
                return False
            combo = [sum((c * M[i, j] for j, c in w.items()), Fraction(0)) for i in range(M.rows)]
            if combo != total:
                return False
        prior.extend(block)
    return True


def _has_zero_subsum(values) -> bool:
    sums = set()
    for x in values:
        sums |= {x} | {s + x for s in sums}
        if 0 in sums:
            return True
    return False


def falsify_property_iii(M, samples: int = 1000, seed=0, box: int = 10):
    """Search the row space for a vector whose nonzero entries have no zero subsum.

    Such a vector proves the columns condition fails.  Finding nothing proves
    nothing.  The rows themselves are tried before random combinations.
    """
    M = matrix(M)
    rng = random.Random(seed)
    candidates = [list(r) for r in M.data]
    for _ in range(samples):
        candidates.append([rng.randint(-box, box) for _ in range(M.rows)])
    for i, y in enumerate(candidates):
        if i < M.rows:
            v = y
        else:
            if not any(y):
                continue
            v = [sum((c * M[r, j] for r, c in enumerate(y)), Fraction(0)) for j in range(M.cols)]
        if not any(v):
            continue
        if not _has_zero_subsum([x for x in v if x != 0]):
            w = [int(x) for x in primitive_integer_vector(v)]
            if next(x for x in w if x != 0) < 0:
                w = [-x for x in w]
            return tuple(w)
    return None


# ---------------------------------------------------------------- normal form

@dataclass
class NormalForm:
    transform: Transform
    n: int
    s: int
    m: int
    t: int
    A: RationalMatrix
    B: RationalMatrix
    C: RationalMatrix
    certificate: ColumnsCertificate
    c_certificate: ColumnsCertificate | None = None

    def assembled(self) -> RationalMatrix:
        top = self.A.hstack(self.B)
        bottom = RationalMatrix.zeros(self.m, self.s).hstack(self.C)
        return top.vstack(bottom)

    def to_json(self):
        return {"n": self.n, "s": self.s, "m": self.m, "t": self.t,
                "A": self.A.to_json(), "B": self.B.to_json(), "C": self.C.to_json(),
                "transform": self.transform.to_json(),
                "certificate": self.certificate.to_json(),
                "cCertificate": None if self.c_certificate is None else self.c_certificate.to_json()}


def _require_full_rank(M):
    r = rank(M)
    if r != M.rows:
        raise NotFullRowRank(f"matrix has rank {r} < {M.rows} rows")


def to_normal_form(M, cap: int = COLUMNS_CONDITION_CAP) -> NormalForm:
    """Bring ``M`` to the block form (A B; 0 C).

    The leading column set is the largest first block of any columns
    certificate (ties broken towards the smallest indices).
    """
    M = matrix(M)
    _check_cap(M, cap)
    _require_full_rank(M)
    search = _ColumnsSearch(M)
    firsts = search.first_blocks()
    if not firsts:
        raise ColumnsConditionFails("matrix does not obey the columns condition")
    lead = min(firsts, key=lambda b: (-len(b), b))
    mask = sum(1 << j for j in lead)
    cert = _certificate(M, [lead] + search.complete(mask))

    rest = [j for j in range(M.cols) if j not in lead]
    perm = tuple(lead) + tuple(rest)
    rows = [[r[p] for p in perm] for r in M.data]
    ops = []
    pivots = _rref_rows(rows, M.cols, ops, pivot_cols=range(len(lead)))
    integralize_rows(rows, ops)
    n, s = len(pivots), len(lead)
    m, t = M.rows - n, M.cols - s
    full = RationalMatrix(M.rows, M.cols, tuple(tuple(r) for r in rows))
    A = full.submatrix(range(n), range(s))
    B = full.submatrix(range(n), range(s, M.cols))
    C = full.submatrix(range(n, M.rows), range(s, M.cols))
    c_cert = None
    if m and t:
        c_cert = check_columns_condition(C, cap)
        if c_cert is None:
            raise InvariantViolation("lower block lost the columns condition")
    nf = NormalForm(Transform(tuple(ops), perm), n, s, m, t, A, B, C, cert, c_cert)
    if not validate_normal_form(M, nf):
        raise InvariantViolation("normal form failed its own validation")
    return nf


def validate_normal_form(M, nf: NormalForm) -> bool:
    M = matrix(M)
    replay = apply_transform(M, nf.transform)
    if replay != nf.assembled():
        return False
    if rank(nf.A) != nf.n or any(x != 0 for x in nf.A.column_sum()):
        return False
    if nf.m and nf.t and check_columns_condition(nf.C) is None:
        return False
    return True


# ---------------------------------------------------------------- decomposition

@dataclass
class DecompositionResult:
    transform: Transform
    q: int
    shapes: tuple          # (n_i, s_i) per diagonal block
    blocks: tuple          # the diagonal blocks M_i
    transformed: RationalMatrix

    def to_json(self):
        return {"q": self.q, "shapes": [list(sh) for sh in self.shapes],
                "blocks": [b.to_json() for b in self.blocks],
                "transform": self.transform.to_json()}


def is_block_upper_triangular(T: RationalMatrix, shapes) -> bool:
    r0 = c0 = 0
    for n_i, s_i in shapes:
        for i in range(r0 + n_i, T.rows):
            if any(T[i, j] != 0 for j in range(c0, c0 + s_i)):
                return False
        r0 += n_i
        c0 += s_i
    return r0 == T.rows and c0 == T.cols


def decompose_quasi(M, q: int) -> DecompositionResult:
    """Block upper triangular form whose diagonal blocks are quasi-q-partitionable."""
    M = matrix(M)
    _require_full_rank(M)
    if M.zero_columns():
        raise InvalidInput("matrix has zero columns")
    qs = q_profile(M)
    for d in range(1, M.rows + 1):
        if qs[d] <= d * q:
            raise HypothesisFails(d, qs[d])

    rows = [list(r) for r in M.data]
    perm = list(range(M.cols))
    ops = []
    r0 = c0 = 0
    shapes = []
    while r0 < M.rows:
        sub = RationalMatrix(M.rows - r0, M.cols - c0, tuple(tuple(r[c0:]) for r in rows[r0:]))
        if is_quasi_partitionable(sub, q).holds:
            shapes.append((sub.rows, sub.cols))
            break
        mat = ColumnMatroid(sub)
        d0 = next(d for d in range(1, sub.rows) if mu(mat, d) > d * q)
        flat = largest_flat(mat, d0)
        order = list(flat) + [j for j in range(sub.cols) if j not in flat]
        perm[c0:] = [perm[c0 + j] for j in order]
        rows = [r[:c0] + [r[c0 + j] for j in order] for r in rows]
        local = rows[r0:]
        local_ops = []
        pivots = _rref_rows(local, M.cols, local_ops, pivot_cols=range(c0, c0 + len(flat)))
        if len(pivots) != d0:
            raise InvariantViolation("leading flat does not have the expected rank")
        integralize_rows(local, local_ops)
        rows[r0:] = local
        ops.extend(_shift_op(op, r0) for op in local_ops)
        shapes.append((d0, len(flat)))
        r0 += d0
        c0 += len(flat)

    T = RationalMatrix(M.rows, M.cols, tuple(tuple(r) for r in rows))
    transform = Transform(tuple(ops), tuple(perm))
    blocks = []
    r0 = c0 = 0
    for n_i, s_i in shapes:
        blocks.append(T.submatrix(range(r0, r0 + n_i), range(c0, c0 + s_i)))
        r0 += n_i
        c0 += s_i
    result = DecompositionResult(transform, q, tuple(shapes), tuple(blocks), T)
    if apply_transform(M, transform) != T or not is_block_upper_triangular(T, shapes):
        raise InvariantViolation("decomposition transcript does not replay")
    for (n_i, s_i), b in zip(shapes, blocks):
        if s_i <= n_i * q or not is_quasi_partitionable(b, q).holds:
            raise InvariantViolation("diagonal block is not quasi-partitionable")
    return result


def _shift_op(op, offset):
    if op[0] == "swap":
        return ("swap", op[1] + offset, op[2] + offset)
    if op[0] == "scale":
        return ("scale", op[1] + offset, op[2])
    return ("add", op[1] + offset, op[2] + offset, op[3])


# ---------------------------------------------------------------- preprocessing

def has_diagonal_submatrix(A: RationalMatrix) -> bool:
    """Whether ``A`` has an n x n non-singular diagonal submatrix."""
    used = set()
    for i in range(A.rows):
        private = [j for j in range(A.cols)
                   if A[i, j] != 0 and all(A[r, j] == 0 for r in range(A.rows) if r != i)]
        private = [j for j in private if j not in used]
        if not private:
            return False
        used.add(private[0])
    return True


def diagonal_columns(A: RationalMatrix) -> list[int]:
    """Column carrying the private nonzero entry of each row (first such column)."""
    out = []
    for i in range(A.rows):
        out.append(next(j for j in range(A.cols)
                        if A[i, j] != 0 and all(A[r, j] == 0 for r in range(A.rows) if r != i)))
    return out


def rows_coprime(A: RationalMatrix) -> bool:
    return all(math.gcd(*(int(x) for x in r)) == 1 for r in A.data)


def entries_divisible(A: RationalMatrix, B: RationalMatrix) -> bool:
    """Every entry of ``B`` divisible by every nonzero entry of ``A``."""
    divisors = {abs(int(x)) for x in A.entries() if x != 0}
    return all(int(b) % a == 0 for b in B.entries() for a in divisors)


@dataclass
class PreprocessedSystem:
    A: RationalMatrix
    B: RationalMatrix
    C: RationalMatrix
    K: int
    k: int
    row_ops: tuple = ()
    column_factor: int = 1   # B and C were multiplied by K^(k^2)
    y_scale: int = 1         # a solution (x, y) maps back to (x, K^k y)

    def lift_solution(self, x, y):
        return tuple(x), tuple(self.y_scale * v for v in y)

    def conditions(self) -> dict:
        return {"diagonal": has_diagonal_submatrix(self.A),
                "coprimeRows": rows_coprime(self.A),
                "divisible": entries_divisible(self.A, self.B)}

    def to_json(self):
        return {"A": self.A.to_json(), "B": self.B.to_json(), "C": self.C.to_json(),
                "K": str(self.K), "k": self.k, "columnFactor": str(self.column_factor),
                "yScale": str(self.y_scale), "conditions": self.conditions(),
                "rowOps": Transform(self.row_ops).to_json()["rowOps"]}


def preprocess_system(A, B, C=None, k: int = 1) -> PreprocessedSystem:
    """Rescale and row-reduce a split system so that the diagonal, coprimality
    and divisibility conditions hold.

    If ``A`` has no diagonal submatrix, fraction-free row operations on the
    top rows create one.  Then with ``K = |product of nonzero entries of A|``
    the ``y`` columns are multiplied by ``K^(k^2)`` and each top row is divided
    by the gcd of its ``A`` part.
    """
    A, B = matrix(A), matrix(B)
    C = RationalMatrix.zeros(0, B.cols) if C is None or (not isinstance(C, RationalMatrix) and not len(C)) \
        else matrix(C)
    for name, X in (("A", A), ("B", B), ("C", C)):
        if not X.is_integral():
            raise NotInteger(f"{name} must have integer entries")
    if k < 1:
        raise InvalidInput("degree must be positive")
    n, s = A.shape
    if B.rows != n or C.cols != B.cols:
        raise InvalidInput("shapes of A, B, C are inconsistent")
    if rank(A) != n:
        raise RankDeficient("A must have full row rank")
    if any(x != 0 for x in A.column_sum()):
        raise InvalidInput("columns of A must sum to zero")

    top = [[int(x) for x in ra + rb] for ra, rb in zip(A.data, B.data)]
    ops = []
    if not has_diagonal_submatrix(A):
        r = 0
        for c in range(s):
            p = next((i for i in range(r, n) if top[i][c]), None)
            if p is None:
                continue
            if p != r:
                top[p], top[r] = top[r], top[p]
                ops.append(("swap", p, r))
            a = top[r][c]
            for i in range(n):
                b = top[i][c]
                if i != r and b:
                    g = math.gcd(a, b)
                    if a // g != 1:
                        top[i] = [(a // g) * x for x in top[i]]
                        ops.append(("scale", i, Fraction(a // g)))
                    top[i] = [x - (b // g) * y for x, y in zip(top[i], top[r])]
                    ops.append(("add", r, i, Fraction(-(b // g))))
            r += 1
            if r == n:
                break
    A1 = [row[:s] for row in top]
    K = abs(reduce(lambda u, v: u * v, (x for row in A1 for x in row if x), 1))
    factor = K ** (k * k)
    B1 = [[factor * x for x in row[s:]] for row in top]
    C1 = [[factor * int(x) for x in row] for row in C.data]
    for i in range(n):
        g = math.gcd(*A1[i])
        if g > 1:
            if any(x % g for x in B1[i]):
                raise InvariantViolation("row gcd does not divide the rescaled B row")
            A1[i] = [x // g for x in A1[i]]
            B1[i] = [x // g for x in B1[i]]
            ops.append(("scale", i, Fraction(1, g)))
    out = PreprocessedSystem(matrix(A1, s), matrix(B1, B.cols), matrix(C1, C.cols) if C.rows else C,
                             K, k, tuple(ops), factor, K ** k)
    if not all(out.conditions().values()):
        raise InvariantViolation(f"preprocessing conditions failed: {out.conditions()}")
    return out
