"""The column vector matroid of a rational matrix.

Provides mu(d;M) (largest set of columns spanning dimension <= d), the
q-profile (smallest support of d independent row-space vectors), condition
(I), k-partitionability with an explicit certificate found by matroid
partitioning, and quasi-partitionability.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import InvalidInput, InvariantViolation, NotFullRowRank, ShapeMismatch, SizeLimitExceeded
from .linalg import RationalMatrix, _integer_rows, det, int_rank, matrix

DEFAULT_COLUMN_CAP = 24


class ColumnMatroid:
    """Rank oracle on column subsets, memoised by bitmask."""

    def __init__(self, M: RationalMatrix, cap: int = DEFAULT_COLUMN_CAP):
        if M.cols > cap:
            raise SizeLimitExceeded(f"{M.cols} columns exceeds the cap of {cap}")
        self.M = M
        self.n = M.cols
        # scaling a column does not change any rank
        self._cols = _integer_rows(M.columns()) if M.rows else [[] for _ in range(M.cols)]
        self._cache = {0: 0}

    def rank(self, subset) -> int:
        mask = 0
        for j in subset:
            mask |= 1 << j
        return self.rank_mask(mask)

    def rank_mask(self, mask: int) -> int:
        r = self._cache.get(mask)
        if r is None:
            vecs = [self._cols[j] for j in range(self.n) if mask >> j & 1]
            r = int_rank(vecs) if vecs and vecs[0] else 0
            self._cache[mask] = r
        return r

    def is_independent(self, subset) -> bool:
        subset = list(subset)
        return self.rank(subset) == len(subset)

    def closure(self, subset) -> tuple:
        base = self.rank(subset)
        mask = 0
        for j in subset:
            mask |= 1 << j
        return tuple(j for j in range(self.n) if self.rank_mask(mask | 1 << j) == base)

    def full_rank(self) -> int:
        return self.rank_mask((1 << self.n) - 1)


def _as_matroid(M, cap=DEFAULT_COLUMN_CAP) -> ColumnMatroid:
    if isinstance(M, ColumnMatroid):
        return M
    return ColumnMatroid(matrix(M), cap)


def largest_flat(M, d: int, cap: int = DEFAULT_COLUMN_CAP) -> tuple:
    """A largest set of columns spanning dimension <= d.

    Among all maximum-size choices the lexicographically least sorted tuple is
    returned, so the answer is reproducible.
    """
    mat = _as_matroid(M, cap)
    rows = mat.M.rows
    if not 0 <= d <= rows:
        raise InvalidInput(f"d must lie in 0..{rows}, got {d}")
    r = mat.full_rank()
    if d >= r:
        return tuple(range(mat.n))
    zero = tuple(j for j in range(mat.n) if mat.rank_mask(1 << j) == 0)
    if d == 0:
        return zero
    nonzero = [j for j in range(mat.n) if j not in zero]
    best = None
    seen = set()
    # every flat of rank < d lies inside one of rank d, so size-d independent sets suffice
    for basis in itertools.combinations(nonzero, d):
        if not mat.is_independent(basis):
            continue
        flat = mat.closure(basis)
        if flat in seen:
            continue
        seen.add(flat)
        if best is None or len(flat) > len(best) or (len(flat) == len(best) and flat < best):
            best = flat
    return best


def mu(M, d: int, cap: int = DEFAULT_COLUMN_CAP) -> int:
    """Largest number of columns of ``M`` whose span has dimension at most ``d``."""
    return len(largest_flat(M, d, cap))


def mu_profile(M, cap: int = DEFAULT_COLUMN_CAP) -> tuple:
    mat = _as_matroid(M, cap)
    return tuple(mu(mat, d) for d in range(mat.full_rank() + 1))


def q_profile(M, cap: int = DEFAULT_COLUMN_CAP) -> tuple:
    """``(q(0), ..., q(n))`` for a full-row-rank ``M``.

    Row-space vectors supported inside ``T`` form a space of dimension
    ``n - rank(columns outside T)``, so ``q(d)`` is the least ``|T|`` with
    ``rank(columns outside T) <= n - d``, i.e. ``s - mu(n - d)``.
    """
    mat = _as_matroid(M, cap)
    n, s = mat.M.rows, mat.M.cols
    if mat.full_rank() != n:
        raise NotFullRowRank(f"matrix has rank {mat.full_rank()} < {n} rows; delete dependent rows first")
    return tuple(s - mu(mat, n - d) for d in range(n + 1))


@dataclass
class ConditionIReport:
    holds: bool
    k: int
    q: tuple
    failures: list = field(default_factory=list)

    def to_json(self):
        return {"k": self.k, "holds": self.holds,
                "failures": [{"d": d, "q": qd, "threshold": t} for d, qd, t in self.failures]}


def check_condition_I(M, k: int, cap: int = DEFAULT_COLUMN_CAP) -> ConditionIReport:
    """Check ``q(d) >= d*k^2 + 1`` for every ``1 <= d <= rank``."""
    if k < 1:
        raise InvalidInput("degree k must be positive")
    q = q_profile(M, cap)
    failures = [(d, q[d], d * k * k + 1) for d in range(1, len(q)) if q[d] < d * k * k + 1]
    return ConditionIReport(not failures, k, q, failures)


@dataclass(frozen=True)
class PartitionCertificate:
    k: int
    blocks: tuple

    def to_json(self):
        return {"k": self.k, "blocks": [list(b) for b in self.blocks]}


def validate_partition(M: RationalMatrix, cert: PartitionCertificate) -> bool:
    n = M.rows
    used = sorted(j for b in cert.blocks for j in b)
    if used != list(range(M.cols)) or len(cert.blocks) != cert.k:
        return False
    return all(len(b) == n and det(M.submatrix(cols=b)) != 0 for b in cert.blocks)


def matroid_partition(elements, oracles):
    """Cover ``elements`` by sets independent in the given matroids.

    ``oracles[j](S)`` reports independence of the list ``S`` in matroid ``j``.
    Elements are inserted in increasing order, each by a breadth-first
    shortest augmenting path in the exchange graph (lowest index first).
    Returns the list of sets or ``None`` if no cover exists.
    """
    k = len(oracles)
    sets = [[] for _ in range(k)]
    owner = {}
    for x in sorted(elements):
        parent = {x: None}
        queue = [x]
        found = None
        head = 0
        while head < len(queue) and found is None:
            u = queue[head]
            head += 1
            for j in range(k):
                if owner.get(u) == j:
                    continue
                if oracles[j](sets[j] + [u]):
                    found = (u, j)
                    break
                for y in sorted(sets[j]):
                    if y in parent:
                        continue
                    if oracles[j]([e for e in sets[j] if e != y] + [u]):
                        parent[y] = (u, j)
                        queue.append(y)
        if found is None:
            return None
        u, j = found
        moves = [(u, j)]
        while parent[u] is not None:
            p, jj = parent[u]
            moves.append((p, jj))
            u = p
        # each move: element enters set jj, displacing the element that moved before it
        for elem, target in moves:
            prev = owner.get(elem)
            if prev is not None:
                sets[prev].remove(elem)
            sets[target].append(elem)
            owner[elem] = target
        for j in range(k):
            if not oracles[j](sets[j]):
                raise InvariantViolation("augmentation produced a dependent set")
    return [sorted(s) for s in sets]


def _partition_exists(mat: ColumnMatroid, ground, k, forced=(), forbidden=()):
    n = mat.M.rows
    forced = list(forced)
    forbidden = set(forbidden)
    rest = [e for e in ground if e not in forced]

    def first(S):
        if any(e in forbidden for e in S):
            return False
        return len(S) <= n - len(forced) and mat.rank(forced + S) == len(forced) + len(S)

    def plain(S):
        return len(S) <= n and mat.rank(S) == len(S)

    if mat.rank(forced) != len(forced):
        return None
    return matroid_partition(rest, [first] + [plain] * (k - 1))


def _aigner_criterion(mat: ColumnMatroid, k: int) -> bool:
    return all(mu(mat, d) <= d * k for d in range(mat.M.rows + 1))


def is_k_partitionable(M, k: int, cap: int = DEFAULT_COLUMN_CAP):
    """Certificate of k-partitionability or ``None``.

    Existence is decided twice, by the mu(d) <= dk criterion and by matroid
    partitioning; the emitted certificate is the lexicographically least one.
    """
    M = matrix(M)
    if k < 1 or M.cols != k * M.rows:
        raise ShapeMismatch(f"need cols = k*rows, got {M.cols} columns, {M.rows} rows, k={k}")
    if M.rows == 0:
        return PartitionCertificate(k, tuple(() for _ in range(k)))
    mat = ColumnMatroid(M, cap)
    by_mu = _aigner_criterion(mat, k)
    constructive = matroid_partition(range(M.cols), [lambda S: mat.is_independent(S)] * k)
    if by_mu != (constructive is not None):
        raise InvariantViolation("mu criterion and matroid partitioning disagree")
    if not by_mu:
        return None

    n = M.rows
    remaining = list(range(M.cols))
    blocks = []
    for parts in range(k, 0, -1):
        block = [remaining[0]]
        excluded = []
        for c in remaining[1:]:
            if len(block) == n:
                break
            if _partition_exists(mat, remaining, parts, block + [c], excluded) is not None:
                block.append(c)
            else:
                excluded.append(c)
        if len(block) != n:
            raise InvariantViolation("greedy certificate construction stalled")
        blocks.append(tuple(block))
        remaining = [e for e in remaining if e not in block]
    cert = PartitionCertificate(k, tuple(blocks))
    if not validate_partition(M, cert):
        raise InvariantViolation("emitted partition certificate is invalid")
    return cert


@dataclass
class QuasiReport:
    holds: bool
    q: int
    violated_d: int | None = None
    reason: str | None = None

    def to_json(self):
        return {"q": self.q, "holds": self.holds, "violatedD": self.violated_d, "reason": self.reason}


def is_quasi_partitionable(M, q: int, cap: int = DEFAULT_COLUMN_CAP) -> QuasiReport:
    """``s >= n*q`` and ``mu(d) <= d*q`` for all ``0 <= d < n``."""
    M = matrix(M)
    if M.rows == 0 or M.cols == 0:
        raise InvalidInput("quasi-partitionability is defined for non-empty matrices")
    n, s = M.rows, M.cols
    if s < n * q:
        return QuasiReport(False, q, None, "size")
    mat = ColumnMatroid(M, cap)
    for d in range(n):
        if mu(mat, d) > d * q:
            return QuasiReport(False, q, d, "mu")
    return QuasiReport(True, q)


def matroid_report(M, k: int, cap: int = DEFAULT_COLUMN_CAP) -> dict:
    M = matrix(M)
    mat = ColumnMatroid(M, cap)
    out = {"mu": list(mu_profile(mat))}
    try:
        report = check_condition_I(mat, k)
        out["q"] = list(report.q)
        out["conditionI"] = report.to_json()
    except NotFullRowRank:
        out["q"] = None
        out["conditionI"] = None
    if M.cols == k * M.rows:
        cert = is_k_partitionable(M, k, cap)
        out["partition"] = {"k": k, "blocks": None if cert is None else [list(b) for b in cert.blocks]}
    else:
        out["partition"] = None
    return out
