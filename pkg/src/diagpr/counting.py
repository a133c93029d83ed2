"""Exact solution counting for diagonal systems ``M x^k = 0`` over finite boxes.

The engine is a meet-in-the-middle join: partial sums of the left half of
the variables are tabulated in a hash table keyed by the exact integer
vector, then matched against the negated partial sums of the right half.
Solutions with pairwise distinct coordinates are obtained by Moebius
inversion over set partitions of the variables (variables in a block are
merged into one).
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from .errors import DegenerateSeries, IndexOutOfRange, InvalidInput, NotInteger, SizeLimitExceeded
from .linalg import RationalMatrix, matrix

DEFAULT_MEMORY_BUDGET = 2 * 1024 ** 3
_BYTES_PER_ENTRY = 160


@dataclass(frozen=True)
class DiagonalSystem:
    M: RationalMatrix
    k: int

    def __post_init__(self):
        if not isinstance(self.M, RationalMatrix):
            object.__setattr__(self, "M", matrix(self.M))
        if not self.M.is_integral():
            raise NotInteger("system coefficients must be integers")
        if self.k < 1:
            raise InvalidInput("degree k must be at least 1")

    @property
    def s(self) -> int:
        return self.M.cols

    @property
    def n(self) -> int:
        return self.M.rows

    def int_columns(self):
        return [tuple(int(x) for x in c) for c in self.M.columns()]

    def evaluate(self, x) -> tuple:
        return tuple(sum(int(a) * v ** self.k for a, v in zip(row, x)) for row in self.M.data)

    def is_solution(self, x) -> bool:
        return not any(self.evaluate(x))

    def to_json(self):
        return {"matrix": self.M.to_json(), "k": self.k}


@dataclass(frozen=True)
class SolutionCount:
    total: int
    trivial: int
    nontrivial: int
    N: int
    domains: tuple | None = None

    def to_json(self):
        return {"N": self.N, "counts": {"total": str(self.total), "trivial": str(self.trivial),
                                        "nontrivial": str(self.nontrivial)}}


# ---------------------------------------------------------------- engine
#
# A variable is a list of (label, contribution) pairs: picking the label adds
# the contribution (an integer tuple of length n) to the running sum.

def _vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _half_table(variables, n):
    table = Counter({(0,) * n: 1})
    for var in variables:
        nxt = Counter()
        for key, c in table.items():
            for _, contrib in var:
                nxt[_vadd(key, contrib)] += c
        table = nxt
    return table


def _check_budget(variables, budget):
    size = 1
    for var in variables:
        size *= max(1, len(var))
    if size * _BYTES_PER_ENTRY > budget:
        raise SizeLimitExceeded(f"half-table of up to {size} entries exceeds the memory budget of {budget} bytes")


def _split(variables):
    # balance the two halves by the product of domain sizes
    best, best_cost = 0, None
    for cut in range(len(variables) + 1):
        left = math.prod(len(v) for v in variables[:cut])
        right = math.prod(len(v) for v in variables[cut:])
        cost = max(left, right)
        if best_cost is None or cost < best_cost:
            best, best_cost = cut, cost
    return variables[:best], variables[best:]


def count_zero_sums(variables, n: int, budget: int = DEFAULT_MEMORY_BUDGET) -> int:
    """Number of ways to pick one entry per variable so the contributions sum to zero."""
    if any(not v for v in variables):
        return 0
    left, right = _split(list(variables))
    _check_budget(left, budget)
    _check_budget(right, budget)
    lt = _half_table(left, n)
    rt = _half_table(right, n)
    if len(lt) > len(rt):
        lt, rt = rt, lt
    return sum(c * rt.get(tuple(-x for x in key), 0) for key, c in lt.items())


def zero_sum_assignments(variables, n: int, budget: int = DEFAULT_MEMORY_BUDGET):
    """All label tuples whose contributions sum to zero (meet in the middle)."""
    if any(not v for v in variables):
        return []
    variables = list(variables)
    cut = len(variables) // 2
    left, right = variables[:cut], variables[cut:]
    _check_budget(left, budget)
    table = {}
    for combo in product(*left):
        key = (0,) * n
        for _, contrib in combo:
            key = _vadd(key, contrib)
        table.setdefault(key, []).append(tuple(lab for lab, _ in combo))
    out = []
    for combo in product(*right):
        key = (0,) * n
        for _, contrib in combo:
            key = _vadd(key, contrib)
        hits = table.get(tuple(-x for x in key))
        if hits:
            labels = tuple(lab for lab, _ in combo)
            out.extend(h + labels for h in hits)
    out.sort()
    return out


def set_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def _merge(variables, block, n):
    common = None
    for j in block:
        labels = {lab: contrib for lab, contrib in variables[j]}
        if common is None:
            common = {lab: list(c) for lab, c in labels.items()}
        else:
            common = {lab: [a + b for a, b in zip(c, labels[lab])] for lab, c in common.items() if lab in labels}
    return [(lab, tuple(c)) for lab, c in sorted(common.items())]


def count_distinct_zero_sums(variables, n: int, budget: int = DEFAULT_MEMORY_BUDGET) -> int:
    """Zero-sum assignments whose labels are pairwise distinct."""
    total = 0
    for part in set_partitions(range(len(variables))):
        coeff = 1
        for block in part:
            size = len(block)
            coeff *= (-1) ** (size - 1) * math.factorial(size - 1)
        merged = [_merge(variables, block, n) for block in part]
        total += coeff * count_zero_sums(merged, n, budget)
    return total


def system_variables(sys: DiagonalSystem, domains, degrees=None):
    """Variables for ``sys`` over per-variable label sets.

    ``degrees`` overrides the exponent of individual variables (mixed-degree
    counts such as linear-in-x, k-th-power-in-y).
    """
    cols = sys.int_columns()
    degrees = [sys.k] * sys.s if degrees is None else list(degrees)
    out = []
    for col, dom, e in zip(cols, domains, degrees):
        out.append([(x, tuple(a * x ** e for a in col)) for x in sorted(set(dom))])
    return out


def _domains(sys: DiagonalSystem, N: int, domains):
    if N < 0:
        raise InvalidInput("N must be non-negative")
    if domains is None:
        return [range(1, N + 1)] * sys.s
    domains = list(domains)
    if len(domains) != sys.s:
        raise InvalidInput(f"expected {sys.s} domains, got {len(domains)}")
    out = []
    for d in domains:
        d = sorted(set(int(x) for x in d))
        if d and (d[0] < 1 or d[-1] > N):
            raise InvalidInput(f"domain values must lie in [1, {N}]")
        out.append(d)
    return out


def count_solutions(sys: DiagonalSystem, N: int, domains=None,
                    budget: int = DEFAULT_MEMORY_BUDGET) -> SolutionCount:
    """Exact counts of solutions of ``sys`` in ``prod(domains)`` (default ``[N]^s``).

    >>> count_solutions(DiagonalSystem(matrix([[1, -1]]), 2), 10).nontrivial
    0
    """
    doms = _domains(sys, N, domains)
    variables = system_variables(sys, doms)
    total = count_zero_sums(variables, sys.n, budget)
    nontrivial = count_distinct_zero_sums(variables, sys.n, budget)
    frozen = None if domains is None else tuple(tuple(d) for d in doms)
    return SolutionCount(total, total - nontrivial, nontrivial, N, frozen)


def iter_solutions(sys: DiagonalSystem, N: int, domains=None, budget: int = DEFAULT_MEMORY_BUDGET):
    """Sorted list of all solutions in the box."""
    doms = _domains(sys, N, domains)
    return zero_sum_assignments(system_variables(sys, doms), sys.n, budget)


def count_trivial_pair(sys: DiagonalSystem, N: int, u: int, v: int, domains=None,
                       budget: int = DEFAULT_MEMORY_BUDGET) -> int:
    """Solutions with ``x_u = x_v`` (0-based indices, ``u < v``)."""
    if not (0 <= u < v < sys.s):
        raise IndexOutOfRange(f"need 0 <= u < v < {sys.s}, got u={u}, v={v}")
    if N == 0:
        return 0
    doms = _domains(sys, N, domains)
    variables = system_variables(sys, doms)
    merged = _merge(variables, [u, v], sys.n)
    rest = [var for j, var in enumerate(variables) if j not in (u, v)]
    return count_zero_sums([merged] + rest, sys.n, budget)


# ---------------------------------------------------------------- mean values

@dataclass(frozen=True)
class MomentRecord:
    k: int
    t: int
    N: int
    value: int

    def to_json(self):
        return {"k": self.k, "t": self.t, "N": self.N, "value": str(self.value)}


def _validate_ktn(k, t, N):
    for name, v in (("k", k), ("t", t), ("N", N)):
        if int(v) != v or v < 1:
            raise InvalidInput(f"{name} must be a positive integer")


def representation_counts(k: int, t: int, N: int, budget: int = DEFAULT_MEMORY_BUDGET) -> np.ndarray:
    """``r[m]`` = number of ``x in [N]^t`` with ``x_1^k + ... + x_t^k = m``."""
    _validate_ktn(k, t, N)
    length = t * N ** k + 1
    if length * 8 * 2 > budget:
        raise SizeLimitExceeded(f"array of length {length} exceeds the memory budget")
    if N ** t >= 2 ** 62:
        raise SizeLimitExceeded("representation counts would overflow 64-bit integers")
    powers = [x ** k for x in range(1, N + 1)]
    cur = np.zeros(N ** k + 1, dtype=np.int64)
    cur[powers] = 1
    for step in range(2, t + 1):
        nxt = np.zeros(step * N ** k + 1, dtype=np.int64)
        width = len(cur)
        for p in powers:
            nxt[p:p + width] += cur
        cur = nxt
    return cur


def _sum_of_squares(arr: np.ndarray) -> int:
    top = int(arr.max()) if len(arr) else 0
    if top == 0:
        return 0
    chunk = max(1, (2 ** 62) // (top * top))
    total = 0
    for i in range(0, len(arr), chunk):
        part = arr[i:i + chunk]
        total += int(np.dot(part, part))
    return total


def mean_value(k: int, t: int, N: int, budget: int = DEFAULT_MEMORY_BUDGET) -> MomentRecord:
    """Number of ``(x, y) in [N]^(2t)`` with equal sums of ``t`` k-th powers."""
    r = representation_counts(k, t, N, budget)
    return MomentRecord(k, t, N, _sum_of_squares(r))


def moment_by_orthogonality(k: int, t: int, N: int) -> int:
    """The same moment as an average of ``|sum_x e(x^k theta)|^(2t)`` over a fine grid.

    With ``L > 2 t N^k`` equally spaced points the average equals the
    integral over the circle exactly; floating error is removed by rounding.
    """
    _validate_ktn(k, t, N)
    L = 1 << (2 * t * N ** k + 1).bit_length()
    a = np.zeros(L)
    for x in range(1, N + 1):
        a[x ** k % L] += 1
    S = np.fft.fft(a)
    value = float(np.sum(np.abs(S) ** (2 * t))) / L
    rounded = round(value)
    if abs(value - rounded) > 0.25:
        raise SizeLimitExceeded("floating-point error too large to round the orthogonality sum")
    return int(rounded)


def even_moment_check(k: int, t: int, N: int):
    """``(convolution value, orthogonality value)``; equal whenever the identity holds."""
    return mean_value(k, t, N).value, moment_by_orthogonality(k, t, N)


# ---------------------------------------------------------------- reporting

@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    max_residual: float
    points: int

    def to_json(self):
        return {"slope": self.slope, "intercept": self.intercept,
                "maxResidual": self.max_residual, "points": self.points}


def exponent_fit(series) -> FitResult:
    """Least-squares slope of ``log value`` against ``log N``."""
    pts = [(float(n), float(v)) for n, v in series]
    if len(pts) < 3:
        raise DegenerateSeries("need at least three points")
    if any(n <= 0 or v <= 0 for n, v in pts):
        raise DegenerateSeries("N and values must be positive")
    if len({n for n, _ in pts}) < 2:
        raise DegenerateSeries("N values must not all coincide")
    x = np.log([n for n, _ in pts])
    y = np.log([v for _, v in pts])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    return FitResult(float(slope), float(intercept), float(np.max(np.abs(resid))), len(pts))


@dataclass(frozen=True)
class AnalyticConstants:
    k: int
    n: int
    p: Fraction
    eta: Fraction
    delta: Fraction
    t_k: int

    def to_json(self):
        return {"k": self.k, "n": self.n, "p": str(self.p), "eta": str(self.eta),
                "delta": str(self.delta), "tK": self.t_k}


def analytic_constants(k: int, n: int) -> AnalyticConstants:
    if k < 2 or n < 1:
        raise InvalidInput("need k >= 2 and n >= 1")
    return AnalyticConstants(k, n,
                             k * k + Fraction(1, 2 * n),
                             Fraction(1, 2 * k * k * n + 2),
                             Fraction(2 * k * n, k * k * n + 1),
                             k * k // 2)


# ---------------------------------------------------------------- split systems

def split_system_variables(A, B, C, r: int, k: int, x_domains, y_domains):
    """Variables for ``A x^r = B y^k, C y^k = 0`` (x then y)."""
    A, B = matrix(A), matrix(B)
    C = RationalMatrix.zeros(0, B.cols) if C is None else matrix(C)
    n, s, t, m = A.rows, A.cols, B.cols, C.rows
    if B.rows != n or C.cols != t:
        raise InvalidInput("shapes of A, B, C are inconsistent")
    for X in (A, B, C):
        if not X.is_integral():
            raise NotInteger("system coefficients must be integers")
    variables = []
    for j, dom in enumerate(x_domains):
        col = [int(A[i, j]) for i in range(n)] + [0] * m
        variables.append([(x, tuple(a * x ** r for a in col)) for x in sorted(set(dom))])
    for j, dom in enumerate(y_domains):
        col = [-int(B[i, j]) for i in range(n)] + [int(C[i, j]) for i in range(m)]
        variables.append([(y, tuple(a * y ** k for a in col)) for y in sorted(set(dom))])
    return variables, n + m


def count_split_system(A, B, C, r: int, k: int, x_domain, y_domain,
                       budget: int = DEFAULT_MEMORY_BUDGET) -> int:
    """``Lambda_r`` with indicator weights: solutions in ``x_domain^s x y_domain^t``."""
    A, B = matrix(A), matrix(B)
    variables, rows = split_system_variables(A, B, C, r, k, [x_domain] * A.cols, [y_domain] * B.cols)
    return count_zero_sums(variables, rows, budget)


def split_system_solutions(A, B, C, r: int, k: int, x_domain, y_domain,
                           budget: int = DEFAULT_MEMORY_BUDGET):
    A, B = matrix(A), matrix(B)
    variables, rows = split_system_variables(A, B, C, r, k, [x_domain] * A.cols, [y_domain] * B.cols)
    return zero_sum_assignments(variables, rows, budget)
