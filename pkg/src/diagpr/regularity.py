"""Desk-scale experiments: colourings, dense sets, multiplicative syndeticity,
polynomial Bohr sets, the W-trick transfer and the auxiliary operator Psi.

Everything is exact.  Phases and radii are rationals, weights are
``Fraction`` values and square roots are avoided by comparing squares.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from statistics import mean

from sympy import integer_nthroot, primefactors, primerange

from .counting import (DiagonalSystem, count_solutions, count_split_system, iter_solutions,
                       split_system_solutions)
from .errors import (CapExceeded, InvalidInput, InvalidXi, InvariantViolation, NonSmoothZeta,
                     PreprocessingMissing, SearchBudgetExceeded, SearchExhausted)
from .linalg import RationalMatrix, as_fraction, kernel_basis, matrix
from .structure import diagonal_columns, entries_divisible, has_diagonal_submatrix, rows_coprime


# ---------------------------------------------------------------- colourings

@dataclass(frozen=True)
class Coloring:
    N: int
    colors: tuple  # colors[x - 1] is the colour of x, colours are 0..r-1

    def color_of(self, x: int) -> int:
        return self.colors[x - 1]

    def classes(self, r: int | None = None):
        r = (max(self.colors) + 1 if self.colors else 0) if r is None else r
        return [[x for x in range(1, self.N + 1) if self.colors[x - 1] == c] for c in range(r)]

    def run_length(self) -> str:
        """Run-length string such as ``"0*1,1*2,0*1"`` (colour*length)."""
        runs = []
        for c in self.colors:
            if runs and runs[-1][0] == c:
                runs[-1][1] += 1
            else:
                runs.append([c, 1])
        return ",".join(f"{c}*{n}" for c, n in runs)

    @classmethod
    def from_run_length(cls, text: str) -> "Coloring":
        colors = []
        for part in filter(None, text.split(",")):
            c, n = part.split("*")
            colors.extend([int(c)] * int(n))
        return cls(len(colors), tuple(colors))

    def to_json(self):
        return {"N": self.N, "colors": self.run_length()}


SOLUTION_MODES = ("all", "nonconstant", "distinct")


def _keep(sol, mode):
    if mode == "all":
        return True
    if mode == "nonconstant":
        return len(set(sol)) > 1
    return len(set(sol)) == len(sol)


def coloring_constraints(sys: DiagonalSystem, N: int, solutions: str = "nonconstant"):
    """Value sets that must not be monochromatic."""
    if solutions not in SOLUTION_MODES:
        raise InvalidInput(f"solutions must be one of {SOLUTION_MODES}")
    if N < 1:
        return []
    sets = {frozenset(sol) for sol in iter_solutions(sys, N) if _keep(sol, solutions)}
    return sorted((tuple(sorted(s)) for s in sets), key=lambda t: (t[-1], t))


def is_good_coloring(sys: DiagonalSystem, coloring: Coloring, solutions: str = "nonconstant") -> bool:
    """No monochromatic solution of the chosen kind."""
    for c in coloring_constraints(sys, coloring.N, solutions):
        if len({coloring.color_of(x) for x in c}) == 1:
            return False
    return True


def find_bad_coloring(sys: DiagonalSystem, N: int, r: int, solutions: str = "nonconstant",
                      budget: int = 2_000_000):
    """An ``r``-colouring of ``[N]`` with no monochromatic solution, or ``None``.

    ``solutions`` selects which solutions count: ``"nonconstant"`` (default,
    the classical Schur/Rado convention), ``"distinct"`` (pairwise distinct
    coordinates) or ``"all"``.  Depth-first search over the colours of
    ``1..N`` with colour 0 for 1 and new colours introduced in order.
    Returning ``None`` is an exhaustion proof.
    """
    if r < 1:
        raise InvalidInput("r must be positive")
    if N < 1:
        return Coloring(0, ())
    constraints = coloring_constraints(sys, N, solutions)
    if any(len(c) == 1 for c in constraints):
        return None
    by_max = [[] for _ in range(N + 1)]
    for c in constraints:
        by_max[c[-1]].append(c[:-1])
    colors = [0] * (N + 1)
    nodes = 0

    def ok(x):
        cx = colors[x]
        return not any(all(colors[y] == cx for y in rest) for rest in by_max[x])

    def dfs(x, used):
        nonlocal nodes
        if x > N:
            return True
        for c in range(min(r, used + 1)):
            nodes += 1
            if nodes > budget:
                raise SearchBudgetExceeded(f"colouring search exceeded {budget} nodes")
            colors[x] = c
            if ok(x) and dfs(x + 1, max(used, c + 1)):
                return True
        return False

    if not dfs(1, 0):
        return None
    result = Coloring(N, tuple(colors[1:]))
    if not is_good_coloring(sys, result, solutions):
        raise InvariantViolation("colouring search returned a colouring with a monochromatic solution")
    return result


# ---------------------------------------------------------------- dense sets

@dataclass(frozen=True)
class DensityStats:
    N: int
    size: int
    trials: int
    minimum: int
    mean: float
    maximum: int
    prefix: int
    counts: tuple

    def to_json(self):
        return {"N": self.N, "size": self.size, "trials": self.trials, "min": str(self.minimum),
                "mean": self.mean, "max": str(self.maximum), "prefix": str(self.prefix),
                "counts": [str(c) for c in self.counts]}


def density_experiment(sys: DiagonalSystem, N: int, delta, trials: int, seed) -> DensityStats:
    """Nontrivial solution counts over random ``A`` with ``|A| = ceil(delta N)``.

    The prefix ``A = [ceil(delta N)]`` is reported separately.
    """
    delta = as_fraction(delta) if not isinstance(delta, float) else Fraction(delta).limit_denominator(10 ** 6)
    if not 0 < delta <= 1:
        raise InvalidInput("delta must lie in (0, 1]")
    if trials < 0:
        raise InvalidInput("trials must be non-negative")
    size = math.ceil(delta * N)
    rng = random.Random(seed)
    counts = []
    for _ in range(trials):
        A = sorted(rng.sample(range(1, N + 1), size))
        counts.append(count_solutions(sys, N, [A] * sys.s).nontrivial)
    prefix = count_solutions(sys, N, [range(1, size + 1)] * sys.s).nontrivial
    pool = counts or [prefix]
    return DensityStats(N, size, trials, min(pool), float(mean(pool)), max(pool), prefix, tuple(counts))


# ---------------------------------------------------------------- multiplicative syndeticity

def _membership(S):
    if callable(S):
        return S
    members = set(S)
    return members.__contains__


@dataclass(frozen=True)
class SyndeticityReport:
    M: int
    N: int
    failures: tuple

    @property
    def syndetic(self) -> bool:
        return not self.failures

    def to_json(self):
        return {"M": self.M, "N": self.N, "syndetic": self.syndetic, "witnessFailures": list(self.failures)}


def check_mult_syndetic(S, M: int, N: int) -> SyndeticityReport:
    """Every ``x <= N`` has a multiple ``jx`` (``1 <= j <= M``) in ``S``."""
    if M < 1:
        raise InvalidInput("M must be positive")
    inS = _membership(S)
    failures = tuple(x for x in range(1, N + 1) if not any(inS(j * x) for j in range(1, M + 1)))
    return SyndeticityReport(M, N, failures)


def syndetic_density_check(S, M: int, N: int):
    """``(|S n [N]|, floor(N/M)/M, holds)``.

    The density lemma only needs the windows ``{x, ..., Mx}`` with
    ``x <= N/M``, which are verified first.
    """
    inS = _membership(S)
    if not check_mult_syndetic(inS, M, N // M).syndetic:
        raise InvalidInput(f"S is not multiplicatively [{M}]-syndetic on the required range")
    count = sum(1 for x in range(1, N + 1) if inS(x))
    bound = Fraction(N // M, M)
    return count, bound, count >= bound


def multiples_set(m: int):
    """Predicate for the multiples of ``m`` (multiplicatively ``[m]``-syndetic)."""
    return lambda x: x % m == 0


def random_syndetic_set(M: int, limit: int, seed, strategy: str = "random") -> frozenset:
    """A set that is multiplicatively ``[M]``-syndetic for all ``x <= limit``.

    Windows ``{x, ..., Mx}`` are processed in increasing ``x``; an empty
    window receives one multiple, chosen at random or (``"largest"``) as
    ``Mx``, which keeps the set as sparse as the greedy rule allows.
    """
    if strategy not in ("random", "largest"):
        raise InvalidInput("strategy must be 'random' or 'largest'")
    rng = random.Random(seed)
    S = set()
    for x in range(1, limit + 1):
        if not any(j * x in S for j in range(1, M + 1)):
            j = M if strategy == "largest" else rng.randint(1, M)
            S.add(j * x)
    return frozenset(S)


# ---------------------------------------------------------------- Bohr sets

def nearest_int_dist(x: Fraction) -> Fraction:
    f = x - math.floor(x)
    return min(f, 1 - f)


@dataclass(frozen=True)
class BohrSpec:
    h: int
    phases: tuple
    rho: Fraction

    def __post_init__(self):
        object.__setattr__(self, "phases", tuple(as_fraction(a) for a in self.phases))
        object.__setattr__(self, "rho", as_fraction(self.rho))
        if self.h < 1:
            raise InvalidInput("h must be positive")
        if not 0 < self.rho <= 1:
            raise InvalidInput("rho must lie in (0, 1]")
        if any(not 0 <= a < 1 for a in self.phases):
            raise InvalidInput("phases must lie in [0, 1)")

    @property
    def period(self) -> int:
        return math.lcm(*(a.denominator for a in self.phases)) if self.phases else 1

    def contains(self, n: int) -> bool:
        p = n ** self.h
        return all(nearest_int_dist(p * a) < self.rho for a in self.phases)

    def to_json(self):
        return {"h": self.h, "phases": [[str(a.numerator), str(a.denominator)] for a in self.phases],
                "rho": [str(self.rho.numerator), str(self.rho.denominator)]}

    @classmethod
    def from_json(cls, obj):
        return cls(int(obj["h"]), tuple(as_fraction(a) for a in obj["phases"]), as_fraction(obj["rho"]))


def bohr_set(spec: BohrSpec, N: int) -> list:
    return [n for n in range(1, N + 1) if spec.contains(n)]


@dataclass(frozen=True)
class RecurrenceReport:
    h: int
    alpha: Fraction
    N: int
    C: Fraction
    minimum: Fraction
    argmin: int
    within_budget: bool

    @property
    def budget(self) -> float:
        return float(self.C) * self.N ** (-(2.0 ** -self.h))

    def to_json(self):
        return {"h": self.h, "alpha": str(self.alpha), "N": self.N, "min": str(self.minimum),
                "argmin": self.argmin, "budget": self.budget, "C": str(self.C),
                "withinBudget": self.within_budget}


def bohr_recurrence_check(h: int, alpha, N: int, C=10) -> RecurrenceReport:
    """``min_{n <= N} ||n^h alpha||`` against ``C N^(-2^-h)``, compared exactly."""
    alpha = as_fraction(alpha)
    C = as_fraction(C)
    if N < 1 or h < 1:
        raise InvalidInput("need N >= 1 and h >= 1")
    best, arg = None, None
    for n in range(1, N + 1):
        d = nearest_int_dist(n ** h * alpha)
        if best is None or d < best:
            best, arg = d, n
            if d == 0:
                break
    e = 2 ** h
    return RecurrenceReport(h, alpha, N, C, best, arg, best ** e * N <= C ** e)


def bohr_syndetic_constant(spec: BohrSpec, search_cap: int = 10_000) -> int:
    """Least ``M0`` with ``{x, ..., M0 x}`` meeting the Bohr set for every ``x``.

    For rational phases membership of ``n`` depends only on ``n`` modulo the
    period, so checking ``x`` in one period decides all ``x`` exactly.
    """
    L = spec.period
    member = [spec.contains(n) for n in range(L)]
    M0 = 1
    for x in range(1, L + 1):
        j = 1
        while not member[(j * x) % L]:
            j += 1
            if j > search_cap:
                raise CapExceeded(f"no multiple of {x} up to {search_cap}x lies in the Bohr set")
        M0 = max(M0, j)
    return M0


# ---------------------------------------------------------------- W-trick

def w_primorial(w: int) -> int:
    return math.prod(primerange(2, w + 1))


def W_of(k: int, w: int) -> int:
    return k ** (k - 1) * w_primorial(w) ** k


def kw_root(k: int, w: int) -> int:
    """``(kW)^(1/k) = k * prod_{p <= w} p``, checked exactly."""
    root = k * w_primorial(w)
    if root ** k != k * W_of(k, w):
        raise InvariantViolation("(kW)^(1/k) is not the expected integer")
    return root


@dataclass(frozen=True)
class WTrickParams:
    k: int
    w: int
    W: int
    xi: int
    zeta: int
    N: int
    X: Fraction

    @property
    def root(self) -> int:
        return kw_root(self.k, self.w)

    def to_json(self):
        return {"k": self.k, "w": self.w, "W": str(self.W), "xi": self.xi, "zeta": self.zeta,
                "N": self.N, "X": str(self.X), "root": str(self.root)}


def w_params(k: int, w: int, N: int, zeta: int = 1, xi: int = 1) -> WTrickParams:
    if k < 1 or w < 1 or N < 1:
        raise InvalidInput("k, w and N must be positive")
    W = W_of(k, w)
    if xi < 1 or math.gcd(xi, W) != 1:
        raise InvalidXi(f"xi={xi} must be a positive integer coprime to W={W}")
    if zeta < 1 or any(p > w for p in primefactors(zeta)):
        raise NonSmoothZeta(f"zeta={zeta} has a prime factor exceeding w={w}")
    return WTrickParams(k, w, W, xi, zeta, N, Fraction(N ** k, k * W * zeta ** k))


def smooth_numbers(w: int, bound: int):
    primes = list(primerange(2, w + 1))
    return [z for z in range(1, bound + 1) if all(p in primes for p in primefactors(z))]


@dataclass(frozen=True)
class ProgressionChoice:
    xi: int
    zeta: int
    hits: int
    total: int

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.hits, self.total) if self.total else Fraction(0)

    def to_json(self):
        return {"xi": self.xi, "zeta": self.zeta, "hits": self.hits, "total": self.total,
                "ratio": str(self.ratio)}


def select_progression(A, N: int, w: int, k: int = 2, delta=None, zeta_bound: int = 1000) -> ProgressionChoice:
    """Smallest ``(zeta, xi)`` whose progression ``zeta(xi + W Z)`` holds a
    ``delta/2`` share of ``A``.

    ``zeta`` runs over ``w``-smooth numbers up to ``zeta_bound``, ``xi`` over
    ``[W]`` coprime to ``W``.  A progression with no element of ``A`` is never
    accepted.
    """
    A = set(A)
    if any(not 1 <= a <= N for a in A):
        raise InvalidInput(f"A must be a subset of [1, {N}]")
    delta = Fraction(len(A), N) if delta is None else as_fraction(delta)
    W = W_of(k, w)
    for zeta in smooth_numbers(w, zeta_bound):
        for xi in range(1, W + 1):
            if math.gcd(xi, W) != 1:
                continue
            start = zeta * xi
            if start > N:
                break
            prog = range(start, N + 1, zeta * W)
            hits = sum(1 for u in prog if u in A)
            if hits and hits >= delta / 2 * len(prog):
                return ProgressionChoice(xi, zeta, hits, len(prog))
    raise SearchExhausted(f"no progression found with zeta <= {zeta_bound}")


def weight_nu(params: WTrickParams, n: int) -> int:
    """``x^(k-1)`` when ``n = (x^k - xi^k)/(kW)`` for ``x <= N/zeta``, ``x = xi mod W``; else 0."""
    k, W, xi = params.k, params.W, params.xi
    if n < 1:
        return 0
    x, exact = integer_nthroot(k * W * n + xi ** k, k)
    x = int(x)
    if not exact or x % W != xi % W or x * params.zeta > params.N:
        return 0
    return x ** (k - 1)


def nu_l1_mass(params: WTrickParams) -> int:
    """``sum_n nu(n)``, summed directly over the admissible ``x``."""
    k, W, xi = params.k, params.W, params.xi
    top = params.N // params.zeta
    return sum(x ** (k - 1) for x in range(xi + W, top + 1, W))


# ---------------------------------------------------------------- crude transfer

@dataclass(frozen=True)
class TransferReport:
    lhs: int
    rhs: int
    injective: bool
    images_valid: bool
    A1: tuple
    S1: tuple

    @property
    def passed(self) -> bool:
        return self.lhs <= self.rhs and self.injective and self.images_valid

    def to_json(self):
        return {"lhs": str(self.lhs), "rhs": str(self.rhs), "injective": self.injective,
                "imagesValid": self.images_valid, "pass": self.passed,
                "A1": list(self.A1), "S1": list(self.S1)}


def _require_preprocessed(A: RationalMatrix, B: RationalMatrix):
    if not A.is_integral() or not B.is_integral():
        raise PreprocessingMissing("A and B must be integral")
    if any(x != 0 for x in A.column_sum()):
        raise PreprocessingMissing("columns of A must sum to zero")
    if not (has_diagonal_submatrix(A) and rows_coprime(A) and entries_divisible(A, B)):
        raise PreprocessingMissing("A, B do not satisfy the diagonal/coprime/divisibility conditions")


def crude_transfer_check(A_set, S, params: WTrickParams, A, B, C=None,
                         enumerate_limit: int = 200_000) -> TransferReport:
    """Compare ``Lambda_1(A1; S1 n [X^(1/k)])`` with ``Lambda_k(A; S n [N])``.

    Solutions of the linearised system are pushed through
    ``x -> zeta(Wz + xi)``, ``y -> zeta (kW)^(1/k) y`` and each image is
    checked to be a solution of the degree-``k`` system in the right box.
    """
    A, B = matrix(A), matrix(B)
    C = RationalMatrix.zeros(0, B.cols) if C is None else matrix(C)
    _require_preprocessed(A, B)
    k, W, xi, zeta, N = params.k, params.W, params.xi, params.zeta, params.N
    root = params.root
    A_set = set(A_set)
    inS = _membership(S)

    z_of = {}
    z = 1
    while zeta * (W * z + xi) <= N:
        if zeta * (W * z + xi) in A_set:
            x = ((W * z + xi) ** k - xi ** k) // (k * W)
            z_of[x] = z
        z += 1
    A1 = tuple(sorted(z_of))
    S1 = tuple(y for y in range(1, N + 1) if y ** k <= params.X and inS(zeta * root * y))

    lhs = count_split_system(A, B, C, 1, k, A1, S1)
    S_N = [v for v in range(1, N + 1) if inS(v)]
    rhs = count_split_system(A, B, C, k, k, sorted(A_set), S_N)

    injective = images_valid = True
    if lhs <= enumerate_limit:
        s = A.cols
        sols = split_system_solutions(A, B, C, 1, k, A1, S1)
        images = set()
        S_N_set = set(S_N)
        for sol in sols:
            u = tuple(zeta * (W * z_of[x] + xi) for x in sol[:s])
            v = tuple(zeta * root * y for y in sol[s:])
            images.add(u + v)
            ok = all(a in A_set for a in u) and all(b in S_N_set for b in v)
            for i in range(A.rows):
                lhs_i = sum(int(A[i, j]) * u[j] ** k for j in range(s))
                rhs_i = sum(int(B[i, j]) * v[j] ** k for j in range(B.cols))
                ok = ok and lhs_i == rhs_i
            for i in range(C.rows):
                ok = ok and sum(int(C[i, j]) * v[j] ** k for j in range(C.cols)) == 0
            images_valid = images_valid and ok
        injective = len(images) == len(sols)
    return TransferReport(lhs, rhs, injective, images_valid, A1, S1)


# ---------------------------------------------------------------- auxiliary operator

@dataclass(frozen=True)
class AuxOperatorSpec:
    A: RationalMatrix
    B: RationalMatrix
    k: int
    kernel: tuple         # u^(0) = ones, then u^(1..q) with first coordinate 0
    B_set: tuple
    diag_cols: tuple      # column carrying the diagonal entry of each row of A

    @property
    def n(self) -> int:
        return self.A.rows

    @property
    def s(self) -> int:
        return self.A.cols

    @property
    def q(self) -> int:
        return len(self.kernel) - 1

    @classmethod
    def build(cls, A, B, k: int, B_set) -> "AuxOperatorSpec":
        A, B = matrix(A), matrix(B)
        _require_preprocessed(A, B)
        kernel = kernel_basis(A, normalize=True)
        if len(kernel) != A.cols - A.rows:
            raise InvalidInput("A must have full row rank")
        return cls(A, B, k, tuple(tuple(int(x) for x in u) for u in kernel),
                   tuple(sorted(set(int(b) for b in B_set))), tuple(diagonal_columns(A)))

    def P(self, y) -> tuple:
        """``P_j(y)``: row ``i`` of ``B y^k`` divided by A's diagonal entry, at column ``diag_cols[i]``."""
        out = [0] * self.s
        for i, j in enumerate(self.diag_cols):
            val = sum(int(self.B[i, c]) * y[c] ** self.k for c in range(self.B.cols))
            a = int(self.A[i, j])
            if val % a:
                raise PreprocessingMissing("P_j(y) is not integral")
            out[j] = val // a
        return tuple(out)

    def Q(self, d, y) -> tuple:
        P = self.P(y)
        return tuple(sum(self.kernel[i + 1][j] * d[i] for i in range(self.q)) + P[j] for j in range(self.s))

    def to_json(self):
        return {"A": self.A.to_json(), "B": self.B.to_json(), "k": self.k,
                "kernelBasis": [list(u) for u in self.kernel], "Bset": list(self.B_set), "q": self.q}


def _weight(f):
    return f if callable(f) else (lambda x, f=f: f.get(x, 0))


def aux_psi(spec: AuxOperatorSpec, fs, y=()) -> Fraction:
    """``sum_x sum_{d in B^q} prod_j f_j(x + Q_j(d, y))`` for finitely supported ``f_j`` (dicts)."""
    fs = list(fs)
    if len(fs) == 1:
        fs = fs * spec.s
    if len(fs) != spec.s:
        raise InvalidInput(f"expected {spec.s} weight functions")
    y = tuple(y)
    if len(y) != spec.B.cols:
        raise InvalidInput(f"y must have length {spec.B.cols}")
    support0 = sorted(x for x, v in fs[0].items() if v)
    P = spec.P(y)
    total = Fraction(0)
    for d in product(spec.B_set, repeat=spec.q):
        shifts = [sum(spec.kernel[i + 1][j] * d[i] for i in range(spec.q)) + P[j] for j in range(spec.s)]
        for z in support0:
            x = z - shifts[0]
            term = Fraction(1)
            for f, c in zip(fs, shifts):
                v = f.get(x + c, 0)
                if not v:
                    term = 0
                    break
                term *= v
            total += term
    return total


def psi_lower_bound_check(spec: AuxOperatorSpec, C, A_set, S_set):
    """``(Lambda_1(A; S), sum over y of Psi(1_A) prod 1_S(y_j))`` for indicator weights."""
    C = RationalMatrix.zeros(0, spec.B.cols) if C is None else matrix(C)
    S_set = sorted(set(S_set))
    lam = count_split_system(spec.A, spec.B, C, 1, spec.k, A_set, S_set)
    f = {a: 1 for a in A_set}
    total = Fraction(0)
    for y in product(S_set, repeat=spec.B.cols):
        if all(sum(int(C[i, j]) * y[j] ** spec.k for j in range(C.cols)) == 0 for i in range(C.rows)):
            total += aux_psi(spec, [f], y)
    return lam, total


def psi_von_neumann_check(spec: AuxOperatorSpec, f: dict, g: dict, N: int, y=()):
    """``(|Psi(f) - Psi(g)|, squared right-hand side, holds)`` for ``f, g: [N] -> [0, 1]``."""
    for h in (f, g):
        if any(not 1 <= x <= N or not 0 <= v <= 1 for x, v in h.items()):
            raise InvalidInput("weights must map [N] into [0, 1]")
    diff = abs(aux_psi(spec, [f], y) - aux_psi(spec, [g], y))
    l2sq = sum((Fraction(f.get(x, 0)) - Fraction(g.get(x, 0))) ** 2 for x in range(1, N + 1))
    s, n, b = spec.s, spec.n, len(spec.B_set)
    rhs_sq = Fraction(s * s) * Fraction(b) ** (2 * (s - n - 1)) * N * l2sq
    return diff, rhs_sq, diff * diff <= rhs_sq
