"""Brute-force reference implementations.

None of these call into the package's algorithms; they use Leibniz
determinants, sympy, and plain loops, and are only meant for tiny inputs.
"""

from fractions import Fraction
from itertools import combinations, permutations, product

import sympy


def leibniz_det(rows):
    n = len(rows)
    total = Fraction(0)
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = Fraction(1)
        for i in range(n):
            term *= rows[i][perm[i]]
            if term == 0:
                break
        total += -term if inv % 2 else term
    return total


def minor_rank(rows, ncols=None):
    """Largest r with a nonzero r x r minor."""
    rows = [[Fraction(x) for x in r] for r in rows]
    m = len(rows)
    n = len(rows[0]) if rows else (ncols or 0)
    for r in range(min(m, n), 0, -1):
        for ri in combinations(range(m), r):
            for ci in combinations(range(n), r):
                if leibniz_det([[rows[i][j] for j in ci] for i in ri]) != 0:
                    return r
    return 0


def sympy_rank(vectors):
    if not vectors:
        return 0
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) if isinstance(x, Fraction) else x
                          for x in v] for v in vectors]).rank()


def naive_mu(rows, d):
    """Largest column subset of rank <= d, by trying every subset."""
    s = len(rows[0])
    cols = [[r[j] for r in rows] for j in range(s)]
    best = 0
    for size in range(s, -1, -1):
        if size <= best:
            break
        for sub in combinations(range(s), size):
            if sympy_rank([cols[j] for j in sub]) <= d:
                return size
    return best


def cocircuits(rows):
    """Row-space vectors of minimal support, one per hyperplane spanned by columns."""
    n, s = len(rows), len(rows[0])
    out = set()
    for sub in combinations(range(s), n - 1):
        # y orthogonal to the chosen columns: generalised cross product of minors
        basis = [[rows[i][j] for i in range(n)] for j in sub]
        if sympy_rank(basis) != n - 1:
            continue
        y = []
        for i in range(n):
            others = [r for r in range(n) if r != i]
            minor = [[basis[c][r] for c in range(n - 1)] for r in others]
            y.append((-1) ** i * (leibniz_det(minor) if n > 1 else 1))
        v = tuple(sum(Fraction(y[i]) * rows[i][j] for i in range(n)) for j in range(s))
        if any(v):
            out.add(v)
    return sorted(out)


def definitional_q(rows):
    """``q(d)`` as the least union of supports of ``d`` independent row-space vectors."""
    n = len(rows)
    cc = cocircuits(rows)
    q = [0]
    for d in range(1, n + 1):
        best = None
        for combo in combinations(cc, d):
            if sympy_rank(list(combo)) != d:
                continue
            size = len({j for v in combo for j, x in enumerate(v) if x != 0})
            if best is None or size < best:
                best = size
        q.append(best)
    return q


def exhaustive_partition(rows, k):
    """Some split of the columns into ``k`` blocks of size n with nonzero determinants."""
    n, s = len(rows), len(rows[0])
    cols = list(range(s))

    def rec(remaining, blocks):
        if not remaining:
            return blocks
        first = remaining[0]
        for rest in combinations(remaining[1:], n - 1):
            block = (first,) + rest
            if leibniz_det([[rows[i][j] for j in block] for i in range(n)]) != 0:
                found = rec([c for c in remaining if c not in block], blocks + [block])
                if found:
                    return found
        return None

    return rec(cols, [])


def ordered_set_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    for size in range(1, len(items) + 1):
        for first in combinations(items, size):
            rest = [x for x in items if x not in first]
            for tail in ordered_set_partitions(rest):
                yield [list(first)] + tail


def naive_columns_condition(rows):
    s = len(rows[0])
    cols = [[Fraction(r[j]) for r in rows] for j in range(s)]
    for part in ordered_set_partitions(range(s)):
        ok = True
        prior = []
        for t, block in enumerate(part):
            total = [sum(cols[j][i] for j in block) for i in range(len(rows))]
            if t == 0:
                ok = not any(total)
            else:
                ok = sympy_rank([cols[j] for j in prior] + [total]) == sympy_rank([cols[j] for j in prior])
            if not ok:
                break
            prior.extend(block)
        if ok:
            return part
    return None


def has_zero_subsum(values):
    return any(sum(c) == 0 for r in range(1, len(values) + 1) for c in combinations(values, r))


def naive_count(rows, k, N, domains=None):
    """``(total, nontrivial)`` by looping over every tuple."""
    s = len(rows[0])
    doms = domains or [range(1, N + 1)] * s
    total = nontrivial = 0
    for x in product(*doms):
        if all(sum(a * v ** k for a, v in zip(r, x)) == 0 for r in rows):
            total += 1
            if len(set(x)) == s:
                nontrivial += 1
    return total, nontrivial


def naive_mean_value(k, t, N):
    count = 0
    for x in product(range(1, N + 1), repeat=t):
        sx = sum(v ** k for v in x)
        for y in product(range(1, N + 1), repeat=t):
            if sx == sum(v ** k for v in y):
                count += 1
    return count


def naive_colorings(rows, k, N, r, mode="nonconstant"):
    """All colourings of [N] (colour of 1 fixed to 0) with no monochromatic solution."""
    sols = []
    for x in product(range(1, N + 1), repeat=len(rows[0])):
        if all(sum(a * v ** k for a, v in zip(row, x)) == 0 for row in rows):
            if mode == "all" or (mode == "nonconstant" and len(set(x)) > 1) or \
                    (mode == "distinct" and len(set(x)) == len(x)):
                sols.append(x)
    good = []
    for tail in product(range(r), repeat=N - 1):
        col = (0,) + tail
        if all(len({col[v - 1] for v in sol}) > 1 for sol in sols):
            good.append(col)
    return good


def naive_psi(kernel, P, B_set, fs, x_range):
    q = len(kernel) - 1
    s = len(kernel[0])
    total = Fraction(0)
    for x in x_range:
        for d in product(B_set, repeat=q):
            term = Fraction(1)
            for j in range(s):
                shift = sum(kernel[i + 1][j] * d[i] for i in range(q)) + P[j]
                term *= fs[j].get(x + shift, 0)
            total += term
    return total


def naive_split_count(A, B, C, r, k, xs, ys):
    s, t = len(A[0]), len(B[0]) if B else 0
    total = 0
    for x in product(xs, repeat=s):
        for y in product(ys, repeat=t):
            ok = all(sum(A[i][j] * x[j] ** r for j in range(s)) == sum(B[i][j] * y[j] ** k for j in range(t))
                     for i in range(len(A)))
            ok = ok and all(sum(C[i][j] * y[j] ** k for j in range(t)) == 0 for i in range(len(C)))
            total += ok
    return total
