import math
import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diagpr.counting import (DiagonalSystem, analytic_constants, count_solutions, count_split_system,
                             count_trivial_pair, even_moment_check, exponent_fit, iter_solutions,
                             mean_value, moment_by_orthogonality)
from diagpr.errors import DegenerateSeries, IndexOutOfRange, SizeLimitExceeded
from diagpr.linalg import matrix
from oracles import naive_count, naive_mean_value, naive_split_count

FERMAT = [[1, -2, 1, 0], [1, -1, 0, 1]]
FIVE = [[1, 1, 1, 1, -4]]

# frozen from the naive loops in oracles.py
GOLDEN_TWO_SQUARES_5 = 45          # x1^2 + x2^2 = x3^2 + x4^2 over [5]^4
GOLDEN_PAIR_20 = 102               # x1^2+..+x4^2 = 4 x5^2 over [20], x1 = x2
GOLDEN_N225 = 45                   # N(2,2,5)
GOLDEN_N324 = 28                   # N(3,2,4)


def sys_(rows, k):
    return DiagonalSystem(matrix(rows), k)


def test_diagonal_only():
    c = count_solutions(sys_([[1, -1]], 2), 30)
    assert (c.total, c.nontrivial) == (30, 0)


def test_fermat_has_no_solutions():
    assert count_solutions(sys_(FERMAT, 2), 100).nontrivial == 0


def test_golden_two_squares():
    c = count_solutions(sys_([[1, 1, -1, -1]], 2), 5)
    assert c.total == GOLDEN_TWO_SQUARES_5
    assert c.total == c.trivial + c.nontrivial


def test_golden_trivial_pair():
    assert count_trivial_pair(sys_(FIVE, 2), 20, 0, 1) == GOLDEN_PAIR_20
    assert count_trivial_pair(sys_([[1, -1]], 2), 9, 0, 1) == 9
    assert count_trivial_pair(sys_(FIVE, 2), 0, 0, 1) == 0
    with pytest.raises(IndexOutOfRange):
        count_trivial_pair(sys_(FIVE, 2), 5, 3, 3)


def test_domains_restrict_variables():
    S = sys_([[1, 1, -1]], 1)
    c = count_solutions(S, 10, [[1, 2], [3], range(1, 11)])
    assert c.total == 2
    assert iter_solutions(S, 10, [[1, 2], [3], range(1, 11)]) == [(1, 3, 4), (2, 3, 5)]


def test_budget():
    with pytest.raises(SizeLimitExceeded):
        count_solutions(sys_(FIVE, 2), 50, budget=1000)


systems = st.integers(1, 2).flatmap(
    lambda n: st.integers(2, 4).flatmap(
        lambda s: st.lists(st.lists(st.integers(-3, 3), min_size=s, max_size=s), min_size=n, max_size=n)))


@settings(max_examples=120, deadline=None)
@given(systems, st.integers(1, 3), st.integers(1, 8))
def test_split_join_matches_naive(rows, k, N):
    c = count_solutions(sys_(rows, k), N)
    assert (c.total, c.nontrivial) == naive_count(rows, k, N)


@settings(max_examples=60, deadline=None)
@given(systems, st.integers(1, 2), st.integers(1, 7))
def test_union_bound_for_trivial(rows, k, N):
    S = sys_(rows, k)
    c = count_solutions(S, N)
    pairs = [count_trivial_pair(S, N, u, v) for u, v in combinations(range(S.s), 2)]
    assert c.trivial <= sum(pairs)
    if S.s == 2:
        assert c.trivial == pairs[0]


@settings(max_examples=60, deadline=None)
@given(systems, st.integers(1, 2), st.integers(1, 7), st.randoms(use_true_random=False))
def test_row_ops_and_column_permutations(rows, k, N, rnd):
    S = sys_(rows, k)
    base = count_solutions(S, N)
    if len(rows) == 2:
        mixed = [[a + 2 * b for a, b in zip(rows[0], rows[1])], rows[1]]
        c = count_solutions(sys_(mixed, k), N)
        assert (c.total, c.nontrivial) == (base.total, base.nontrivial)
    perm = list(range(S.s))
    rnd.shuffle(perm)
    permuted = [[r[p] for p in perm] for r in rows]
    c = count_solutions(sys_(permuted, k), N)
    assert (c.total, c.nontrivial) == (base.total, base.nontrivial)


def test_mean_value_examples():
    assert all(mean_value(2, 1, N).value == N for N in range(1, 12))
    assert mean_value(2, 2, 5).value == GOLDEN_N225
    assert mean_value(3, 2, 4).value == GOLDEN_N324


@pytest.mark.parametrize("k,t,N", [(k, t, N) for k in (1, 2, 3) for t in (1, 2) for N in range(1, 7)])
def test_mean_value_matches_naive(k, t, N):
    v = mean_value(k, t, N).value
    assert v == naive_mean_value(k, t, N)
    assert v >= N ** t


def test_even_moment_examples():
    assert even_moment_check(2, 1, 7) == (7, 7)
    assert even_moment_check(2, 2, 5) == (GOLDEN_N225, GOLDEN_N225)
    a, b = even_moment_check(3, 2, 4)
    assert a == b == GOLDEN_N324


def test_orthogonality_route_on_larger_case():
    assert moment_by_orthogonality(2, 3, 10) == mean_value(2, 3, 10).value


def test_exponent_fit():
    fit = exponent_fit([(10, 100), (20, 400), (40, 1600)])
    assert fit.slope == pytest.approx(2.0, abs=1e-12)
    assert fit.max_residual < 1e-9
    with pytest.raises(DegenerateSeries):
        exponent_fit([(1, 1), (2, 2)])
    with pytest.raises(DegenerateSeries):
        exponent_fit([(1, 1), (2, 0), (3, 4)])


def test_two_squares_series_slope():
    fit = exponent_fit([(N, mean_value(2, 2, N).value) for N in (20, 40, 80)])
    assert 2.0 <= fit.slope <= 2.6


def test_trivial_ratio_slope_is_negative():
    S = sys_(FIVE, 2)
    series = []
    for N in (20, 40, 80):
        c = count_solutions(S, N)
        series.append((N, c.trivial / c.total))
    assert exponent_fit(series).slope < 0


def test_analytic_constants():
    c = analytic_constants(2, 1)
    assert (c.p, c.eta, c.delta, c.t_k) == (Fraction(9, 2), Fraction(1, 10), Fraction(4, 5), 2)
    c = analytic_constants(2, 2)
    assert (c.p, c.eta, c.delta) == (Fraction(17, 4), Fraction(1, 18), Fraction(8, 9))
    assert analytic_constants(3, 1).t_k == 4


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-2, 2), min_size=2, max_size=2), st.integers(-3, 3), st.integers(1, 2),
       st.integers(1, 6))
def test_split_system_counter(a, b, k, N):
    A = [a + [-sum(a)]]
    B = [[b]]
    assert count_split_system(A, B, None, 1, k, range(1, N + 1), range(1, 4)) == \
        naive_split_count(A, B, [], 1, k, range(1, N + 1), range(1, 4))
