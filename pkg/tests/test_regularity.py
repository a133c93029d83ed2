import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diagpr.counting import DiagonalSystem, count_solutions
from diagpr.errors import (CapExceeded, InvalidXi, NonSmoothZeta, PreprocessingMissing,
                           SearchBudgetExceeded, SearchExhausted)
from diagpr.linalg import matrix
from diagpr.regularity import (AuxOperatorSpec, BohrSpec, Coloring, W_of, aux_psi, bohr_recurrence_check,
                               bohr_set, bohr_syndetic_constant, check_mult_syndetic, crude_transfer_check,
                               density_experiment, find_bad_coloring, is_good_coloring, kw_root,
                               multiples_set, nu_l1_mass, psi_lower_bound_check, psi_von_neumann_check,
                               random_syndetic_set, select_progression, syndetic_density_check, w_params,
                               weight_nu)
from oracles import naive_colorings, naive_psi

SCHUR = DiagonalSystem(matrix([[1, 1, -1]]), 1)
FIVE = DiagonalSystem(matrix([[1, 1, 1, 1, -4]]), 2)


# ---------------------------------------------------------------- colourings

def test_schur_four_and_five():
    col = find_bad_coloring(SCHUR, 4, 2)
    assert col.classes(2) == [[1, 4], [2, 3]]
    assert naive_colorings([[1, 1, -1]], 1, 4, 2) == [col.colors]
    assert find_bad_coloring(SCHUR, 5, 2) is None
    assert naive_colorings([[1, 1, -1]], 1, 5, 2) == []


def test_weak_schur_number_with_distinct_solutions():
    assert find_bad_coloring(SCHUR, 8, 2, solutions="distinct") is not None
    assert find_bad_coloring(SCHUR, 9, 2, solutions="distinct") is None


def test_three_colour_schur_number():
    assert find_bad_coloring(SCHUR, 13, 3) is not None
    assert find_bad_coloring(SCHUR, 14, 3) is None


def test_no_nontrivial_solutions_means_any_colouring():
    S = DiagonalSystem(matrix([[1, -1]]), 2)
    assert find_bad_coloring(S, 12, 1) is not None
    assert is_good_coloring(S, Coloring(5, (0, 0, 0, 0, 0)))


def test_all_mode_with_constant_solution():
    # x + y - 2z has constant solutions, so no colouring avoids them
    S = DiagonalSystem(matrix([[1, 1, -2]]), 1)
    assert find_bad_coloring(S, 3, 4, solutions="all") is None


def test_coloring_budget():
    with pytest.raises(SearchBudgetExceeded):
        find_bad_coloring(SCHUR, 40, 3, budget=50)


def test_run_length_round_trip():
    c = Coloring(6, (0, 0, 1, 2, 2, 0))
    assert c.run_length() == "0*2,1*1,2*2,0*1"
    assert Coloring.from_run_length(c.run_length()) == c


@pytest.mark.parametrize("N", range(1, 7))
def test_search_agrees_with_exhaustive(N):
    for rows, k in (([[1, 1, -1]], 1), ([[1, 2, -1]], 1), ([[1, 1, -2]], 1)):
        found = find_bad_coloring(DiagonalSystem(matrix(rows), k), N, 2)
        assert (found is None) == (naive_colorings(rows, k, N, 2) == [])


# ---------------------------------------------------------------- density

def test_density_full_interval():
    stats = density_experiment(FIVE, 20, 1, 2, seed=1)
    full = count_solutions(FIVE, 20).nontrivial
    assert stats.prefix == full > 0
    assert stats.counts == (full, full)


def test_density_small_N_has_no_solutions():
    stats = density_experiment(FIVE, 4, Fraction(1, 2), 3, seed=0)
    assert stats.minimum == 0


# ---------------------------------------------------------------- syndeticity

def test_multiples_are_syndetic():
    assert check_mult_syndetic(multiples_set(3), 3, 200).syndetic
    assert syndetic_density_check(multiples_set(3), 3, 9) == (3, 1, True)


def test_upper_half_fails_for_small_x():
    N = 20
    rep = check_mult_syndetic(lambda x: x > N // 2, 1, N)
    assert rep.failures == tuple(range(1, N // 2 + 1))


@pytest.mark.parametrize("strategy", ["random", "largest"])
@pytest.mark.parametrize("M", [2, 3, 5])
def test_generated_syndetic_sets(strategy, M):
    N = 600
    S = random_syndetic_set(M, N, seed=M, strategy=strategy)
    assert check_mult_syndetic(S, M, N).syndetic
    count, bound, ok = syndetic_density_check(S, M, N)
    assert ok


# ---------------------------------------------------------------- Bohr sets

def test_bohr_examples():
    assert bohr_set(BohrSpec(1, [Fraction(1, 3)], Fraction(1, 10)), 12) == [3, 6, 9, 12]
    assert bohr_set(BohrSpec(1, [Fraction(2, 7)], Fraction(3, 5)), 10) == list(range(1, 11))
    spec = BohrSpec(2, [Fraction(1, 8)], Fraction(1, 10))
    assert bohr_set(spec, 16) == [n for n in range(1, 17) if n * n % 8 == 0]


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 3), st.lists(st.fractions(0, 1, max_denominator=30).filter(lambda a: a < 1),
                                    min_size=1, max_size=2), st.fractions(Fraction(1, 50), 1, max_denominator=50))
def test_bohr_membership_is_periodic(h, phases, rho):
    spec = BohrSpec(h, phases, rho)
    L = spec.period
    for n in range(1, 2 * L + 1):
        assert spec.contains(n) == spec.contains(n + L)


def test_recurrence():
    assert bohr_recurrence_check(1, 0, 5).minimum == 0
    rep = bohr_recurrence_check(1, Fraction(1, 2), 10)
    assert rep.minimum == 0 and rep.argmin == 2
    rng = random.Random(4)
    for _ in range(5):
        alpha = Fraction(rng.randint(1, 10 ** 6), 10 ** 6 + 3)
        assert bohr_recurrence_check(2, alpha, 10 ** 4, C=10).within_budget


def test_syndetic_constant():
    assert bohr_syndetic_constant(BohrSpec(1, [Fraction(1, 3)], Fraction(1, 10))) == 3
    assert bohr_syndetic_constant(BohrSpec(1, [Fraction(1, 3)], Fraction(9, 10))) == 1
    with pytest.raises(CapExceeded):
        bohr_syndetic_constant(BohrSpec(1, [Fraction(1, 97)], Fraction(1, 1000)), search_cap=5)


def test_syndetic_constant_matches_scan():
    spec = BohrSpec(1, [Fraction(5, 17)], Fraction(1, 10))
    M0 = bohr_syndetic_constant(spec)
    members = set(bohr_set(spec, 200 * M0))
    assert all(any(j * x in members for j in range(1, M0 + 1)) for x in range(1, 200))
    assert not all(any(j * x in members for j in range(1, M0)) for x in range(1, 200))


# ---------------------------------------------------------------- W-trick

def test_w_params_examples():
    assert (W_of(2, 3), kw_root(2, 3)) == (72, 12)
    assert (W_of(2, 1), kw_root(2, 1)) == (2, 2)
    assert (W_of(3, 2), kw_root(3, 2)) == (72, 6)
    p = w_params(2, 3, 100, zeta=6, xi=5)
    assert p.X == Fraction(100 ** 2, 2 * 72 * 36)


def test_w_params_errors():
    with pytest.raises(InvalidXi):
        w_params(2, 3, 100, xi=3)
    with pytest.raises(NonSmoothZeta):
        w_params(2, 3, 100, zeta=5)


@pytest.mark.parametrize("k", range(1, 7))
def test_kw_root_integrality(k):
    for w in range(1, 14):
        assert kw_root(k, w) ** k == k * W_of(k, w)


def test_select_progression():
    N = 60
    full = select_progression(range(1, N + 1), N, 2)
    assert (full.xi, full.zeta) == (1, 1)
    odd = select_progression(range(1, N + 1, 2), N, 1)
    assert (odd.xi, odd.zeta) == (1, 1) and odd.ratio == 1
    nines = select_progression(range(9, 201, 9), 200, 3)
    assert nines.zeta in (3, 9)
    with pytest.raises(SearchExhausted):
        # w = 1 allows only zeta = 1, and 6 is not in 1 + 2Z
        select_progression([6], 10, 1)


def test_weight_nu():
    p = w_params(2, 1, 20)
    assert weight_nu(p, 2) == 3
    assert weight_nu(p, 3) == 0
    assert weight_nu(p, 0) == 0


@pytest.mark.parametrize("w", [1, 2, 3])
def test_nu_mass_close_to_X(w):
    p = w_params(2, w, 3000)
    mass = nu_l1_mass(p)
    assert mass == sum(weight_nu(p, n) for n in range(1, int(p.X) + 1))
    assert abs(Fraction(mass) / p.X - 1) < Fraction(1, 10)


def test_transfer_baseline():
    p = w_params(2, 1, 40)
    rep = crude_transfer_check(range(1, 41), range(1, 400), p, [[1, 1, -2]], matrix([[]] * 1, 0))
    assert rep.passed and rep.lhs > 0


def test_transfer_empty_A():
    p = w_params(2, 1, 30)
    rep = crude_transfer_check([], range(1, 100), p, [[1, -1]], [[2]])
    assert rep.lhs == 0 and rep.passed


def test_transfer_fermat_derived():
    # A is the first-three-column block of the Fermat matrix in normal form
    p = w_params(2, 1, 30)
    rep = crude_transfer_check(range(1, 31), range(1, 100), p, [[1, 0, -1], [0, 1, -1]], [[2], [1]])
    assert rep.lhs == 0 and rep.rhs == 0 and rep.passed


def test_transfer_requires_preprocessing():
    with pytest.raises(PreprocessingMissing):
        crude_transfer_check(range(1, 10), range(1, 10), w_params(2, 1, 9), [[2, -2]], [[3]])


# ---------------------------------------------------------------- Psi

def test_psi_empty_power():
    spec = AuxOperatorSpec.build([[1, -1]], [[2]], 2, [0, 1])
    assert spec.q == 0
    f = {x: 1 for x in range(1, 21)}
    # P = (2 y^2, 0): sum_x f(x + 2y^2) f(x)
    assert aux_psi(spec, [f], (1,)) == 18


def test_psi_indicators_with_zero_shifts():
    spec = AuxOperatorSpec.build([[1, 0, -1]], [[2]], 2, [0])
    f = {x: 1 for x in range(1, 16)}
    assert aux_psi(spec, [f], (0,)) == len(spec.B_set) ** spec.q * 15
    wide = AuxOperatorSpec.build([[1, 0, -1]], [[2]], 2, [0, 1, 2])
    assert aux_psi(wide, [f], (0,)) <= len(wide.B_set) ** wide.q * 15


def _random_spec(rng):
    shapes = [([[1, 0, -1]], [[2]]), ([[1, 1, 0, -2]], [[2]]), ([[1, 0, -1, 0], [0, 1, 0, -1]], [[1], [2]]),
              ([[1, -1, 1, -1]], [[3]])]
    A, B = rng.choice(shapes)
    B_set = sorted(rng.sample(range(-3, 4), rng.randint(1, 3)))
    return AuxOperatorSpec.build(A, B, 2, B_set)


def test_psi_matches_naive():
    rng = random.Random(8)
    for _ in range(30):
        spec = _random_spec(rng)
        N = rng.randint(3, 9)
        fs = [{x: Fraction(rng.randint(0, 4), 4) for x in range(1, N + 1)} for _ in range(spec.s)]
        y = (rng.randint(0, 2),)
        P = spec.P(y)
        assert aux_psi(spec, fs, y) == naive_psi(spec.kernel, P, spec.B_set, fs, range(-80, 80))


def test_psi_von_neumann():
    rng = random.Random(9)
    for _ in range(30):
        spec = _random_spec(rng)
        N = rng.randint(2, 10)
        f = {x: Fraction(rng.randint(0, 5), 5) for x in range(1, N + 1)}
        g = {x: Fraction(rng.randint(0, 5), 5) for x in range(1, N + 1)}
        _, _, ok = psi_von_neumann_check(spec, f, g, N, (rng.randint(0, 2),))
        assert ok


def test_psi_lower_bound_small():
    spec = AuxOperatorSpec.build([[1, 0, -1]], [[2]], 2, [-1, 0, 1])
    lam, total = psi_lower_bound_check(spec, None, range(1, 13), range(1, 3))
    assert lam >= total > 0
