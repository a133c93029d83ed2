"""
Bohr sets and multiplicative syndeticity
========================================
"""

from fractions import Fraction

from diagpr.regularity import (BohrSpec, bohr_recurrence_check, bohr_set, bohr_syndetic_constant,
                               check_mult_syndetic, random_syndetic_set, syndetic_density_check)

spec = BohrSpec(1, (Fraction(1, 3),), Fraction(1, 10))
print(bohr_set(spec, 12))
print("M0 =", bohr_syndetic_constant(spec))

# squares of n times 1/8 near an integer
print(bohr_set(BohrSpec(2, (Fraction(1, 8),), Fraction(1, 10)), 20))

rep = bohr_recurrence_check(2, Fraction(355, 113), 5000)
print("min ||n^2 a||:", rep.minimum, "at n =", rep.argmin)

S = random_syndetic_set(3, 1000, seed=1)
print(check_mult_syndetic(S, 3, 1000).syndetic, syndetic_density_check(S, 3, 1000))
