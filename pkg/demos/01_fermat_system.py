"""
A system with the columns condition but no solutions
=====================================================

The columns condition is necessary for partition regularity in every
degree, but for squares it is not sufficient on its own.  Here is a 2x4
system that passes it, fails the non-singularity hypothesis, and has no
solutions at all in the positive integers.
"""

from diagpr.counting import DiagonalSystem, count_solutions
from diagpr.linalg import matrix
from diagpr.matroid import check_condition_I
from diagpr.structure import check_columns_condition, to_normal_form

M = matrix([[1, -2, 1, 0], [1, -1, 0, 1]])

# the first three columns sum to zero and span everything
cert = check_columns_condition(M)
print("columns blocks:", cert.blocks)

nf = to_normal_form(M)
print("A =", [[str(x) for x in r] for r in nf.A.data])
print("B =", [[str(x) for x in r] for r in nf.B.data])

# q(1) = 3 is far below 2^2 + 1
print("condition (I) failures (d, q, threshold):", check_condition_I(M, 2).failures)

print(count_solutions(DiagonalSystem(M, 2), 200).to_json())
