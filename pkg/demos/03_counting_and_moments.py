"""
Counting solutions and mean values
==================================

Exact counts by meet-in-the-middle, then the mean value N(3,4,N) whose
growth should look like N^5.
"""

import numpy as np

from diagpr.counting import DiagonalSystem, count_solutions, mean_value
from diagpr.linalg import matrix

five = DiagonalSystem(matrix([[1, 1, 1, 1, -4]]), 2)
for N in (20, 40, 80):
    c = count_solutions(five, N)
    print(N, c.total, c.nontrivial, "trivial share %.3f" % (c.trivial / c.total))

Ns = [16, 32, 64]
vals = [mean_value(3, 4, N).value for N in Ns]
print("N(3,4,N):", vals)
# slope of log N(3,4,N) against log N
print("fitted exponent %.2f" % np.polyfit(np.log(Ns), np.log(vals), 1)[0])
