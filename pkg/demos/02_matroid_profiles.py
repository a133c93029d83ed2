"""
mu, q and partitioning columns
==============================

mu(d) is the largest number of columns inside a d-dimensional span; q(d)
is the complementary count.  A 2x4 matrix splits into two invertible 2x2
blocks exactly when mu(d) <= 2d.
"""

from diagpr.linalg import matrix
from diagpr.matroid import is_k_partitionable, mu_profile, q_profile

for rows in ([[1, 0, 1, 1], [0, 1, 1, 2]],
             [[1, 1, 1, 0], [0, 0, 0, 1]]):
    M = matrix(rows)
    cert = is_k_partitionable(M, 2)
    print(rows)
    print("  mu:", mu_profile(M), " q:", q_profile(M))
    print("  blocks:", None if cert is None else cert.blocks)
