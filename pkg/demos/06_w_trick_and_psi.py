"""
The W-trick and the auxiliary operator
======================================

Linear solutions in a progression are mapped to solutions of the
quadratic system, and Psi is evaluated on the indicator of [N].
"""

from diagpr.linalg import matrix
from diagpr.regularity import AuxOperatorSpec, aux_psi, crude_transfer_check, nu_l1_mass, w_params

p = w_params(2, 2, 1000)
print("W =", p.W, " root =", p.root, " X =", p.X)
print("nu mass / X = %.4f" % (nu_l1_mass(p) / p.X))

rep = crude_transfer_check(range(1, 41), range(1, 200), w_params(2, 1, 40), [[1, 1, -2]], matrix([[]], 0))
print(rep.lhs, "<=", rep.rhs, rep.passed)

spec = AuxOperatorSpec.build([[1, 0, -1]], [[2]], 2, [-1, 0, 1])
f = {x: 1 for x in range(1, 31)}
for y in range(4):
    print(y, aux_psi(spec, [f], (y,)))
