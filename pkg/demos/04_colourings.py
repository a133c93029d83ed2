"""
Colourings without monochromatic solutions
==========================================

Backtracking search for Schur's equation x + y = z.
"""

from diagpr.counting import DiagonalSystem
from diagpr.linalg import matrix
from diagpr.regularity import find_bad_coloring

schur = DiagonalSystem(matrix([[1, 1, -1]]), 1)

for N in (4, 5):
    col = find_bad_coloring(schur, N, 2)
    print(N, "->", None if col is None else col.run_length())

# three colours last until 13
print(find_bad_coloring(schur, 13, 3).run_length())
print(find_bad_coloring(schur, 14, 3))

# requiring x, y, z distinct pushes two colours up to 8
print(find_bad_coloring(schur, 8, 2, solutions="distinct").run_length())
