"""Exact tools for diagonal Diophantine systems: matroid invariants of the
coefficient matrix, Rado-style structural certificates, solution counting and
desk-scale experiments around colourings, dense sets, Bohr sets and the W-trick.
"""

__version__ = "0.1.0"
