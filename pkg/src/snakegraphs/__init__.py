"""Exact snake-graph and matrix-product expansions of curves on surfaces.

The package computes Laurent expansions of arcs and loops on triangulated
surfaces by two independent routes (perfect matchings of snake/band graphs,
and 2x2 matrix products over an exact Laurent polynomial ring) and checks
skein relations between such expansions.
"""

__version__ = "0.1.0"
