"""Exact combinatorics of stability spaces for sheaf multidegrees on stable
marked graphs: walls, chambers, the dihedral translation action, and the
section-extension criteria.  All arithmetic uses exact rationals."""

__version__ = "0.1.0"
