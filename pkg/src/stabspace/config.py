"""Size bounds for enumerative routines."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Bounds:
    """Limits guarding the exponential enumerations.

    max_vertices bounds both graph canonicalization and the trivalent layer
    of the stable-graph enumeration (which needs 2g-2+n vertices).
    max_cell_dim bounds exact chamber enumeration in the marking directions.
    """

    max_vertices: int = 12
    max_genus: int = 5
    max_markings: int = 6
    max_cell_dim: int = 3


DEFAULT_BOUNDS = Bounds()
