"""Exact cell enumeration for a finite hyperplane arrangement inside a box.

Dimensions up to 3 are supported.  Cells are open convex polytopes, stored
with the vertex set of their closure; interior points are vertex barycenters.
All arithmetic is rational.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import DimensionLimitError

Vector = tuple[Fraction, ...]


@dataclass(frozen=True)
class Halfspace:
    """normal . x <= offset (interiors use the strict inequality)."""

    normal: Vector
    offset: Fraction


@dataclass(frozen=True)
class Hyperplane:
    """normal . x = offset, with a normalized primitive integer normal."""

    normal: Vector
    offset: Fraction


def normalize_hyperplane(normal: Sequence[Fraction], offset: Fraction) -> Hyperplane:
    """Scale so the normal is a primitive integer vector with positive lead."""
    denoms = [f.denominator for f in normal] + [offset.denominator]
    scale = 1
    for d in denoms:
        scale = scale * d // _gcd(scale, d)
    ints = [int(f * scale) for f in normal]
    off = offset * scale
    g = 0
    for v in ints:
        g = _gcd(g, abs(v))
    if g == 0:
        raise ValueError("zero normal vector")
    ints = [v // g for v in ints]
    off = off / g
    lead = next(v for v in ints if v != 0)
    if lead < 0:
        ints = [-v for v in ints]
        off = -off
    return Hyperplane(tuple(Fraction(v) for v in ints), off)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _dot(a: Vector, b: Vector) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def _solve(rows: list[list[Fraction]]) -> Optional[Vector]:
    """Solve a square rational system; None if singular."""
    size = len(rows)
    m = [row[:] for row in rows]
    for col in range(size):
        pivot = next((r for r in range(col, size) if m[r][col] != 0), None)
        if pivot is None:
            return None
        m[col], m[pivot] = m[pivot], m[col]
        scale = m[col][col]
        m[col] = [x / scale for x in m[col]]
        for r in range(size):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return tuple(m[r][size] for r in range(size))


@dataclass
class Cell:
    """An open cell, given by strict halfspaces and the closure's vertices."""

    halfspaces: list[Halfspace]
    vertices: list[Vector]

    def barycenter(self) -> Vector:
        dim = len(self.vertices[0])
        count = len(self.vertices)
        return tuple(
            sum((v[i] for v in self.vertices), Fraction(0)) / count for i in range(dim)
        )


def _cell_from_halfspaces(halfspaces: list[Halfspace], dim: int) -> Optional[Cell]:
    """Compute vertices; None when the interior is empty or not full-dim."""
    verts: set[Vector] = set()
    for combo in itertools.combinations(range(len(halfspaces)), dim):
        rows = [
            list(halfspaces[k].normal) + [halfspaces[k].offset] for k in combo
        ]
        point = _solve(rows)
        if point is None:
            continue
        if all(_dot(h.normal, point) <= h.offset for h in halfspaces):
            verts.add(point)
    if len(verts) < dim + 1:
        return None
    vlist = sorted(verts)
    base = vlist[0]
    span: list[Vector] = []
    for v in vlist[1:]:
        diff = tuple(a - b for a, b in zip(v, base))
        span.append(diff)
    if _rank(span) < dim:
        return None
    keep = []
    for h in halfspaces:
        tight = [v for v in vlist if _dot(h.normal, v) == h.offset]
        if len(tight) >= dim:
            keep.append(h)
    return Cell(keep if keep else halfspaces, vlist)


def _rank(vectors: list[Vector]) -> int:
    rows = [list(v) for v in vectors]
    rank = 0
    cols = len(rows[0]) if rows else 0
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        scale = rows[r][c]
        rows[r] = [x / scale for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
        rank += 1
    return rank


def box_cell(box: Sequence[tuple[Fraction, Fraction]]) -> Cell:
    dim = len(box)
    halfspaces = []
    for i, (lo, hi) in enumerate(box):
        unit = tuple(Fraction(int(k == i)) for k in range(dim))
        neg = tuple(-u for u in unit)
        halfspaces.append(Halfspace(unit, hi))
        halfspaces.append(Halfspace(neg, -lo))
    cell = _cell_from_halfspaces(halfspaces, dim)
    if cell is None:
        raise ValueError("empty box")
    return cell


def split_cells(
    box: Sequence[tuple[Fraction, Fraction]], hyperplanes: Sequence[Hyperplane]
) -> list[Cell]:
    """All open cells the hyperplanes cut the open box into, sorted by barycenter."""
    dim = len(box)
    if dim == 0:
        return [Cell([], [()])]
    if dim > 3:
        raise DimensionLimitError("cell enumeration supports dimension <= 3")
    cells = [box_cell(box)]
    for hp in sorted(hyperplanes, key=lambda h: (h.normal, h.offset)):
        nxt: list[Cell] = []
        for cell in cells:
            values = [_dot(hp.normal, v) for v in cell.vertices]
            below = any(v < hp.offset for v in values)
            above = any(v > hp.offset for v in values)
            if below and above:
                lower = _cell_from_halfspaces(
                    cell.halfspaces + [Halfspace(hp.normal, hp.offset)], dim
                )
                upper = _cell_from_halfspaces(
                    cell.halfspaces
                    + [Halfspace(tuple(-a for a in hp.normal), -hp.offset)],
                    dim,
                )
                for piece in (lower, upper):
                    if piece is not None:
                        nxt.append(piece)
            else:
                nxt.append(cell)
        cells = nxt
    return sorted(cells, key=lambda c: c.barycenter())
