"""The relative Picard lattice of the universal curve and its multidegrees.

Elements are integer combinations of the boundary components C+(i,S), the
relative dualizing class (genus >= 2) and the sections.  Multidegrees are
computed on arbitrary stable graphs; the boundary components contribute -1/+1
at the two endpoints of every separating edge carrying the matching label,
which is the unique rule compatible with edge contractions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

from .errors import ConventionError, DegreeMismatchError, InvalidGraphError
from .graphs import (
    MarkedGraph,
    c_index,
    d_index,
    make_gamma_iS,
    make_gamma_j,
    separating_edge_label,
)
from .local import LocalPhi

Generator = Union[
    tuple[str],                       # ("omega",)
    tuple[str, int],                  # ("sigma", j) or ("twist", j)
    tuple[str, int, frozenset[int]],  # ("boundary", i, S)
]


@dataclass(frozen=True)
class PicardElement:
    """Integer coordinates over the free basis for a fixed (g, n).

    boundary is aligned with c_index(g, n).  For genus <= 1 the omega
    coordinate must vanish (the class is not part of the basis there).
    """

    g: int
    n: int
    omega: int
    sections: tuple[int, ...]
    boundary: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.sections) != self.n:
            raise ConventionError("sections coordinate length must equal n")
        if len(self.boundary) != len(c_index(self.g, self.n)):
            raise ConventionError("boundary coordinate length mismatch")
        if self.g <= 1 and self.omega != 0:
            raise ConventionError("omega is not a basis element for genus <= 1")

    def fiber_degree(self) -> int:
        if self.g >= 2:
            return (2 * self.g - 2) * self.omega + sum(self.sections)
        return sum(self.sections)

    def __add__(self, other: "PicardElement") -> "PicardElement":
        self._match(other)
        return PicardElement(
            self.g,
            self.n,
            self.omega + other.omega,
            tuple(a + b for a, b in zip(self.sections, other.sections)),
            tuple(a + b for a, b in zip(self.boundary, other.boundary)),
        )

    def __neg__(self) -> "PicardElement":
        return PicardElement(
            self.g,
            self.n,
            -self.omega,
            tuple(-a for a in self.sections),
            tuple(-a for a in self.boundary),
        )

    def __sub__(self, other: "PicardElement") -> "PicardElement":
        return self + (-other)

    def scale(self, c: int) -> "PicardElement":
        return PicardElement(
            self.g,
            self.n,
            c * self.omega,
            tuple(c * a for a in self.sections),
            tuple(c * a for a in self.boundary),
        )

    def is_zero(self) -> bool:
        return self.omega == 0 and not any(self.sections) and not any(self.boundary)

    def _match(self, other: "PicardElement") -> None:
        if (self.g, self.n) != (other.g, other.n):
            raise DegreeMismatchError("elements live over different (g, n)")


def zero_element(g: int, n: int) -> PicardElement:
    return PicardElement(g, n, 0, (0,) * n, (0,) * len(c_index(g, n)))


def omega_element(g: int, n: int) -> PicardElement:
    if g <= 1:
        raise ConventionError("omega is a basis element only for genus >= 2")
    return replace(zero_element(g, n), omega=1)


def section_element(g: int, n: int, j: int) -> PicardElement:
    if not 1 <= j <= n:
        raise ConventionError(f"no section with index {j}")
    z = zero_element(g, n)
    sections = tuple(1 if k == j - 1 else 0 for k in range(n))
    return replace(z, sections=sections)


def boundary_element(g: int, n: int, i: int, S: frozenset[int] | set[int]) -> PicardElement:
    idx = c_index(g, n)
    S = frozenset(S)
    if (i, S) not in idx:
        raise ConventionError(f"({i},{sorted(S)}) is not a canonical boundary index")
    z = zero_element(g, n)
    boundary = tuple(1 if pair == (i, S) else 0 for pair in idx)
    return replace(z, boundary=boundary)


def twist_element(g: int, n: int, j: int) -> PicardElement:
    """The degree-zero section twist: (2g-2) Sigma_j - omega for genus >= 2,
    Sigma_j - Sigma_1 for genus 1."""
    if j not in d_index(g, n):
        raise ConventionError(f"no twist section with index {j} for (g,n)=({g},{n})")
    if g >= 2:
        return section_element(g, n, j).scale(2 * g - 2) - omega_element(g, n)
    return section_element(g, n, j) - section_element(g, n, 1)


def basis_generators(g: int, n: int) -> list[Generator]:
    gens: list[Generator] = [("boundary", i, S) for (i, S) in c_index(g, n)]
    if g >= 2:
        gens.append(("omega",))
    gens.extend(("sigma", j) for j in range(1, n + 1))
    return gens


# ---------------------------------------------------------------------------
# multidegrees


def generator_multidegree(gen: Generator, graph: MarkedGraph) -> LocalPhi:
    """Per-vertex degrees of a named generator on an arbitrary stable graph."""
    values = _generator_degrees(gen, graph)
    return LocalPhi(graph, tuple(Fraction(v) for v in values))


def _generator_degrees(gen: Generator, graph: MarkedGraph) -> list[int]:
    nv = graph.num_vertices
    kind = gen[0]
    if kind == "omega":
        vals = graph.valences()
        return [2 * graph.genera[v] - 2 + vals[v] for v in range(nv)]
    if kind == "sigma":
        j = gen[1]
        if not 1 <= j <= graph.n:
            raise ConventionError(f"graph has no marking {j}")
        out = [0] * nv
        out[graph.markings[j - 1]] += 1
        return out
    if kind == "twist":
        j = gen[1]
        g = graph.genus
        if g >= 2:
            omega = _generator_degrees(("omega",), graph)
            sigma = _generator_degrees(("sigma", j), graph)
            return [(2 * g - 2) * s - o for s, o in zip(sigma, omega)]
        sigma_j = _generator_degrees(("sigma", j), graph)
        sigma_1 = _generator_degrees(("sigma", 1), graph)
        return [a - b for a, b in zip(sigma_j, sigma_1)]
    if kind == "boundary":
        i, S = gen[1], gen[2]
        out = [0] * nv
        for e, (a, b) in enumerate(graph.edges):
            label = separating_edge_label(graph, e)
            if label != (i, S):
                continue
            # the labelled side (containing marking 1, or of lower genus)
            # meets the edge in one endpoint; it receives -1
            side = _label_side(graph, e)
            other = b if side == a else a
            out[side] -= 1
            out[other] += 1
        return out
    raise ConventionError(f"unknown generator {gen!r}")


def _label_side(graph: MarkedGraph, edge_index: int) -> int:
    """Endpoint of a separating edge lying on the canonically-labelled side."""
    from .graphs import _component_without_edge

    a, b = graph.edges[edge_index]
    side_a = _component_without_edge(graph, edge_index, a)
    sub_markings = frozenset(
        j + 1 for j, w in enumerate(graph.markings) if w in side_a
    )
    if graph.n >= 1:
        return a if 1 in sub_markings else b
    genus_a = (
        sum(graph.genera[v] for v in side_a)
        + sum(1 for u, w in graph.edges if u in side_a and w in side_a)
        - len(side_a)
        + 1
    )
    return a if genus_a < graph.genus - genus_a else b


def generator_degree_matrix(g: int, n: int, graph: MarkedGraph) -> list[list[int]]:
    """Rows indexed by basis_generators(g, n); columns by vertices."""
    if (graph.genus, graph.n) != (g, n):
        raise DegreeMismatchError("graph type does not match (g, n)")
    return [_generator_degrees(gen, graph) for gen in basis_generators(g, n)]


def multidegree(elem: PicardElement, graph: MarkedGraph) -> LocalPhi:
    """Multidegree of an integer Picard element on a graph of its type."""
    if (graph.genus, graph.n) != (elem.g, elem.n):
        raise DegreeMismatchError("graph type does not match the element's (g, n)")
    nv = graph.num_vertices
    total = [0] * nv
    coeffs = list(elem.boundary) + ([elem.omega] if elem.g >= 2 else []) + list(elem.sections)
    for coeff, gen in zip(coeffs, basis_generators(elem.g, elem.n)):
        if coeff == 0:
            continue
        for v, value in enumerate(_generator_degrees(gen, graph)):
            total[v] += coeff * value
    phi = LocalPhi(graph, tuple(Fraction(t) for t in total))
    assert phi.d == elem.fiber_degree()
    return phi


# ---------------------------------------------------------------------------
# change of basis between twist coordinates and vine coordinates


@dataclass(frozen=True)
class BasisChange:
    """The square matrix of first-vertex degrees of the degree-zero basis
    (boundary components, then twists) on the coordinate vine graphs, and its
    exact inverse."""

    g: int
    n: int
    c_idx: tuple[tuple[int, frozenset[int]], ...]
    t_idx: tuple[int, ...]
    matrix: tuple[tuple[Fraction, ...], ...]
    inverse: tuple[tuple[Fraction, ...], ...]


@lru_cache(maxsize=None)
def solve_basis_change(g: int, n: int) -> BasisChange:
    cs = tuple(c_index(g, n))
    ts = tuple(d_index(g, n))
    gens: list[Generator] = [("boundary", i, S) for (i, S) in cs]
    gens.extend(("twist", j) for j in ts)
    rows = []
    for i, S in cs:
        graph = make_gamma_iS(g, n, i, S)
        rows.append(tuple(Fraction(_generator_degrees(gen, graph)[0]) for gen in gens))
    for j in ts:
        graph = make_gamma_j(g, n, j)
        rows.append(tuple(Fraction(_generator_degrees(gen, graph)[0]) for gen in gens))
    matrix = tuple(rows)
    inverse = matrix_inverse(matrix)
    return BasisChange(g, n, cs, ts, matrix, inverse)


def matrix_inverse(matrix: Sequence[Sequence[Fraction]]) -> tuple[tuple[Fraction, ...], ...]:
    """Exact Gauss-Jordan inverse; raises on singular input."""
    size = len(matrix)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(size)] for i, row in enumerate(matrix)]
    for col in range(size):
        pivot = next((r for r in range(col, size) if aug[r][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular matrix")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        scale = aug[col][col]
        aug[col] = [x / scale for x in aug[col]]
        for r in range(size):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[size:]) for row in aug)


def published_inverse_mismatches(
    g: int, n: int
) -> list[tuple[int, int, Fraction, Fraction]]:
    """Coefficient-wise comparison of the computed inverse (rewritten on the
    opposite boundary components) against the transcription in circulation.

    Returns (row, col, computed, transcribed) for every disagreeing entry.
    The computed inverse is authoritative.
    """
    if g < 2:
        raise ConventionError("the transcription only covers genus >= 2")
    bc = solve_basis_change(g, n)
    size = len(bc.c_idx) + len(bc.t_idx)
    published = [[Fraction(0)] * size for _ in range(size)]
    two_g = 2 * g - 2
    for r, (i, S) in enumerate(bc.c_idx):
        published[r][r] = Fraction(1)
        for c, j in enumerate(bc.t_idx):
            col = len(bc.c_idx) + c
            if j in S:
                published[r][col] = Fraction(2 * i + 1 - 2 * g, two_g)
            else:
                published[r][col] = Fraction(1 - 2 * i, two_g)
    for r, j in enumerate(bc.t_idx):
        published[len(bc.c_idx) + r][len(bc.c_idx) + r] = Fraction(1, two_g)
    mismatches = []
    for r in range(size):
        for c in range(size):
            computed = bc.inverse[r][c]
            if r < len(bc.c_idx):
                computed = -computed  # rewrite on the opposite components
            if computed != published[r][c]:
                mismatches.append((r, c, computed, published[r][c]))
    return mismatches


# ---------------------------------------------------------------------------
# the extended group with negation


@dataclass(frozen=True)
class GroupElement:
    """A pair (L, t): translation by L composed with t in Z/2 negations."""

    elem: PicardElement
    t: int

    def __post_init__(self) -> None:
        if self.t not in (0, 1):
            raise ConventionError("t must be 0 or 1")


def identity(g: int, n: int) -> GroupElement:
    return GroupElement(zero_element(g, n), 0)


def compose(a: GroupElement, b: GroupElement) -> GroupElement:
    """(L1,t1) . (L2,t2) = (L1 + (-1)^t1 L2, t1 + t2)."""
    second = b.elem if a.t == 0 else -b.elem
    return GroupElement(a.elem + second, (a.t + b.t) % 2)


def inverse(a: GroupElement) -> GroupElement:
    if a.t == 0:
        return GroupElement(-a.elem, 0)
    return GroupElement(a.elem, 1)
