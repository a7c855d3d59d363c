"""Stability of sheaf multidegrees on a single stable graph.

A sheaf class is the pair (m, N): the componentwise degree vector m and the
set N of nodes where the sheaf is not locally free.  The vector m counts one
unit for every N-half-edge at a vertex, so the total degree is sum(m) - |N|.
Internally the stability inequalities use the normalized vector
lam(v) = m(v) - (N-half-edges at v), for which the defining quantity of a
subset and of its complement are exact negatives of each other.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import (
    DegenerateParameterError,
    DegreeMismatchError,
    InvalidGraphError,
)
from .graphs import MarkedGraph, Subgraph, check_valid, elementary_subgraphs


@dataclass(frozen=True)
class LocalPhi:
    """A stability parameter on one graph: a rational number per vertex."""

    graph: MarkedGraph
    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.values) != self.graph.num_vertices:
            raise InvalidGraphError("phi length does not match vertex count")

    @property
    def d(self) -> Fraction:
        return sum(self.values, Fraction(0))

    def of(self, v: int) -> Fraction:
        return self.values[v]

    def subset_sum(self, vertices: Iterable[int]) -> Fraction:
        return sum((self.values[v] for v in vertices), Fraction(0))


def local_phi(graph: MarkedGraph, values: Sequence) -> LocalPhi:
    return LocalPhi(graph, tuple(Fraction(v) for v in values))


@dataclass(frozen=True)
class SheafClass:
    """Multidegree vector m plus the set of non-locally-free edges."""

    m: tuple[int, ...]
    nonfree: frozenset[int] = frozenset()

    def total_degree(self) -> int:
        return sum(self.m) - len(self.nonfree)


def _nonfree_half_edges(graph: MarkedGraph, nonfree: frozenset[int]) -> tuple[int, ...]:
    h = [0] * graph.num_vertices
    for e in nonfree:
        a, b = graph.edges[e]
        h[a] += 1
        h[b] += 1
    return tuple(h)


def normalized_degrees(graph: MarkedGraph, F: SheafClass) -> tuple[int, ...]:
    """The vector lam with lam(v) = m(v) - (N-half-edges at v)."""
    h = _nonfree_half_edges(graph, F.nonfree)
    return tuple(mv - hv for mv, hv in zip(F.m, h))


def sheaf_class_from_normalized(
    graph: MarkedGraph, lam: Sequence[int], nonfree: frozenset[int]
) -> SheafClass:
    h = _nonfree_half_edges(graph, nonfree)
    return SheafClass(tuple(l + hv for l, hv in zip(lam, h)), nonfree)


def ell(graph: MarkedGraph, sub: Subgraph, k: int, phi: LocalPhi) -> Fraction:
    """The affine functional k - phi(subset) + (crossing edges)/2."""
    if phi.graph is not graph and phi.graph != graph:
        raise InvalidGraphError("phi belongs to a different graph")
    return k - phi.subset_sum(sub.vertices) + Fraction(len(sub.crossing_edges()), 2)


def _subset_data(
    graph: MarkedGraph, vertices: frozenset[int], nonfree: frozenset[int]
) -> tuple[int, int, int]:
    """(crossing count, nonfree crossing count, nonfree internal count)."""
    crossing = 0
    nf_cross = 0
    nf_int = 0
    for k, (a, b) in enumerate(graph.edges):
        ina, inb = a in vertices, b in vertices
        if ina != inb:
            crossing += 1
            if k in nonfree:
                nf_cross += 1
        elif ina and inb and k in nonfree:
            nf_int += 1
    return crossing, nf_cross, nf_int


def _check_class(graph: MarkedGraph, phi: LocalPhi, F: SheafClass) -> None:
    if len(F.m) != graph.num_vertices:
        raise InvalidGraphError("sheaf class length does not match vertex count")
    if any(not 0 <= e < graph.num_edges for e in F.nonfree):
        raise InvalidGraphError("nonfree edge index out of range")
    if F.total_degree() != phi.d:
        raise DegreeMismatchError(
            f"sheaf class has degree {F.total_degree()}, phi has total {phi.d}"
        )


def _stability_excess(
    graph: MarkedGraph, phi: LocalPhi, F: SheafClass
) -> tuple[Fraction, Optional[frozenset[int]]]:
    """max over proper subsets of |defining quantity| - bound, with a witness.

    Negative excess everywhere means stable; zero is the semistable boundary.
    The quantity of the complement is the negative of the quantity of the
    subset, so only subsets containing vertex 0 are scanned.
    """
    lam = normalized_degrees(graph, F)
    nv = graph.num_vertices
    worst = Fraction(-10**9)
    witness: Optional[frozenset[int]] = None
    for mask in range((1 << (nv - 1)) - 1):
        vertices = frozenset([0] + [v for v in range(1, nv) if mask >> (v - 1) & 1])
        crossing, delta, nf_int = _subset_data(graph, vertices, F.nonfree)
        quantity = (
            sum(lam[v] for v in vertices)
            + nf_int
            - phi.subset_sum(vertices)
            + Fraction(delta, 2)
        )
        excess = abs(quantity) - Fraction(crossing - delta, 2)
        if excess > worst:
            worst = excess
            witness = vertices
    return worst, witness


def is_stable(phi: LocalPhi, F: SheafClass) -> bool:
    """Strict inequality over all proper subsets."""
    _check_class(phi.graph, phi, F)
    if phi.graph.num_vertices == 1:
        return True
    excess, _ = _stability_excess(phi.graph, phi, F)
    return excess < 0


def is_semistable(phi: LocalPhi, F: SheafClass) -> bool:
    _check_class(phi.graph, phi, F)
    if phi.graph.num_vertices == 1:
        return True
    excess, _ = _stability_excess(phi.graph, phi, F)
    return excess <= 0


def stability_report(phi: LocalPhi, F: SheafClass) -> tuple[bool, Optional[frozenset[int]]]:
    """(stable?, violating-or-tight subset when not stable)."""
    _check_class(phi.graph, phi, F)
    if phi.graph.num_vertices == 1:
        return True, None
    excess, witness = _stability_excess(phi.graph, phi, F)
    return (excess < 0), (None if excess < 0 else witness)


def is_nondegenerate_local(phi: LocalPhi) -> bool:
    """No elementary subset sits at integer distance from its half-crossing.

    A subset and its complement give the same wall family only when the total
    degree is an integer, so both sides are scanned.
    """
    for sub in elementary_subgraphs(phi.graph):
        value = phi.subset_sum(sub.vertices) - Fraction(len(sub.crossing_edges()), 2)
        if value.denominator == 1:
            return False
    return True


def local_chamber(phi: LocalPhi) -> list[tuple[Subgraph, int, int]]:
    """The active strict inequalities (subset, k, sign) cutting out the chamber.

    For each elementary subset the functionals with the two nearest integer
    offsets are returned; every other offset is implied by monotonicity.
    """
    if not is_nondegenerate_local(phi):
        raise DegenerateParameterError("phi lies on a stability wall")
    out: list[tuple[Subgraph, int, int]] = []
    for sub in elementary_subgraphs(phi.graph):
        center = phi.subset_sum(sub.vertices) - Fraction(len(sub.crossing_edges()), 2)
        k_low = _floor(center)
        out.append((sub, k_low, -1))
        out.append((sub, k_low + 1, +1))
    return out


def _floor(x: Fraction) -> int:
    return x.numerator // x.denominator


def stable_sheaf_classes(
    phi: LocalPhi, include_nonfree: bool = False
) -> list[SheafClass]:
    """All stable classes of the given total degree, smallest data first.

    phi must be nondegenerate with integer total.  Without include_nonfree only
    locally free classes (N empty) are listed.
    """
    graph = phi.graph
    check_valid(graph)
    if phi.d.denominator != 1:
        raise DegreeMismatchError("total degree must be an integer")
    if not is_nondegenerate_local(phi):
        raise DegenerateParameterError("phi lies on a stability wall")
    d = int(phi.d)
    nv = graph.num_vertices
    out: list[SheafClass] = []
    if include_nonfree:
        nonfree_choices = [
            frozenset(c)
            for size in range(graph.num_edges + 1)
            for c in itertools.combinations(range(graph.num_edges), size)
        ]
    else:
        nonfree_choices = [frozenset()]
    for nonfree in nonfree_choices:
        target = d - len(nonfree)
        ranges: list[range] = []
        feasible = True
        for v in range(nv):
            loops_nf = sum(
                1 for e in nonfree if graph.edges[e] == (v, v)
            )
            crossing, delta, _ = _subset_data(graph, frozenset([v]), nonfree)
            lo = phi.of(v) - loops_nf - Fraction(crossing, 2)
            hi = phi.of(v) - loops_nf + Fraction(crossing, 2) - delta
            lam_min = _floor(lo) + 1
            lam_max = _floor(hi) if hi.denominator > 1 else int(hi) - 1
            if nv == 1:
                lam_min, lam_max = target, target
            if lam_min > lam_max:
                feasible = False
                break
            ranges.append(range(lam_min, lam_max + 1))
        if not feasible:
            continue
        for lam in _sum_constrained(ranges, target):
            F = sheaf_class_from_normalized(graph, lam, nonfree)
            if is_stable(phi, F):
                out.append(F)
    return sorted(out, key=lambda F: (sorted(F.nonfree), F.m))


def _sum_constrained(ranges: list[range], target: int):
    """Tuples drawn from the ranges with the prescribed sum."""
    n = len(ranges)
    suffix_min = [0] * (n + 1)
    suffix_max = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix_min[i] = suffix_min[i + 1] + ranges[i][0]
        suffix_max[i] = suffix_max[i + 1] + ranges[i][-1]
    current: list[int] = []

    def rec(i: int, remaining: int):
        if i == n:
            if remaining == 0:
                yield tuple(current)
            return
        for value in ranges[i]:
            rest = remaining - value
            if suffix_min[i + 1] <= rest <= suffix_max[i + 1]:
                current.append(value)
                yield from rec(i + 1, rest)
                current.pop()

    yield from rec(0, target)


# ---------------------------------------------------------------------------
# polarization dictionaries


def omega_multidegree(graph: MarkedGraph) -> LocalPhi:
    """v -> 2 genus(v) - 2 + valence(v); totals 2g - 2."""
    vals = graph.valences()
    return LocalPhi(
        graph,
        tuple(Fraction(2 * graph.genera[v] - 2 + vals[v]) for v in range(graph.num_vertices)),
    )


def phi_from_polarization(degA: LocalPhi, degM: LocalPhi, d: int) -> LocalPhi:
    """Slope-stability data (A ample, M a twist) converted to a phi parameter."""
    graph = degA.graph
    if degM.graph != graph:
        raise InvalidGraphError("degA and degM live on different graphs")
    a = degA.d
    if a <= 0:
        raise DegreeMismatchError("the ample class must have positive total degree")
    m = degM.d
    g = graph.genus
    omega = omega_multidegree(graph)
    scale = Fraction(d + 1 - g + m, 1) / a
    values = tuple(
        scale * degA.of(v) + Fraction(omega.of(v), 2) - degM.of(v)
        for v in range(graph.num_vertices)
    )
    return LocalPhi(graph, values)


def phi_from_E(degE: LocalPhi, r: int) -> LocalPhi:
    """Rank-r polarization sheaf data converted to a phi parameter."""
    if r < 1:
        raise DegreeMismatchError("rank must be a positive integer")
    graph = degE.graph
    omega = omega_multidegree(graph)
    values = tuple(
        degE.of(v) / r + Fraction(omega.of(v), 2) for v in range(graph.num_vertices)
    )
    return LocalPhi(graph, values)
