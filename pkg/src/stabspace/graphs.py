"""Stable marked graphs: validation, canonical forms, enumeration, special graphs.

A graph is stored with an explicit vertex range 0..V-1, an indexed edge list
(unordered pairs, loops allowed) and a marking map sending each label 1..n to
a vertex.  All operations are pure; graphs are immutable and hashable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Optional, Sequence

from .config import DEFAULT_BOUNDS, Bounds
from .errors import BoundsExceededError, ConventionError, InvalidGraphError


@dataclass(frozen=True)
class MarkedGraph:
    """A connected marked graph with vertex genera.

    genera[v] is the genus of vertex v; edges[e] = (u, v) with u <= v;
    markings[j-1] is the vertex carrying marking j.
    """

    genera: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    markings: tuple[int, ...] = ()

    @property
    def num_vertices(self) -> int:
        return len(self.genera)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def n(self) -> int:
        return len(self.markings)

    @property
    def genus(self) -> int:
        return sum(self.genera) - self.num_vertices + self.num_edges + 1

    def valence(self, v: int) -> int:
        """Number of half-edges at v; a loop counts twice."""
        total = 0
        for a, b in self.edges:
            if a == v:
                total += 1
            if b == v:
                total += 1
        return total

    def valences(self) -> tuple[int, ...]:
        out = [0] * self.num_vertices
        for a, b in self.edges:
            out[a] += 1
            out[b] += 1
        return tuple(out)

    def loops_at(self, v: int) -> int:
        return sum(1 for a, b in self.edges if a == v and b == v)

    def markings_at(self, v: int) -> frozenset[int]:
        return frozenset(j + 1 for j, w in enumerate(self.markings) if w == v)

    def marking_counts(self) -> tuple[int, ...]:
        out = [0] * self.num_vertices
        for w in self.markings:
            out[w] += 1
        return tuple(out)


def normalized_graph(
    genera: Sequence[int],
    edges: Sequence[tuple[int, int]],
    markings: Sequence[int] = (),
) -> MarkedGraph:
    """Build a MarkedGraph, sorting each edge pair. Edge order is preserved."""
    return MarkedGraph(
        tuple(genera),
        tuple((min(a, b), max(a, b)) for a, b in edges),
        tuple(markings),
    )


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class ValidationReport:
    problems: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.problems


def is_connected(graph: MarkedGraph) -> bool:
    nv = graph.num_vertices
    if nv <= 1:
        return True
    adj: list[set[int]] = [set() for _ in range(nv)]
    for a, b in graph.edges:
        adj[a].add(b)
        adj[b].add(a)
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == nv


def validate(graph: MarkedGraph) -> ValidationReport:
    """Check connectivity and the valence condition at genus-0 vertices."""
    problems: list[str] = []
    nv = graph.num_vertices
    if nv == 0:
        return ValidationReport(("graph has no vertices",))
    for a, b in graph.edges:
        if not (0 <= a <= b < nv):
            problems.append(f"edge ({a},{b}) out of range")
    for j, w in enumerate(graph.markings):
        if not (0 <= w < nv):
            problems.append(f"marking {j + 1} targets missing vertex {w}")
    if any(gv < 0 for gv in graph.genera):
        problems.append("negative vertex genus")
    if problems:
        return ValidationReport(tuple(problems))
    if not is_connected(graph):
        problems.append("graph is disconnected")
    vals = graph.valences()
    counts = graph.marking_counts()
    for v in range(nv):
        if graph.genera[v] == 0 and vals[v] + counts[v] < 3:
            problems.append(
                f"vertex {v} has genus 0 but only {vals[v]} half-edges "
                f"and {counts[v]} markings"
            )
    return ValidationReport(tuple(problems))


def check_valid(graph: MarkedGraph) -> None:
    report = validate(graph)
    if not report.ok:
        raise InvalidGraphError("; ".join(report.problems))


def genus(graph: MarkedGraph) -> int:
    if not is_connected(graph):
        raise InvalidGraphError("genus formula requires a connected graph")
    return graph.genus


# ---------------------------------------------------------------------------
# contraction


def contract_with_map(graph: MarkedGraph, edge_index: int) -> tuple[MarkedGraph, tuple[int, ...]]:
    """Contract one edge; return the new graph and the vertex map.

    A loop contraction raises the genus of its vertex by one; a non-loop
    contraction merges the endpoints and adds their genera.  The total genus
    is preserved.  vertex_map[v] is the image of v in the contracted graph.
    """
    if not (0 <= edge_index < graph.num_edges):
        raise InvalidGraphError(f"no edge with index {edge_index}")
    a, b = graph.edges[edge_index]
    nv = graph.num_vertices
    if a == b:
        vertex_map = tuple(range(nv))
        genera = list(graph.genera)
        genera[a] += 1
        edges = tuple(e for k, e in enumerate(graph.edges) if k != edge_index)
        return MarkedGraph(tuple(genera), edges, graph.markings), vertex_map
    # merge b into a, shifting the vertices above b down by one
    vmap = []
    for v in range(nv):
        if v == b:
            vmap.append(a if a < b else a - 1)
        else:
            vmap.append(v if v < b else v - 1)
    vertex_map = tuple(vmap)
    genera = [0] * (nv - 1)
    for v in range(nv):
        genera[vertex_map[v]] += graph.genera[v]
    edges = tuple(
        (min(vertex_map[u], vertex_map[w]), max(vertex_map[u], vertex_map[w]))
        for k, (u, w) in enumerate(graph.edges)
        if k != edge_index
    )
    markings = tuple(vertex_map[w] for w in graph.markings)
    return MarkedGraph(tuple(genera), edges, markings), vertex_map


def contract(graph: MarkedGraph, edge_index: int) -> MarkedGraph:
    return contract_with_map(graph, edge_index)[0]


# ---------------------------------------------------------------------------
# canonical forms and automorphisms

def _initial_colors(graph: MarkedGraph) -> list[tuple]:
    vals = graph.valences()
    return [
        (graph.genera[v], tuple(sorted(graph.markings_at(v))), vals[v], graph.loops_at(v))
        for v in range(graph.num_vertices)
    ]


def _adjacency(graph: MarkedGraph) -> list[dict[int, int]]:
    """adj[v][w] = number of edges between v and w (loops stored at adj[v][v])."""
    adj: list[dict[int, int]] = [dict() for _ in range(graph.num_vertices)]
    for a, b in graph.edges:
        adj[a][b] = adj[a].get(b, 0) + 1
        if a != b:
            adj[b][a] = adj[b].get(a, 0) + 1
    return adj


def _refine(adj: list[dict[int, int]], cells: list[list[int]]) -> list[list[int]]:
    """Stable partition refinement by multiset of neighbouring cell indices."""
    while True:
        index_of = {}
        for ci, cell in enumerate(cells):
            for v in cell:
                index_of[v] = ci
        new_cells: list[list[int]] = []
        changed = False
        for cell in cells:
            if len(cell) == 1:
                new_cells.append(cell)
                continue
            sigs: dict[tuple, list[int]] = {}
            for v in cell:
                sig = tuple(sorted((index_of[w], m) for w, m in adj[v].items()))
                sigs.setdefault(sig, []).append(v)
            if len(sigs) == 1:
                new_cells.append(cell)
            else:
                changed = True
                for sig in sorted(sigs):
                    new_cells.append(sorted(sigs[sig]))
        cells = new_cells
        if not changed:
            return cells


def _encode(graph: MarkedGraph, order: Sequence[int]) -> bytes:
    """Byte encoding of the graph relabelled so position p holds order[p]."""
    pos = [0] * graph.num_vertices
    for p, v in enumerate(order):
        pos[v] = p
    data: list[int] = [graph.num_vertices, graph.n]
    data.extend(graph.genera[v] for v in order)
    data.extend(pos[w] for w in graph.markings)
    pairs = sorted((min(pos[a], pos[b]), max(pos[a], pos[b])) for a, b in graph.edges)
    for a, b in pairs:
        data.extend((a, b))
    return bytes(data)


def _canonical_search(graph: MarkedGraph) -> tuple[bytes, tuple[int, ...]]:
    adj = _adjacency(graph)
    colors = _initial_colors(graph)
    order_keys = sorted(range(graph.num_vertices), key=lambda v: colors[v])
    cells: list[list[int]] = []
    for _, group in itertools.groupby(order_keys, key=lambda v: colors[v]):
        cells.append(sorted(group))
    cells = _refine(adj, cells)

    best: list[Optional[bytes]] = [None]
    best_order: list[tuple[int, ...]] = [()]

    def descend(current: list[list[int]]) -> None:
        target = None
        for ci, cell in enumerate(current):
            if len(cell) > 1:
                target = ci
                break
        if target is None:
            order = tuple(cell[0] for cell in current)
            enc = _encode(graph, order)
            if best[0] is None or enc < best[0]:
                best[0] = enc
                best_order[0] = order
            return
        cell = current[target]
        for v in cell:
            rest = [w for w in cell if w != v]
            branched = current[:target] + [[v], rest] + current[target + 1 :]
            descend(_refine(adj, branched))

    descend(cells)
    assert best[0] is not None
    return best[0], best_order[0]


@lru_cache(maxsize=200000)
def canonical_form(graph: MarkedGraph) -> str:
    """Hex encoding invariant under marked-graph isomorphism."""
    if graph.num_vertices > DEFAULT_BOUNDS.max_vertices:
        raise BoundsExceededError(
            f"canonical form limited to {DEFAULT_BOUNDS.max_vertices} vertices"
        )
    return _canonical_search(graph)[0].hex()


def is_isomorphic(g1: MarkedGraph, g2: MarkedGraph) -> bool:
    return canonical_form(g1) == canonical_form(g2)


def vertex_automorphisms(graph: MarkedGraph) -> list[tuple[int, ...]]:
    """All vertex permutations preserving genera, markings and adjacency counts."""
    nv = graph.num_vertices
    adj = _adjacency(graph)
    colors = _initial_colors(graph)
    order_keys = sorted(range(nv), key=lambda v: colors[v])
    cells: list[list[int]] = []
    for _, group in itertools.groupby(order_keys, key=lambda v: colors[v]):
        cells.append(sorted(group))
    cells = _refine(adj, cells)
    cell_of = {}
    for ci, cell in enumerate(cells):
        for v in cell:
            cell_of[v] = ci

    autos: list[tuple[int, ...]] = []
    image: list[Optional[int]] = [None] * nv

    def backtrack(v: int, used: set[int]) -> None:
        if v == nv:
            autos.append(tuple(image))  # type: ignore[arg-type]
            return
        for t in cells[cell_of[v]]:
            if t in used:
                continue
            ok = adj[v].get(v, 0) == adj[t].get(t, 0)
            if ok:
                for u in range(v):
                    if adj[v].get(u, 0) != adj[t].get(image[u], 0):  # type: ignore[arg-type]
                        ok = False
                        break
            if ok:
                image[v] = t
                used.add(t)
                backtrack(v + 1, used)
                used.remove(t)
                image[v] = None

    backtrack(0, set())
    return autos


def automorphisms(graph: MarkedGraph) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """The automorphism group as (vertex permutation, edge permutation) pairs.

    Half-edge flips of loops are not represented; parallel edges contribute
    all bijections between corresponding parallel classes.
    """
    if graph.num_vertices > DEFAULT_BOUNDS.max_vertices:
        raise BoundsExceededError("graph too large for automorphism listing")
    classes: dict[tuple[int, int], list[int]] = {}
    for k, (a, b) in enumerate(graph.edges):
        classes.setdefault((a, b), []).append(k)
    keys = sorted(classes)
    out: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    for sigma in vertex_automorphisms(graph):
        target_lists = []
        for key in keys:
            a, b = key
            ta, tb = sigma[a], sigma[b]
            tkey = (min(ta, tb), max(ta, tb))
            target_lists.append(classes[tkey])
        for choice in itertools.product(
            *[itertools.permutations(t) for t in target_lists]
        ):
            eperm = [0] * graph.num_edges
            for key, targets in zip(keys, choice):
                for src, dst in zip(classes[key], targets):
                    eperm[src] = dst
            out.append((sigma, tuple(eperm)))
    return out


def vertex_orbits(graph: MarkedGraph) -> list[frozenset[int]]:
    """Orbits of the vertex set under the automorphism group."""
    parent = list(range(graph.num_vertices))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for sigma in vertex_automorphisms(graph):
        for v, w in enumerate(sigma):
            rv, rw = find(v), find(w)
            if rv != rw:
                parent[rv] = rw
    groups: dict[int, set[int]] = {}
    for v in range(graph.num_vertices):
        groups.setdefault(find(v), set()).add(v)
    return [frozenset(s) for s in sorted(groups.values(), key=min)]


# ---------------------------------------------------------------------------
# subgraphs


@dataclass(frozen=True)
class Subgraph:
    """A proper nonempty vertex subset, carrying its induced edges."""

    graph: MarkedGraph = field(repr=False)
    vertices: frozenset[int]

    def __post_init__(self) -> None:
        nv = self.graph.num_vertices
        if not self.vertices or len(self.vertices) >= nv:
            raise InvalidGraphError("subgraph must be proper and nonempty")
        if any(not 0 <= v < nv for v in self.vertices):
            raise InvalidGraphError("subgraph vertex out of range")

    def complement(self) -> "Subgraph":
        nv = self.graph.num_vertices
        return Subgraph(self.graph, frozenset(range(nv)) - self.vertices)

    def internal_edges(self) -> tuple[int, ...]:
        return tuple(
            k
            for k, (a, b) in enumerate(self.graph.edges)
            if a in self.vertices and b in self.vertices
        )

    def crossing_edges(self) -> tuple[int, ...]:
        return tuple(
            k
            for k, (a, b) in enumerate(self.graph.edges)
            if (a in self.vertices) != (b in self.vertices)
        )

    def side_genus(self) -> int:
        """Arithmetic genus of the induced subgraph (sum over its components +
        first Betti number would differ; this is the connected-side formula)."""
        return (
            sum(self.graph.genera[v] for v in self.vertices)
            + len(self.internal_edges())
            - len(self.vertices)
            + 1
        )

    def side_markings(self) -> frozenset[int]:
        return frozenset(
            j + 1 for j, w in enumerate(self.graph.markings) if w in self.vertices
        )

    @property
    def is_elementary(self) -> bool:
        return _subset_connected(self.graph, self.vertices) and _subset_connected(
            self.graph, self.complement().vertices
        )


def _subset_connected(graph: MarkedGraph, vertices: frozenset[int]) -> bool:
    if not vertices:
        return False
    adj: dict[int, set[int]] = {v: set() for v in vertices}
    for a, b in graph.edges:
        if a in vertices and b in vertices and a != b:
            adj[a].add(b)
            adj[b].add(a)
    start = next(iter(vertices))
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(vertices)


def proper_subsets(graph: MarkedGraph) -> Iterator[frozenset[int]]:
    nv = graph.num_vertices
    for mask in range(1, (1 << nv) - 1):
        yield frozenset(v for v in range(nv) if mask >> v & 1)


def elementary_subgraphs(graph: MarkedGraph) -> list[Subgraph]:
    """All vertex subsets inducing a connected subgraph with connected complement."""
    out = []
    for vs in proper_subsets(graph):
        sub = Subgraph(graph, vs)
        if sub.is_elementary:
            out.append(sub)
    return out


# ---------------------------------------------------------------------------
# special two-vertex graphs


@dataclass(frozen=True)
class VineLabel:
    """A loopless two-vertex stable graph: alpha edges, first side of genus i
    carrying the markings S; the ambient (g, n) fixes the second side."""

    g: int
    n: int
    alpha: int
    i: int
    S: frozenset[int]

    def __post_init__(self) -> None:
        j = self.second_genus
        Sc = self.second_markings
        if self.alpha < 1 or self.i < 0 or j < 0:
            raise ConventionError(f"invalid vine data {self}")
        if not self.S <= frozenset(range(1, self.n + 1)):
            raise ConventionError("marking subset out of range")
        if self.i == 0 and self.alpha + len(self.S) < 3:
            raise ConventionError("first side unstable")
        if j == 0 and self.alpha + len(Sc) < 3:
            raise ConventionError("second side unstable")

    @property
    def second_genus(self) -> int:
        return self.g + 1 - self.alpha - self.i

    @property
    def second_markings(self) -> frozenset[int]:
        return frozenset(range(1, self.n + 1)) - self.S

    def flipped(self) -> "VineLabel":
        return VineLabel(self.g, self.n, self.alpha, self.second_genus, self.second_markings)

    def canonical(self) -> "VineLabel":
        """Orient so marking 1 sits on the first side (lower genus first if n=0)."""
        if self.n >= 1:
            return self if 1 in self.S else self.flipped()
        if self.i > self.second_genus:
            return self.flipped()
        return self

    def is_canonical(self) -> bool:
        return self == self.canonical()


def make_vine(label: VineLabel) -> MarkedGraph:
    markings = tuple(0 if j in label.S else 1 for j in range(1, label.n + 1))
    graph = MarkedGraph(
        (label.i, label.second_genus),
        tuple((0, 1) for _ in range(label.alpha)),
        markings,
    )
    check_valid(graph)
    return graph


def c_index(g: int, n: int) -> list[tuple[int, frozenset[int]]]:
    """Canonical (i, S) pairs indexing the one-edge vine graphs.

    With markings, 1 in S; without markings, i < g - i (symmetric splittings
    carry no index).  The endpoint-stability constraints are built in.
    """
    out: list[tuple[int, frozenset[int]]] = []
    labels = frozenset(range(1, n + 1))
    if n == 0:
        for i in range(0, g + 1):
            if i < g - i and i >= 1 and g - i >= 1:
                out.append((i, frozenset()))
        return out
    for i in range(0, g + 1):
        for size in range(0, n + 1):
            for rest in itertools.combinations(sorted(labels - {1}), size):
                S = frozenset({1} | set(rest))
                if i == 0 and len(S) < 2:
                    continue
                if i == g and len(S) > n - 2:
                    continue
                out.append((i, S))
    return sorted(out, key=lambda p: (p[0], sorted(p[1])))


def d_index(g: int, n: int) -> list[int]:
    """Markings j indexing the two-edge graphs with a rational marked tail."""
    if g == 0 or n == 0:
        return []
    start = 2 if g == 1 else 1
    return list(range(start, n + 1))


def make_gamma_iS(g: int, n: int, i: int, S: frozenset[int] | set[int]) -> MarkedGraph:
    S = frozenset(S)
    if (i, S) not in set(c_index(g, n)):
        raise ConventionError(f"(i, S)=({i},{sorted(S)}) violates the index conventions")
    return make_vine(VineLabel(g, n, 1, i, S))


def make_gamma_j(g: int, n: int, j: int) -> MarkedGraph:
    if j not in d_index(g, n):
        raise ConventionError(f"j={j} out of range for (g,n)=({g},{n})")
    return make_vine(VineLabel(g, n, 2, 0, frozenset({j})))


def vine_labels(g: int, n: int, min_alpha: int = 1) -> list[VineLabel]:
    """One canonical label per isomorphism class of loopless two-vertex graphs."""
    out = []
    seen = set()
    labels = frozenset(range(1, n + 1))
    for alpha in range(max(1, min_alpha), g + 2):
        for i in range(0, g + 2 - alpha):
            j = g + 1 - alpha - i
            for size in range(0, n + 1):
                for S_tuple in itertools.combinations(sorted(labels), size):
                    S = frozenset(S_tuple)
                    if i == 0 and alpha + len(S) < 3:
                        continue
                    if j == 0 and alpha + (n - len(S)) < 3:
                        continue
                    if n == 0 and alpha == 1 and i == g - i:
                        continue  # symmetric splitting carries no label
                    label = VineLabel(g, n, alpha, i, S).canonical()
                    key = (label.alpha, label.i, label.S)
                    if key not in seen:
                        seen.add(key)
                        out.append(label)
    return sorted(out, key=lambda l: (l.alpha, l.i, sorted(l.S)))


def collapse_to_vine(graph: MarkedGraph, sub: Subgraph) -> VineLabel:
    """Collapse an elementary subgraph and its complement to a two-vertex graph."""
    if not sub.is_elementary:
        raise InvalidGraphError("collapse requires an elementary subgraph")
    alpha = len(sub.crossing_edges())
    return VineLabel(graph.genus, graph.n, alpha, sub.side_genus(), sub.side_markings())


def separating_edge_label(
    graph: MarkedGraph, edge_index: int
) -> Optional[tuple[int, frozenset[int]]]:
    """Canonical (i, S) of the splitting induced by a separating edge, else None.

    Loops and non-separating edges return None; so do the index-less symmetric
    splittings when n = 0.
    """
    a, b = graph.edges[edge_index]
    if a == b:
        return None
    side = _component_without_edge(graph, edge_index, a)
    if b in side:
        return None
    sub = Subgraph(graph, side)
    i = sub.side_genus()
    S = sub.side_markings()
    g, n = graph.genus, graph.n
    if n >= 1:
        if 1 not in S:
            i, S = g - i, frozenset(range(1, n + 1)) - S
        return (i, S)
    if i == g - i:
        return None
    return (min(i, g - i), frozenset())


def _component_without_edge(graph: MarkedGraph, edge_index: int, start: int) -> frozenset[int]:
    adj: list[set[int]] = [set() for _ in range(graph.num_vertices)]
    for k, (u, w) in enumerate(graph.edges):
        if k == edge_index or u == w:
            continue
        adj[u].add(w)
        adj[w].add(u)
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return frozenset(seen)


# ---------------------------------------------------------------------------
# spanning trees


def spanning_tree_count(graph: MarkedGraph) -> int:
    """Number of spanning trees via the reduced Laplacian determinant."""
    check_valid(graph)
    nv = graph.num_vertices
    if nv == 1:
        return 1
    lap = [[0] * nv for _ in range(nv)]
    for a, b in graph.edges:
        if a == b:
            continue
        lap[a][a] += 1
        lap[b][b] += 1
        lap[a][b] -= 1
        lap[b][a] -= 1
    minor = [row[1:] for row in lap[1:]]
    return _int_determinant(minor)


def _int_determinant(matrix: list[list[int]]) -> int:
    """Bareiss fraction-free elimination; exact for integer matrices."""
    m = [row[:] for row in matrix]
    size = len(m)
    if size == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(size - 1):
        if m[k][k] == 0:
            for r in range(k + 1, size):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[size - 1][size - 1]


# ---------------------------------------------------------------------------
# enumeration of stable graphs


def _marking_assignments(counts: tuple[int, ...], n: int) -> Iterator[tuple[int, ...]]:
    """All maps {1..n} -> vertices with the prescribed per-vertex counts."""
    slots: list[int] = []
    for v, c in enumerate(counts):
        slots.extend([v] * c)
    seen = set()
    for perm in itertools.permutations(slots):
        if perm not in seen:
            seen.add(perm)
            yield perm


def _exact_degree_multigraphs(degrees: tuple[int, ...]) -> Iterator[tuple[tuple[int, int], ...]]:
    """Connected multigraphs (with loops) realizing the degree sequence exactly."""
    nv = len(degrees)
    slots = [(i, j) for i in range(nv) for j in range(i, nv)]
    total = sum(degrees)
    if total % 2:
        return
    counts = [0] * len(slots)
    remaining = list(degrees)
    results: list[tuple[tuple[int, int], ...]] = []

    def rec(idx: int) -> None:
        if idx == len(slots):
            if all(r == 0 for r in remaining):
                edges = []
                for k, c in enumerate(counts):
                    edges.extend([slots[k]] * c)
                graph_edges = tuple(edges)
                if _edges_connected(nv, graph_edges):
                    results.append(graph_edges)
            return
        i, j = slots[idx]
        # max multiplicity at this slot
        if i == j:
            cap = remaining[i] // 2
        else:
            cap = min(remaining[i], remaining[j])
        # feasibility: every vertex whose slots are exhausted must be satisfied
        for c in range(cap, -1, -1):
            counts[idx] = c
            if i == j:
                remaining[i] -= 2 * c
            else:
                remaining[i] -= c
                remaining[j] -= c
            ok = True
            # vertex i is finished when we pass its last slot
            if j == nv - 1 and remaining[i] != 0:
                ok = False
            if ok and idx == len(slots) - 1 and remaining[j] != 0:
                ok = False
            if ok:
                rec(idx + 1)
            if i == j:
                remaining[i] += 2 * c
            else:
                remaining[i] += c
                remaining[j] += c
        counts[idx] = 0

    rec(0)
    yield from results


def _edges_connected(nv: int, edges: tuple[tuple[int, int], ...]) -> bool:
    if nv <= 1:
        return True
    parent = list(range(nv))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    root = find(0)
    return all(find(v) == root for v in range(nv))


def _trivalent_graphs(g: int, n: int) -> list[MarkedGraph]:
    """Stable graphs with all vertices of genus 0 and valence+markings = 3.

    Unmarked structures (vertices coloured by their marking count) are deduped
    first; the labelled markings are then distributed one representative per
    orbit of the structure's automorphism group, which classifies exactly.
    """
    nv = 2 * g - 2 + n
    if nv <= 0:
        return []
    structures: dict[str, tuple[tuple[int, ...], tuple[tuple[int, int], ...]]] = {}
    for counts in itertools.product(range(4), repeat=nv):
        if sum(counts) != n:
            continue
        degrees = tuple(3 - c for c in counts)
        if sum(degrees) % 2:
            continue
        if nv > 1 and any(d == 0 for d in degrees):
            continue
        for edges in _exact_degree_multigraphs(degrees):
            # the genera slot temporarily holds the marking counts, which makes
            # canonical_form a colored-structure key (true genera are all 0)
            colored = MarkedGraph(counts, edges)
            key = canonical_form(colored)
            if key not in structures:
                structures[key] = (counts, edges)
    out: list[MarkedGraph] = []
    for counts, edges in structures.values():
        colored = MarkedGraph(counts, edges)
        group = vertex_automorphisms(colored)
        seen_marks: set[tuple[int, ...]] = set()
        for marks in _marking_assignments(counts, n):
            rep = min(tuple(sigma[w] for w in marks) for sigma in group)
            if rep in seen_marks:
                continue
            seen_marks.add(rep)
            graph = MarkedGraph((0,) * nv, edges, rep)
            if graph.genus == g and validate(graph).ok:
                out.append(graph)
    return out


@lru_cache(maxsize=None)
def enumerate_stable_graphs(
    g: int, n: int, bounds: Bounds = DEFAULT_BOUNDS
) -> tuple[MarkedGraph, ...]:
    """All stable n-marked genus-g graphs, one per isomorphism class.

    The maximal (trivalent) graphs are generated directly; everything else is
    reached by closing under single-edge contractions.  Output is sorted by
    canonical form.
    """
    if 2 * g - 2 + n <= 0:
        raise BoundsExceededError(f"(g,n)=({g},{n}) violates 2g-2+n > 0")
    if g > bounds.max_genus or n > bounds.max_markings:
        raise BoundsExceededError(
            f"(g,n)=({g},{n}) exceeds bounds g<={bounds.max_genus}, n<={bounds.max_markings}"
        )
    if max(1, 2 * g - 2 + n) > bounds.max_vertices:
        raise BoundsExceededError("trivalent layer exceeds the vertex bound")
    found: dict[str, MarkedGraph] = {}
    frontier: list[MarkedGraph] = []
    for graph in _trivalent_graphs(g, n):
        key = canonical_form(graph)
        if key not in found:
            found[key] = graph
            frontier.append(graph)
    while frontier:
        nxt: list[MarkedGraph] = []
        for graph in frontier:
            for e in range(graph.num_edges):
                smaller = contract(graph, e)
                key = canonical_form(smaller)
                if key not in found:
                    found[key] = smaller
                    nxt.append(smaller)
        frontier = nxt
    out = sorted(found.values(), key=canonical_form)
    for graph in out:
        assert graph.genus == g and graph.n == n
    return tuple(out)
