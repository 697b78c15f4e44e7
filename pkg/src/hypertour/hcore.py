"""Hypergraph and multigraph data model: connectivity, cuts, duality, walks.

Vertices are dense integer ids assigned in label input order; labels are kept
for I/O only.  Edge identity is positional: parallel edges are distinct records
with equal vertex sets.  All types are immutable after construction.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import (
    BadSideError,
    DuplicateLabelError,
    EmptyEdgeError,
    NoEdgesError,
    NotACutError,
    UnknownLabelError,
)

# classify_cut_edge results
NOT_CUT = "not_cut"
TRIVIAL_CUT = "trivial_cut"
NONTRIVIAL_CUT = "nontrivial_cut"
STRONG_CUT = "strong_cut"

# classify_walk results
WALK = "walk"
TRAIL = "trail"
STRICT_TRAIL = "strict_trail"
PATH = "path"
CYCLE = "cycle"
INVALID = "invalid"


@dataclass(frozen=True)
class Hypergraph:
    """A hypergraph: vertex labels plus a positional multiset of edges.

    ``edges[j]`` is a sorted tuple of vertex ids; ``edge_bits[j]`` is the same
    set as an int bitmask (intersection tests dominate the inner loops).
    """

    vertex_labels: tuple[str, ...]
    edges: tuple[tuple[int, ...], ...]
    edge_bits: tuple[int, ...] = field(init=False, repr=False, compare=False)
    vertex_edges: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        labels = tuple(self.vertex_labels)
        if len(labels) == 0:
            raise EmptyEdgeError("a hypergraph needs at least one vertex")
        if len(set(labels)) != len(labels):
            raise DuplicateLabelError("vertex labels must be distinct")
        n = len(labels)
        edges = []
        for j, e in enumerate(self.edges):
            vs = tuple(sorted(set(e)))
            if not vs:
                raise EmptyEdgeError(f"edge {j} is empty")
            if vs[0] < 0 or vs[-1] >= n:
                raise UnknownLabelError(f"edge {j} references an out-of-range vertex")
            edges.append(vs)
        incident: list[list[int]] = [[] for _ in range(n)]
        bits = []
        for j, vs in enumerate(edges):
            b = 0
            for v in vs:
                b |= 1 << v
                incident[v].append(j)
            bits.append(b)
        object.__setattr__(self, "vertex_labels", labels)
        object.__setattr__(self, "edges", tuple(edges))
        object.__setattr__(self, "edge_bits", tuple(bits))
        object.__setattr__(self, "vertex_edges", tuple(tuple(js) for js in incident))

    @property
    def order(self) -> int:
        return len(self.vertex_labels)

    @property
    def size(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.vertex_edges[v])

    def degrees(self) -> tuple[int, ...]:
        return tuple(len(js) for js in self.vertex_edges)

    def uniform_cardinality(self) -> int | None:
        """The common edge cardinality k, or None if not k-uniform or edgeless."""
        cards = {len(e) for e in self.edges}
        return cards.pop() if len(cards) == 1 else None

    def label_of(self, v: int) -> str:
        return self.vertex_labels[v]

    def index_of(self, label: str) -> int:
        try:
            return self.vertex_labels.index(label)
        except ValueError:
            raise UnknownLabelError(f"unknown vertex label {label!r}") from None


@dataclass(frozen=True)
class Multigraph:
    """A multigraph on nodes 0..node_count-1; loops and parallel edges allowed.

    Edges are unordered pairs stored as (min, max); a loop (v, v) contributes
    2 to deg(v).
    """

    node_count: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        norm = []
        for u, v in self.edges:
            if not (0 <= u < self.node_count and 0 <= v < self.node_count):
                raise UnknownLabelError("multigraph edge endpoint out of range")
            norm.append((u, v) if u <= v else (v, u))
        object.__setattr__(self, "edges", tuple(norm))

    def degrees(self) -> list[int]:
        deg = [0] * self.node_count
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def is_even(self) -> bool:
        return all(d % 2 == 0 for d in self.degrees())

    def adjacency(self) -> list[list[tuple[int, int]]]:
        """Per node, the list of (neighbour, edge id), in edge-id order."""
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.node_count)]
        for i, (u, v) in enumerate(self.edges):
            adj[u].append((v, i))
            if u != v:
                adj[v].append((u, i))
        return adj

    def connected_components(self) -> list[frozenset[int]]:
        seen = [False] * self.node_count
        adj = self.adjacency()
        comps = []
        for s in range(self.node_count):
            if seen[s]:
                continue
            seen[s] = True
            comp = [s]
            stack = [s]
            while stack:
                x = stack.pop()
                for y, _ in adj[x]:
                    if not seen[y]:
                        seen[y] = True
                        comp.append(y)
                        stack.append(y)
            comps.append(frozenset(comp))
        return comps

    def has_single_nonempty_component(self) -> bool:
        """True iff all edges live in one connected component (and there is one)."""
        if not self.edges:
            return False
        deg = self.degrees()
        nonempty = [c for c in self.connected_components() if any(deg[x] > 0 for x in c)]
        return len(nonempty) == 1


@dataclass(frozen=True)
class BipartiteIncidenceGraph:
    """Bipartite incidence graph: v-nodes on one side, e-nodes on the other."""

    v_count: int
    e_count: int
    adjacency: tuple[tuple[int, ...], ...]  # per e-node, its incident v-nodes

    def flag_count(self) -> int:
        return sum(len(a) for a in self.adjacency)

    def v_adjacency(self) -> list[list[int]]:
        """Per v-node, the incident e-nodes in e-id order."""
        out: list[list[int]] = [[] for _ in range(self.v_count)]
        for j, vs in enumerate(self.adjacency):
            for v in vs:
                out[v].append(j)
        return out

    def is_connected(self) -> bool:
        total = self.v_count + self.e_count
        if total == 0:
            return True
        # node space: v-nodes 0..v_count-1, e-node j at v_count + j
        vadj = self.v_adjacency()
        seen = [False] * total
        seen[0] = True
        stack = [0]
        reached = 1
        while stack:
            x = stack.pop()
            if x < self.v_count:
                for j in vadj[x]:
                    t = self.v_count + j
                    if not seen[t]:
                        seen[t] = True
                        reached += 1
                        stack.append(t)
            else:
                for v in self.adjacency[x - self.v_count]:
                    if not seen[v]:
                        seen[v] = True
                        reached += 1
                        stack.append(v)
        return reached == total


@dataclass(frozen=True)
class Walk:
    """An alternating vertex/edge sequence v0 e1 v1 ... ek vk."""

    anchors: tuple[int, ...]
    edges: tuple[int, ...]
    closed: bool

    def __post_init__(self):
        object.__setattr__(self, "anchors", tuple(self.anchors))
        object.__setattr__(self, "edges", tuple(self.edges))
        if len(self.anchors) != len(self.edges) + 1:
            raise ValueError("a walk of length k has k+1 anchors")

    @property
    def length(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class EdgeCut:
    """An edge cut [S, S-bar]: side S plus the crossing edge ids."""

    side: frozenset[int]
    cut_edges: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "side", frozenset(self.side))
        object.__setattr__(self, "cut_edges", frozenset(self.cut_edges))


# ---------------------------------------------------------------------------
# operations


def build_hypergraph(labels: list[str], edge_lists: list[list[str]]) -> Hypergraph:
    """Build a hypergraph from labels; duplicate edge-lists yield parallel edges."""
    labels = list(labels)
    if len(set(labels)) != len(labels):
        raise DuplicateLabelError("vertex labels must be distinct")
    index = {lab: i for i, lab in enumerate(labels)}
    edges = []
    for lst in edge_lists:
        if not lst:
            raise EmptyEdgeError("empty edge")
        vs = set()
        for lab in lst:
            if lab not in index:
                raise UnknownLabelError(f"unknown vertex label {lab!r}")
            vs.add(index[lab])
        edges.append(tuple(sorted(vs)))
    return Hypergraph(tuple(labels), tuple(edges))


def incidence_graph(h: Hypergraph) -> BipartiteIncidenceGraph:
    return BipartiteIncidenceGraph(h.order, h.size, tuple(h.edges))


def connected_components(h: Hypergraph) -> list[tuple[frozenset[int], frozenset[int]]]:
    """Components as (vertex set, edge set), ordered by smallest vertex id.

    Trivial components are singleton vertex sets with empty edge sets.
    """
    n = h.order
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in h.edges:
        r = find(e[0])
        for v in e[1:]:
            rv = find(v)
            if rv != r:
                parent[rv] = r
    groups: dict[int, list[int]] = {}
    for v in range(n):
        groups.setdefault(find(v), []).append(v)
    comp_edges: dict[int, list[int]] = {r: [] for r in groups}
    for j, e in enumerate(h.edges):
        comp_edges[find(e[0])].append(j)
    comps = [
        (frozenset(vs), frozenset(comp_edges[r]))
        for r, vs in groups.items()
    ]
    comps.sort(key=lambda c: min(c[0]))
    return comps


def component_count(h: Hypergraph) -> int:
    return len(connected_components(h))


def is_connected(h: Hypergraph) -> bool:
    return component_count(h) == 1


def _components_without_edges(h: Hypergraph, removed: frozenset[int]) -> list[tuple[frozenset[int], frozenset[int]]]:
    keep = [h.edges[j] if j not in removed else None for j in range(h.size)]
    n = h.order
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in keep:
        if e is None:
            continue
        r = find(e[0])
        for v in e[1:]:
            rv = find(v)
            if rv != r:
                parent[rv] = r
    groups: dict[int, list[int]] = {}
    for v in range(n):
        groups.setdefault(find(v), []).append(v)
    comp_edges: dict[int, list[int]] = {r: [] for r in groups}
    for j, e in enumerate(keep):
        if e is not None:
            comp_edges[find(e[0])].append(j)
    comps = [(frozenset(vs), frozenset(comp_edges[r])) for r, vs in groups.items()]
    comps.sort(key=lambda c: min(c[0]))
    return comps


def components_after_deleting(h: Hypergraph, edge_ids) -> list[tuple[frozenset[int], frozenset[int]]]:
    """Connected components of H minus the given edges (vertices all kept)."""
    return _components_without_edges(h, frozenset(edge_ids))


def classify_cut_edge(h: Hypergraph, e: int) -> str:
    """Classify edge e per component counts of H and H minus e.

    Precedence when definitions overlap: strong, then trivial, then nontrivial.
    """
    before = connected_components(h)
    after = _components_without_edges(h, frozenset([e]))
    if len(after) <= len(before):
        return NOT_CUT
    if len(after) == len(before) + len(h.edges[e]) - 1:
        return STRONG_CUT
    nontrivial_before = sum(1 for vs, _ in before if len(vs) > 1)
    nontrivial_after = sum(1 for vs, _ in after if len(vs) > 1)
    if nontrivial_after == nontrivial_before:
        return TRIVIAL_CUT
    return NONTRIVIAL_CUT


def dual(h: Hypergraph) -> Hypergraph:
    """The dual hypergraph: vertices are H's edges, edge e_v collects v's edges."""
    if h.size == 0:
        raise NoEdgesError("dual undefined for an edgeless hypergraph")
    for v in range(h.order):
        if h.degree(v) == 0:
            raise EmptyEdgeError(
                f"dual undefined: isolated vertex {h.label_of(v)!r} would give an empty edge"
            )
    labels = tuple(f"e{j}" for j in range(h.size))
    edges = tuple(tuple(h.vertex_edges[v]) for v in range(h.order))
    return Hypergraph(labels, edges)


def two_section(h: Hypergraph) -> Multigraph:
    """One graph edge uv per hyperedge containing both u and v."""
    pairs = []
    for e in h.edges:
        pairs.extend(itertools.combinations(e, 2))
    return Multigraph(h.order, tuple(pairs))


def walk_violation(h: Hypergraph, w: Walk) -> str | None:
    """First structural violation making w not a walk of h, or None."""
    for j in w.edges:
        if not (0 <= j < h.size):
            return f"edge id {j} out of range"
    for v in w.anchors:
        if not (0 <= v < h.order):
            return f"vertex id {v} out of range"
    for i, j in enumerate(w.edges):
        a, b = w.anchors[i], w.anchors[i + 1]
        if a == b:
            return f"consecutive anchors equal at position {i}"
        bits = h.edge_bits[j]
        if not (bits >> a) & 1:
            return f"anchor {h.label_of(a)} not in edge {j} at position {i}"
        if not (bits >> b) & 1:
            return f"anchor {h.label_of(b)} not in edge {j} at position {i}"
    if w.closed and w.anchors[0] != w.anchors[-1]:
        return "closed walk must end at its initial vertex"
    return None


def classify_walk(h: Hypergraph, w: Walk) -> str:
    """Strongest applicable class: cycle > path > strict_trail > trail > walk."""
    if walk_violation(h, w) is not None:
        return INVALID
    k = w.length
    closed = k >= 1 and w.anchors[0] == w.anchors[-1]
    distinct_edges = len(set(w.edges)) == k
    flags = []
    for i, j in enumerate(w.edges):
        flags.append((w.anchors[i], j))
        flags.append((w.anchors[i + 1], j))
    distinct_flags = len(set(flags)) == len(flags)
    if closed and k >= 2 and distinct_edges and len(set(w.anchors[:-1])) == k:
        return CYCLE
    if not closed and distinct_edges and distinct_flags and len(set(w.anchors)) == k + 1:
        return PATH
    if k == 0:
        return PATH
    if distinct_edges:
        return STRICT_TRAIL
    if distinct_flags:
        return TRAIL
    return WALK


def edge_cut_from_side(h: Hypergraph, side) -> EdgeCut:
    s = frozenset(side)
    if not s or len(s) >= h.order:
        raise BadSideError("side must be a proper nonempty subset of the vertices")
    if any(v < 0 or v >= h.order for v in s):
        raise BadSideError("side contains an out-of-range vertex id")
    smask = 0
    for v in s:
        smask |= 1 << v
    cut = frozenset(
        j for j, bits in enumerate(h.edge_bits)
        if (bits & smask) and (bits & ~smask)
    )
    return EdgeCut(s, cut)


def is_minimal_cut(h: Hypergraph, cut_edges) -> bool:
    """True iff every cut edge intersects every component of H minus the cut."""
    f = frozenset(cut_edges)
    comps = _components_without_edges(h, f)
    if len(comps) == len(connected_components(h)):
        raise NotACutError("deleting the given edges does not disconnect H")
    for j in f:
        bits = h.edge_bits[j]
        for vs, _ in comps:
            if not any((bits >> v) & 1 for v in vs):
                return False
    return True


# ---------------------------------------------------------------------------
# subhypergraph extraction (plumbing shared by the solvers)


def partial_hypergraph(h: Hypergraph, keep_edges) -> tuple[Hypergraph, list[int]]:
    """Same vertices, edge subset; returns (hypergraph, new edge id -> old id)."""
    emap = sorted(keep_edges)
    edges = tuple(h.edges[j] for j in emap)
    return Hypergraph(h.vertex_labels, edges), emap


def induced_hypergraph(h: Hypergraph, vertex_ids) -> tuple[Hypergraph, list[int], list[int]]:
    """H[V']: edges shrunk to V', empty intersections dropped.

    Returns (hypergraph, new vid -> old vid, new edge id -> old edge id).
    """
    vmap = sorted(vertex_ids)
    if not vmap:
        raise BadSideError("induced subhypergraph needs at least one vertex")
    old_to_new = {v: i for i, v in enumerate(vmap)}
    labels = tuple(h.vertex_labels[v] for v in vmap)
    edges = []
    emap = []
    for j, e in enumerate(h.edges):
        inter = tuple(old_to_new[v] for v in e if v in old_to_new)
        if inter:
            edges.append(inter)
            emap.append(j)
    return Hypergraph(labels, tuple(edges)), vmap, emap


def delete_vertices(h: Hypergraph, vertex_ids) -> tuple[Hypergraph, list[int], list[int]]:
    """H - V': induced subhypergraph on the complement."""
    drop = set(vertex_ids)
    return induced_hypergraph(h, [v for v in range(h.order) if v not in drop])


def strong_subhypergraph(h: Hypergraph, vertex_ids, edge_ids) -> tuple[Hypergraph, list[int], list[int]]:
    """Strong subhypergraph (edges kept whole); edges must fit inside vertex_ids."""
    vmap = sorted(vertex_ids)
    old_to_new = {v: i for i, v in enumerate(vmap)}
    labels = tuple(h.vertex_labels[v] for v in vmap)
    emap = sorted(edge_ids)
    edges = []
    for j in emap:
        if any(v not in old_to_new for v in h.edges[j]):
            raise BadSideError(f"edge {j} leaves the given vertex set")
        edges.append(tuple(old_to_new[v] for v in h.edges[j]))
    return Hypergraph(labels, tuple(edges)), vmap, emap
