"""Euler tour/family certificates, validation, and solvers.

The polynomial family solver walks the incidence-graph characterization: a
family exists iff the incidence graph has a spanning subgraph with degree
exactly 2 at every e-node and even degree at every v-node.  That parity
factor is found by a gadget reduction to perfect matching.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import (
    BadDegreesError,
    DisconnectedError,
    InvalidFamilyError,
    NotUniformError,
    OddDegreeError,
    TooLargeError,
)
from .hcore import Hypergraph, Multigraph, Walk, connected_components, walk_violation
from .matching import max_matching

FOUND = "found"
NONE = "none"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class ClosedTrail:
    """A closed strict trail; trivial (no edges) or of length >= 2.

    A closed strict trail of length 1 is impossible: its two anchors would
    coincide.
    """

    anchors: tuple[int, ...]
    edges: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "anchors", tuple(self.anchors))
        object.__setattr__(self, "edges", tuple(self.edges))
        k = len(self.edges)
        if len(self.anchors) != k + 1:
            raise ValueError("closed trail needs k+1 anchors for k edges")
        if k == 1:
            raise ValueError("a closed strict trail cannot have exactly one edge")
        if self.anchors[0] != self.anchors[-1]:
            raise ValueError("closed trail must return to its initial vertex")
        if len(set(self.edges)) != k:
            raise ValueError("strict trail edges must be pairwise distinct")
        for i in range(k):
            if self.anchors[i] == self.anchors[i + 1]:
                raise ValueError("consecutive anchors must differ")

    @property
    def length(self) -> int:
        return len(self.edges)

    def as_walk(self) -> Walk:
        return Walk(self.anchors, self.edges, closed=True)

    def anchor_set(self) -> frozenset[int]:
        return frozenset(self.anchors)

    def anchor_flags(self) -> list[tuple[int, int]]:
        flags = []
        for i, j in enumerate(self.edges):
            flags.append((self.anchors[i], j))
            flags.append((self.anchors[i + 1], j))
        return flags


@dataclass(frozen=True)
class EulerFamily:
    """Pairwise edge-disjoint, anchor-disjoint nontrivial closed strict trails."""

    trails: tuple[ClosedTrail, ...]

    def __post_init__(self):
        object.__setattr__(self, "trails", tuple(self.trails))
        for t in self.trails:
            if t.length == 0:
                raise ValueError("family trails must be nontrivial")

    def __len__(self) -> int:
        return len(self.trails)

    def edge_ids(self) -> list[int]:
        return [j for t in self.trails for j in t.edges]


@dataclass(frozen=True)
class FamilySubgraph:
    """Subset of incidences (v, e) of the incidence graph, degrees cached."""

    v_count: int
    e_count: int
    flags: frozenset[tuple[int, int]]
    v_degree: tuple[int, ...] = field(init=False, repr=False, compare=False)
    e_degree: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "flags", frozenset(self.flags))
        vdeg = [0] * self.v_count
        edeg = [0] * self.e_count
        for v, j in self.flags:
            vdeg[v] += 1
            edeg[j] += 1
        object.__setattr__(self, "v_degree", tuple(vdeg))
        object.__setattr__(self, "e_degree", tuple(edeg))

    def violation(self) -> str | None:
        for j, d in enumerate(self.e_degree):
            if d != 2:
                return f"e-node {j} has degree {d}, expected 2"
        for v, d in enumerate(self.v_degree):
            if d % 2:
                return f"v-node {v} has odd degree {d}"
        return None

    def as_multigraph(self) -> Multigraph:
        """Flags as a graph on nodes 0..v_count-1 (v) and v_count..+e_count (e)."""
        return Multigraph(
            self.v_count + self.e_count,
            tuple((v, self.v_count + j) for v, j in sorted(self.flags)),
        )

    def nontrivial_components(self) -> list[tuple[frozenset[int], frozenset[int]]]:
        """Components with at least one flag, as (v-node set, e-node set)."""
        g = self.as_multigraph()
        deg = g.degrees()
        out = []
        for comp in g.connected_components():
            if not any(deg[x] > 0 for x in comp):
                continue
            vs = frozenset(x for x in comp if x < self.v_count)
            es = frozenset(x - self.v_count for x in comp if x >= self.v_count)
            out.append((vs, es))
        out.sort(key=lambda c: min(c[0]))
        return out


@dataclass(frozen=True)
class SearchResult:
    """Outcome of a tour search: found/none/unknown plus the certificate."""

    status: str
    trail: ClosedTrail | None = None
    nodes: int = 0

    def __bool__(self) -> bool:
        return self.status == FOUND


# ---------------------------------------------------------------------------
# validation


def check_tour(h: Hypergraph, t: ClosedTrail) -> str | None:
    """First violation making t not an Euler tour of h, or None if valid."""
    reason = walk_violation(h, t.as_walk())
    if reason is not None:
        return reason
    if h.size == 0:
        if t.length != 0:
            return "edgeless hypergraph admits only the trivial tour"
        return None
    if t.length != h.size:
        return f"tour traverses {t.length} edges, hypergraph has {h.size}"
    if len(set(t.edges)) != h.size:
        return "an edge is traversed more than once"
    return None


def validate_tour(h: Hypergraph, t: ClosedTrail) -> bool:
    return check_tour(h, t) is None


def check_family(h: Hypergraph, fam: EulerFamily) -> str | None:
    """First violation making fam not an Euler family of h, or None."""
    seen_edges: set[int] = set()
    seen_anchors: set[int] = set()
    for idx, t in enumerate(fam.trails):
        reason = walk_violation(h, t.as_walk())
        if reason is not None:
            return f"trail {idx}: {reason}"
        for j in t.edges:
            if j in seen_edges:
                return f"trail {idx}: edge {j} already traversed"
            seen_edges.add(j)
        anchors = t.anchor_set()
        if anchors & seen_anchors:
            v = min(anchors & seen_anchors)
            return f"trail {idx}: anchor {h.label_of(v)} shared with another trail"
        seen_anchors |= anchors
    if len(seen_edges) != h.size:
        missing = min(set(range(h.size)) - seen_edges)
        return f"edge {missing} not traversed"
    return None


def validate_family(h: Hypergraph, fam: EulerFamily) -> bool:
    return check_family(h, fam) is None


def is_spanning(h: Hypergraph, obj) -> bool:
    """True iff the tour/family traverses every vertex of h."""
    trails = obj.trails if isinstance(obj, EulerFamily) else (obj,)
    anchors: set[int] = set()
    for t in trails:
        anchors |= t.anchor_set()
    return len(anchors) == h.order


def canonical_trail(t: ClosedTrail) -> ClosedTrail:
    """Rotate/reflect so the trail starts at its minimum anchor and proceeds
    in the lexicographically smaller direction."""
    k = t.length
    if k == 0:
        return t
    ring_a = list(t.anchors[:-1])
    ring_e = list(t.edges)
    best = None
    lo = min(ring_a)
    for start in range(k):
        if ring_a[start] != lo:
            continue
        fwd_a = tuple(ring_a[(start + i) % k] for i in range(k + 1))
        fwd_e = tuple(ring_e[(start + i) % k] for i in range(k))
        # reversed direction: anchors backwards, edge i-1 precedes anchor i-1
        rev_a = tuple(ring_a[(start - i) % k] for i in range(k + 1))
        rev_e = tuple(ring_e[(start - 1 - i) % k] for i in range(k))
        for cand in ((fwd_a, fwd_e), (rev_a, rev_e)):
            if best is None or cand < best:
                best = cand
    return ClosedTrail(best[0], best[1])


# ---------------------------------------------------------------------------
# incidence-subgraph correspondence


def family_to_subgraph(h: Hypergraph, fam: EulerFamily) -> FamilySubgraph:
    """Incidence (v, e) is kept iff it is an anchor flag of some trail."""
    reason = check_family(h, fam)
    if reason is not None:
        raise InvalidFamilyError(reason)
    flags: set[tuple[int, int]] = set()
    for t in fam.trails:
        flags.update(t.anchor_flags())
    sub = FamilySubgraph(h.order, h.size, frozenset(flags))
    return sub


def graph_euler_circuit(g: Multigraph, component) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Euler circuit of one connected even component, as (nodes, edge ids).

    Deterministic: starts at the smallest component node and always leaves on
    the unused edge of smallest id.
    """
    comp = sorted(set(component))
    compset = set(comp)
    deg = [0] * g.node_count
    inside = []
    for i, (u, v) in enumerate(g.edges):
        if u in compset or v in compset:
            if u not in compset or v not in compset:
                raise DisconnectedError(f"edge {i} leaves the component")
            inside.append(i)
            deg[u] += 1
            deg[v] += 1
    for x in comp:
        if deg[x] % 2:
            raise OddDegreeError(f"node {x} has odd degree {deg[x]}")
    if not inside:
        if len(comp) != 1:
            raise DisconnectedError("edgeless component is not connected")
        return (comp[0],), ()
    adj: dict[int, list[tuple[int, int]]] = {x: [] for x in comp}
    for i in inside:
        u, v = g.edges[i]
        adj[u].append((i, v))
        if u != v:
            adj[v].append((i, u))
    start = min(x for x in comp if deg[x] > 0)
    ptr = {x: 0 for x in comp}
    used = set()
    stack: list[tuple[int, int]] = [(start, -1)]
    out_nodes: list[int] = []
    out_edges: list[int] = []
    while stack:
        x, ein = stack[-1]
        advanced = False
        while ptr[x] < len(adj[x]):
            eid, w = adj[x][ptr[x]]
            ptr[x] += 1
            if eid in used:
                continue
            used.add(eid)
            stack.append((w, eid))
            advanced = True
            break
        if not advanced:
            stack.pop()
            out_nodes.append(x)
            if ein != -1:
                out_edges.append(ein)
    if len(used) != len(inside):
        raise DisconnectedError("component edges are not all reachable")
    out_nodes.reverse()
    out_edges.reverse()
    return tuple(out_nodes), tuple(out_edges)


def subgraph_to_family(h: Hypergraph, sub: FamilySubgraph) -> EulerFamily:
    """Euler-circuit extraction per nontrivial component, mapped back to h."""
    reason = sub.violation()
    if reason is not None:
        raise BadDegreesError(reason)
    g = sub.as_multigraph()
    trails = []
    for vs, _ in sub.nontrivial_components():
        comp_nodes = set()
        for comp in g.connected_components():
            if vs & comp:
                comp_nodes = comp
                break
        nodes, _ = graph_euler_circuit(g, comp_nodes)
        # rotate so the circuit starts at a v-node; odd positions are e-nodes
        ring = list(nodes[:-1])
        if ring[0] >= h.order:
            ring = ring[1:] + ring[:1]
        anchors = tuple(ring[i] for i in range(0, len(ring), 2))
        edges = tuple(ring[i] - h.order for i in range(1, len(ring), 2))
        trails.append(canonical_trail(ClosedTrail(anchors + (anchors[0],), edges)))
    trails.sort(key=lambda t: t.anchors)
    return EulerFamily(tuple(trails))


# ---------------------------------------------------------------------------
# polynomial family solver (parity factor -> perfect matching)


def solve_family(h: Hypergraph, seed: int = 0) -> EulerFamily | None:
    """Find an Euler family, or None if h is not quasi-eulerian.

    Gadgets: each e-node of the incidence graph expands to |e| externals plus
    |e|-2 internals (complete bipartite), forcing exactly two incidences kept;
    each v-node of degree d expands to d externals plus a d-clique of
    internals, admitting any even number of kept incidences.  A perfect
    matching of the gadget graph is exactly a valid family subgraph.

    ``seed`` perturbs the matching tie-break order (used by restart
    heuristics); existence does not depend on it.
    """
    if h.size == 0:
        return EulerFamily(())
    if any(len(e) < 2 for e in h.edges):
        return None

    nodes = 0
    adj: list[list[int]] = []

    def new_node() -> int:
        nonlocal nodes
        adj.append([])
        nodes += 1
        return nodes - 1

    def link(a: int, b: int) -> None:
        adj[a].append(b)
        adj[b].append(a)

    # e-side externals, one per flag; the flag is kept iff the matching pairs
    # the e-side external with its v-side partner
    edge_ext: list[list[int]] = []
    flag_partner: dict[int, int] = {}
    for j, e in enumerate(h.edges):
        exts = [new_node() for _ in e]
        edge_ext.append(exts)
        for _ in range(len(e) - 2):
            y = new_node()
            for x in exts:
                link(x, y)
    for v in range(h.order):
        d = h.degree(v)
        if d == 0:
            continue
        exts = []
        for j in h.vertex_edges[v]:
            u = new_node()
            exts.append(u)
            p = h.edges[j].index(v)
            link(edge_ext[j][p], u)
            flag_partner[edge_ext[j][p]] = u
        ws = [new_node() for _ in range(d)]
        for w in ws:
            for u in exts:
                link(w, u)
        for a in range(d):
            for b in range(a + 1, d):
                link(ws[a], ws[b])

    if seed:
        rng = random.Random(seed)
        for lst in adj:
            rng.shuffle(lst)
    mate = max_matching(nodes, adj)
    if any(x == -1 for x in mate):
        return None
    flags = set()
    for j, exts in enumerate(edge_ext):
        for p, x in enumerate(exts):
            if mate[x] == flag_partner[x]:
                flags.add((h.edges[j][p], j))
    sub = FamilySubgraph(h.order, h.size, frozenset(flags))
    assert sub.violation() is None, "matching produced an invalid subgraph"
    return subgraph_to_family(h, sub)


# ---------------------------------------------------------------------------
# feasibility screens and brute-force oracles


def lovasz_feasible(h: Hypergraph, bound: int = 16) -> bool:
    """Exhaustive parity-factor feasibility test on the incidence graph.

    Agrees with solve_family existence; exponential, so guarded by ``bound``
    on |V| + |E|.
    """
    n, m = h.order, h.size
    if n + m > bound:
        raise TooLargeError(f"|V|+|E| = {n + m} exceeds bound {bound}")
    if n + m > 62:
        raise TooLargeError("bitmask scan supports at most 62 incidence nodes")
    total = n + m
    adj = np.zeros(total, dtype=np.int64)
    deg = np.zeros(total, dtype=np.int64)
    for j, e in enumerate(h.edges):
        for v in e:
            adj[v] |= np.int64(1) << (n + j)
            adj[n + j] |= np.int64(1) << v
        deg[n + j] = len(e)
    for v in range(n):
        deg[v] = h.degree(v)
    return bool(kernels.lovasz_scan(adj, deg, n, m))


def brute_force_tour(h: Hypergraph, budget: int | None = None) -> SearchResult:
    """Exhaustive backtracking tour search; Unknown only on budget exhaustion."""
    if h.size == 0:
        return SearchResult(FOUND, ClosedTrail((_lowest_vertex(h),), ()), 0)
    if any(len(e) < 2 for e in h.edges):
        return SearchResult(NONE)
    nonempty = [c for c in connected_components(h) if c[1]]
    if len(nonempty) > 1:
        return SearchResult(NONE)
    limit = np.int64(budget) if budget is not None else np.int64(2**62)
    arrays = kernels.tour_search_arrays(h)
    status, nodes, anchors, eseq = kernels.tour_search(*arrays, h.size, limit)
    nodes = int(nodes)
    if status == kernels.TOUR_FOUND:
        trail = canonical_trail(
            ClosedTrail(tuple(int(a) for a in anchors), tuple(int(j) for j in eseq))
        )
        return SearchResult(FOUND, trail, nodes)
    if status == kernels.TOUR_UNKNOWN:
        return SearchResult(UNKNOWN, None, nodes)
    return SearchResult(NONE, None, nodes)


def _lowest_vertex(h: Hypergraph) -> int:
    return 0


def brute_force_family(h: Hypergraph) -> EulerFamily | None:
    """Enumerate anchor-pair assignments per edge with per-vertex parity checks.

    Oracle for solve_family; exponential, so restricted to |E| <= 10.
    """
    m = h.size
    if m > 10:
        raise TooLargeError(f"|E| = {m} exceeds the brute-force limit of 10")
    if m == 0:
        return EulerFamily(())
    if any(len(e) < 2 for e in h.edges):
        return None
    # last edge index touching each vertex, for early parity pruning
    last_edge = [-1] * h.order
    for j, e in enumerate(h.edges):
        for v in e:
            last_edge[v] = j
    pairs_per_edge = []
    for e in h.edges:
        pairs = [
            (e[a], e[b]) for a in range(len(e)) for b in range(a + 1, len(e))
        ]
        pairs_per_edge.append(pairs)
    parity = [0] * h.order
    chosen: list[tuple[int, int]] = []

    def dfs(j: int) -> bool:
        if j == m:
            return True
        for u, v in pairs_per_edge[j]:
            parity[u] ^= 1
            parity[v] ^= 1
            ok = True
            for x in h.edges[j]:
                if last_edge[x] == j and parity[x]:
                    ok = False
                    break
            if ok:
                chosen.append((u, v))
                if dfs(j + 1):
                    return True
                chosen.pop()
            parity[u] ^= 1
            parity[v] ^= 1
        return False

    if not dfs(0):
        return None
    flags = set()
    for j, (u, v) in enumerate(chosen):
        flags.add((u, j))
        flags.add((v, j))
    sub = FamilySubgraph(h.order, h.size, frozenset(flags))
    return subgraph_to_family(h, sub)


def odd_degree_screen(h: Hypergraph) -> bool:
    """Necessary condition for k-uniform eulerian: |V_odd| <= (k-2)|E|."""
    if h.size == 0:
        return True
    k = h.uniform_cardinality()
    if k is None:
        raise NotUniformError("hypergraph is not uniform")
    odd = sum(1 for d in h.degrees() if d % 2)
    return odd <= (k - 2) * h.size
