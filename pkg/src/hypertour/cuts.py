"""Edge-cut reductions and the branch-and-bound Euler tour search.

The search deletes degree-1 vertices, computes a minimum edge cut, and
dispatches on the cut size and the number of nonempty components: small cuts
use collapsed-hypergraph splicing, large cuts enumerate choice functions that
assign each cut edge to a pair of components, trimming edges and recursing.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    BadCutError,
    CollapsedVertexNotTraversedError,
    DisconnectedError,
    InvalidInputsError,
    InvalidPiecesError,
    NoCutExistsError,
    NotACutError,
    OverlappingPartsError,
)
from .euler import (
    FOUND,
    NONE,
    UNKNOWN,
    ClosedTrail,
    EulerFamily,
    FamilySubgraph,
    SearchResult,
    brute_force_tour,
    canonical_trail,
    check_family,
    family_to_subgraph,
    solve_family,
    subgraph_to_family,
    validate_tour,
)
from .hcore import (
    Hypergraph,
    Multigraph,
    components_after_deleting,
    connected_components,
    induced_hypergraph,
    is_connected,
    is_minimal_cut,
    strong_subhypergraph,
)
from .hcore import EdgeCut


@dataclass(frozen=True)
class ChoiceFunction:
    """Assignment of each cut edge to an unordered component pair {i, j}."""

    assignments: tuple[tuple[int, tuple[int, int]], ...]

    def __post_init__(self):
        norm = []
        for f, (i, j) in self.assignments:
            norm.append((f, (i, j) if i <= j else (j, i)))
        norm.sort()
        object.__setattr__(self, "assignments", tuple(norm))

    @classmethod
    def from_dict(cls, d: dict[int, tuple[int, int]]) -> "ChoiceFunction":
        return cls(tuple(d.items()))

    def domain(self) -> list[int]:
        return [f for f, _ in self.assignments]

    def get(self, f: int) -> tuple[int, int]:
        for g, pair in self.assignments:
            if g == f:
                return pair
        raise KeyError(f)


@dataclass(frozen=True)
class CollapsedHypergraph:
    """Result of identifying each part to a single fresh vertex.

    ``origin_map`` sends each base vertex to its original id (int) or to the
    collapsed original vertex set (frozenset); ``edge_origins`` sends each
    surviving base edge to the original edge it came from.
    """

    base: Hypergraph
    collapsed_vertex_ids: tuple[int, ...]
    origin_map: dict
    edge_origins: tuple[int, ...]

    def origin_vertex(self, v: int) -> int:
        """Original id of an uncollapsed base vertex."""
        o = self.origin_map[v]
        if isinstance(o, frozenset):
            raise InvalidInputsError(f"base vertex {v} is a collapsed vertex")
        return o


def collapse(h: Hypergraph, parts) -> CollapsedHypergraph:
    parts = [frozenset(p) for p in parts]
    seen: set[int] = set()
    for p in parts:
        if not p:
            raise OverlappingPartsError("parts must be nonempty")
        if p & seen:
            raise OverlappingPartsError("parts must be pairwise disjoint")
        if any(v < 0 or v >= h.order for v in p):
            raise OverlappingPartsError("part contains an out-of-range vertex id")
        seen |= p
    keep = [v for v in range(h.order) if v not in seen]
    labels = [h.vertex_labels[v] for v in keep]
    taken = set(labels)
    new_ids = {}
    origin_map: dict = {}
    for i, v in enumerate(keep):
        new_ids[v] = i
        origin_map[i] = v
    collapsed_ids = []
    for p in parts:
        name = "~" + h.vertex_labels[min(p)]
        while name in taken:
            name = "~" + name
        taken.add(name)
        cid = len(labels)
        labels.append(name)
        collapsed_ids.append(cid)
        origin_map[cid] = p
    edges = []
    edge_origins = []
    for j, e in enumerate(h.edges):
        img = {new_ids[v] for v in e if v in new_ids}
        for pi, p in enumerate(parts):
            if any(v in p for v in e):
                img.add(collapsed_ids[pi])
        if len(img) >= 2:
            edges.append(tuple(sorted(img)))
            edge_origins.append(j)
    base = Hypergraph(tuple(labels), tuple(edges))
    return CollapsedHypergraph(base, tuple(collapsed_ids), origin_map, tuple(edge_origins))


# ---------------------------------------------------------------------------
# minimum / minimal edge cuts


def minimalize_cut(h: Hypergraph, cut_edges) -> frozenset[int]:
    """Greedily shrink an edge cut while H minus it stays disconnected."""
    f = set(cut_edges)
    base_comps = len(connected_components(h))
    if len(components_after_deleting(h, f)) == base_comps:
        raise NotACutError("deleting the given edges does not disconnect H")
    for j in sorted(f):
        trial = f - {j}
        if len(components_after_deleting(h, trial)) > base_comps:
            f = trial
    return frozenset(f)


def minimum_edge_cut(h: Hypergraph) -> EdgeCut:
    """Minimum-cardinality edge cut of a connected hypergraph, minimalized.

    Unit-capacity flow: each hyperedge is a split node of capacity 1,
    vertices pass through freely; the minimum over a fixed source vertex and
    all sinks is a global minimum cut.
    """
    if h.order == 1 or h.size == 0:
        raise NoCutExistsError("no proper vertex side exists")
    if not is_connected(h):
        raise DisconnectedError("minimum_edge_cut expects a connected hypergraph")
    n, m = h.order, h.size
    # flow nodes: vertex v -> v; edge j -> in n+2j, out n+2j+1
    node_count = n + 2 * m
    INF = m + 1

    def solve(source: int, sink: int) -> tuple[int, set[int]]:
        cap: dict[tuple[int, int], int] = {}
        adj: list[list[int]] = [[] for _ in range(node_count)]

        def arc(a, b, c):
            if (a, b) not in cap:
                cap[(a, b)] = 0
                cap[(b, a)] = 0
                adj[a].append(b)
                adj[b].append(a)
            cap[(a, b)] += c

        for j, e in enumerate(h.edges):
            ein, eout = n + 2 * j, n + 2 * j + 1
            arc(ein, eout, 1)
            for v in e:
                arc(v, ein, INF)
                arc(eout, v, INF)
        flow = 0
        while True:
            prev = {source: source}
            queue = [source]
            qi = 0
            while qi < len(queue) and sink not in prev:
                x = queue[qi]
                qi += 1
                for y in adj[x]:
                    if y not in prev and cap[(x, y)] > 0:
                        prev[y] = x
                        queue.append(y)
            if sink not in prev:
                side = {v for v in prev if v < n}
                return flow, side
            y = sink
            while y != source:
                x = prev[y]
                cap[(x, y)] -= 1
                cap[(y, x)] += 1
                y = x
            flow += 1

    best: tuple[int, set[int]] | None = None
    for t in range(1, n):
        value, side = solve(0, t)
        if best is None or value < best[0]:
            best = (value, side)
    side = frozenset(best[1])
    smask = 0
    for v in side:
        smask |= 1 << v
    cut = frozenset(
        j for j, bits in enumerate(h.edge_bits) if (bits & smask) and (bits & ~smask)
    )
    cut = minimalize_cut(h, cut)
    return EdgeCut(side, cut)


# ---------------------------------------------------------------------------
# the component multigraph and choice functions


def component_multigraph(h: Hypergraph, cut_edges, family: EulerFamily) -> Multigraph:
    """G(H, F, family): a node per component of H minus F, an edge per cut
    edge recording which components its two anchors lie in."""
    f = frozenset(cut_edges)
    try:
        minimal = is_minimal_cut(h, f)
    except NotACutError as exc:
        raise InvalidInputsError(str(exc)) from exc
    if not minimal:
        raise InvalidInputsError("cut is not minimal")
    reason = check_family(h, family)
    if reason is not None:
        raise InvalidInputsError(f"invalid family: {reason}")
    comps = components_after_deleting(h, f)
    comp_of = {}
    for i, (vs, _) in enumerate(comps):
        for v in vs:
            comp_of[v] = i
    traversal: dict[int, tuple[int, int]] = {}
    for t in family.trails:
        for i, j in enumerate(t.edges):
            if j in f:
                traversal[j] = (t.anchors[i], t.anchors[i + 1])
    pairs = []
    for j in sorted(f):
        a, b = traversal[j]
        pairs.append((comp_of[a], comp_of[b]))
    return Multigraph(len(comps), tuple(pairs))


def build_G_alpha(component_count: int, alpha: ChoiceFunction) -> Multigraph:
    return Multigraph(component_count, tuple(pair for _, pair in alpha.assignments))


@dataclass(frozen=True)
class TrimResult:
    hypergraph: Hypergraph
    unchanged: bool
    degenerate: tuple[int, ...]  # cut edges trimmed below cardinality 2


def trim_cut_edges(h: Hypergraph, cut_edges, alpha: ChoiceFunction) -> TrimResult:
    """Replace each cut edge f by f intersected with its two assigned
    components' vertices; edges elsewhere are untouched (ids are stable)."""
    f = frozenset(cut_edges)
    comps = components_after_deleting(h, f)
    new_edges = list(h.edges)
    unchanged = True
    degenerate = []
    for j in sorted(f):
        i1, i2 = alpha.get(j)
        allowed = comps[i1][0] | comps[i2][0]
        trimmed = tuple(v for v in h.edges[j] if v in allowed)
        if not trimmed:
            raise InvalidInputsError(
                f"edge {j} does not intersect its assigned components"
            )
        if len(trimmed) < 2:
            degenerate.append(j)
        if trimmed != h.edges[j]:
            unchanged = False
        new_edges[j] = trimmed
    return TrimResult(
        Hypergraph(h.vertex_labels, tuple(new_edges)), unchanged, tuple(degenerate)
    )


# ---------------------------------------------------------------------------
# assembling certificates across a cut


def assemble_family(
    h: Hypergraph,
    cut_edges,
    J,
    family_J: EulerFamily,
    families_rest: dict[int, EulerFamily],
) -> EulerFamily:
    """Union a nonempty family on the J-side (which traverses the cut) with
    per-component families elsewhere.  All certificates are in h coordinates:
    family_J traverses each cut edge via anchors inside the J components."""
    f = frozenset(cut_edges)
    comps = components_after_deleting(h, f)
    jset = frozenset(J)
    if not (1 <= len(jset) <= len(f)):
        raise InvalidPiecesError(f"need 1 <= |J| <= |F|, got |J|={len(jset)}")
    if len(family_J) == 0:
        raise InvalidPiecesError("family on the J side must be nonempty")
    j_vertices = frozenset().union(*(comps[i][0] for i in jset))
    j_edges = set(f)
    for i in jset:
        j_edges |= comps[i][1]
    covered = set(family_J.edge_ids())
    if covered != j_edges:
        raise InvalidPiecesError("J-side family must cover its components plus the cut")
    for t in family_J.trails:
        if not t.anchor_set() <= j_vertices:
            raise InvalidPiecesError("J-side family anchors leave the J components")
    trails = list(family_J.trails)
    for i, (vs, es) in enumerate(comps):
        if i in jset:
            continue
        fam = families_rest.get(i, EulerFamily(()))
        if set(fam.edge_ids()) != set(es):
            raise InvalidPiecesError(f"component {i} family does not cover its edges")
        for t in fam.trails:
            if not t.anchor_set() <= vs:
                raise InvalidPiecesError(f"component {i} family leaves the component")
        trails.extend(fam.trails)
    result = EulerFamily(tuple(trails))
    reason = check_family(h, result)
    if reason is not None:
        raise InvalidPiecesError(reason)
    return result


def _rotate_to(t: ClosedTrail, v: int) -> ClosedTrail:
    ring_a = list(t.anchors[:-1])
    ring_e = list(t.edges)
    p = ring_a.index(v)
    anchors = ring_a[p:] + ring_a[:p]
    edges = ring_e[p:] + ring_e[:p]
    return ClosedTrail(tuple(anchors + [anchors[0]]), tuple(edges))


def _reverse(t: ClosedTrail) -> ClosedTrail:
    anchors = tuple(reversed(t.anchors))
    edges = tuple(reversed(t.edges))
    return ClosedTrail(anchors, edges)


def splice_two_tours(
    c1: CollapsedHypergraph,
    t1: ClosedTrail,
    c2: CollapsedHypergraph,
    t2: ClosedTrail,
    f1: int,
    f2: int,
) -> ClosedTrail:
    """Join Euler tours of the two collapsed sides of a cardinality-2 cut.

    Each tour is cut open at its collapsed vertex (degree exactly 2 there)
    and the halves are rejoined through the original cut edges f1, f2."""
    middles = []
    for c, t, first in ((c1, t1, f1), (c2, t2, f2)):
        if len(c.collapsed_vertex_ids) != 1:
            raise InvalidInputsError("expected exactly one collapsed part")
        w = c.collapsed_vertex_ids[0]
        if w not in t.anchors:
            raise CollapsedVertexNotTraversedError(
                "tour does not traverse the collapsed vertex"
            )
        rot = _rotate_to(t, w)
        if c.edge_origins[rot.edges[0]] != first:
            rot = _rotate_to(_reverse(t), w)
        if c.edge_origins[rot.edges[0]] != first or c.edge_origins[rot.edges[-1]] == first:
            raise InvalidInputsError(
                "collapsed vertex is not flanked by the two cut edges"
            )
        anchors = tuple(c.origin_vertex(v) for v in rot.anchors[1:-1])
        edges = tuple(c.edge_origins[j] for j in rot.edges[1:-1])
        middles.append((anchors, edges))
    (a1, e1), (a2, e2) = middles
    anchors = a1 + a2 + (a1[0],)
    edges = e1 + (f2,) + e2 + (f1,)
    return ClosedTrail(anchors, edges)


def family_via_card2_cut(h: Hypergraph, cut_edges) -> EulerFamily | None:
    """Family solver across a minimal cut whose edges all have cardinality 2.

    Solves each side with the other collapsed to a point, then reassembles by
    re-inserting the cut edges as graph edges between the sides."""
    f = sorted(frozenset(cut_edges))
    if not f:
        raise BadCutError("cut must be nonempty")
    if any(len(h.edges[j]) != 2 for j in f):
        raise BadCutError("all cut edges must have cardinality 2")
    try:
        minimal = is_minimal_cut(h, f)
    except NotACutError as exc:
        raise BadCutError(str(exc)) from exc
    if not minimal:
        raise BadCutError("cut is not minimal")
    comps = components_after_deleting(h, f)
    if len(comps) != 2:
        raise BadCutError("a minimal all-cardinality-2 cut leaves exactly 2 components")
    flags: set[tuple[int, int]] = set()
    for i in (0, 1):
        c = collapse(h, [comps[1 - i][0]])
        fam = solve_family(c.base)
        if fam is None:
            return None
        sub = family_to_subgraph(c.base, fam)
        w = c.collapsed_vertex_ids[0]
        for v, j in sub.flags:
            if v == w:
                continue
            flags.add((c.origin_vertex(v), c.edge_origins[j]))
    sub = FamilySubgraph(h.order, h.size, frozenset(flags))
    assert sub.violation() is None, "cross-cut reassembly broke the parity subgraph"
    return subgraph_to_family(h, sub)


# ---------------------------------------------------------------------------
# the tour search


class _OutOfBudget(Exception):
    pass


class _Budget:
    def __init__(self, limit: int | None):
        self.limit = limit
        self.spent = 0

    def charge(self, k: int = 1) -> None:
        self.spent += k
        if self.limit is not None and self.spent > self.limit:
            raise _OutOfBudget

    def remaining(self) -> int | None:
        if self.limit is None:
            return None
        return max(self.limit - self.spent, 1)


def find_euler_tour(h: Hypergraph, budget: int | None = None) -> SearchResult:
    """Cut-reduction Euler tour search; exact absence unless the budget runs out."""
    if h.order < 2:
        raise InvalidInputsError("find_euler_tour expects at least two vertices")
    if not is_connected(h):
        raise DisconnectedError("find_euler_tour expects a connected hypergraph")
    b = _Budget(budget)
    try:
        res = _find(h, b, 0)
    except _OutOfBudget:
        return SearchResult(UNKNOWN, None, b.spent)
    if res.status == FOUND:
        trail = canonical_trail(res.trail)
        assert validate_tour(h, trail), "search produced an invalid tour"
        return SearchResult(FOUND, trail, b.spent)
    return SearchResult(res.status, None, b.spent)


def _brute(h: Hypergraph, b: _Budget) -> SearchResult:
    res = brute_force_tour(h, b.remaining())
    b.charge(res.nodes)
    if res.status == UNKNOWN:
        raise _OutOfBudget
    return res


def _find(h: Hypergraph, b: _Budget, depth: int) -> SearchResult:
    """Recursive body; the returned trail is in h's own coordinates."""
    b.charge()

    # delete degree-1 vertices: they can never anchor a closed strict trail
    ones = {v for v in range(h.order) if h.degree(v) == 1}
    if ones:
        shrunk = [tuple(v for v in e if v not in ones) for e in h.edges]
        if any(len(e) < 2 for e in shrunk):
            return SearchResult(NONE)
        keep = [v for v in range(h.order) if v not in ones]
        vmap = {i: v for i, v in enumerate(keep)}
        inv = {v: i for i, v in enumerate(keep)}
        h2 = Hypergraph(
            tuple(h.vertex_labels[v] for v in keep),
            tuple(tuple(inv[v] for v in e) for e in shrunk),
        )
        res = _find(h2, b, depth)
        if res.status != FOUND:
            return res
        t = res.trail
        return SearchResult(
            FOUND, ClosedTrail(tuple(vmap[v] for v in t.anchors), t.edges)
        )
    if any(len(e) < 2 for e in h.edges):
        return SearchResult(NONE)
    if h.size == 0:
        return SearchResult(FOUND, ClosedTrail((0,), ()))

    comps = connected_components(h)
    nonempty = [c for c in comps if c[1]]
    if len(nonempty) > 1:
        return SearchResult(NONE)
    if len(nonempty[0][0]) < h.order:
        vs, es = nonempty[0]
        sub, vmap, emap = strong_subhypergraph(h, vs, es)
        res = _find(sub, b, depth)
        if res.status != FOUND:
            return res
        t = res.trail
        return SearchResult(
            FOUND,
            ClosedTrail(
                tuple(vmap[v] for v in t.anchors), tuple(emap[j] for j in t.edges)
            ),
        )

    if depth > h.size:
        return _brute(h, b)

    cut = minimum_edge_cut(h)
    f_ids = sorted(cut.cut_edges)
    # canonical component order (by smallest vertex id) so that ChoiceFunction
    # indices here agree with trim_cut_edges
    comps = components_after_deleting(h, f_ids)
    nonempty_comps = [c for c in comps if c[1]]
    empty_comps = [c for c in comps if not c[1]]
    k = len(nonempty_comps)

    if k > len(f_ids):
        return SearchResult(NONE)

    if len(f_ids) == 2:
        if k == 2:
            return _collapsed_pair(h, f_ids, nonempty_comps, b, depth)
        if k == 1:
            return _one_component(h, f_ids, nonempty_comps[0], empty_comps[0], b, depth)
        # k == 0: H consists of the two cut edges; close them at two shared vertices
        shared = sorted(set(h.edges[f_ids[0]]) & set(h.edges[f_ids[1]]))
        a, c = shared[0], shared[1]
        return SearchResult(
            FOUND, ClosedTrail((a, c, a), (f_ids[0], f_ids[1]))
        )

    if len(comps) == 2:
        return _brute(h, b)
    return _large_cut(h, f_ids, comps, b, depth)


def _collapsed_pair(h, f_ids, comps, b, depth) -> SearchResult:
    """|F| = 2 with two nonempty sides: solve each side with the rest of the
    hypergraph collapsed to a point, forcing the traversal anchors of one cut
    edge, then splice the two tours."""
    all_vs = frozenset(range(h.order))
    pieces = []
    for i in (0, 1):
        other = all_vs - comps[i][0]
        c = collapse(h, [other])
        w = c.collapsed_vertex_ids[0]
        found = None
        for j in sorted(c.base.vertex_edges[w]):
            for v in c.base.edges[j]:
                if v == w:
                    continue
                new_edges = list(c.base.edges)
                new_edges[j] = (v, w) if v < w else (w, v)
                cand = Hypergraph(c.base.vertex_labels, tuple(new_edges))
                res = _find(cand, b, depth + 1)
                if res.status == FOUND:
                    found = res.trail  # valid in c.base too: {v,w} is inside edge j
                    break
            if found is not None:
                break
        if found is None:
            return SearchResult(NONE)
        pieces.append((c, found))
    (c1, t1), (c2, t2) = pieces
    trail = splice_two_tours(c1, t1, c2, t2, f_ids[0], f_ids[1])
    return SearchResult(FOUND, trail)


def _one_component(h, f_ids, comp1, comp2, b, depth) -> SearchResult:
    """|F| = 2 with one nonempty side: either circumvent the empty side
    entirely, or pin both cut edges through its vertex and brute force."""
    f1, f2 = f_ids
    v1set = comp1[0]
    f1p = tuple(v for v in h.edges[f1] if v in v1set)
    f2p = tuple(v for v in h.edges[f2] if v in v1set)
    if len(f1p) >= 2 and len(f2p) >= 2:
        hin, vmap, emap = induced_hypergraph(h, v1set)
        res = _find(hin, b, depth + 1)
        if res.status == FOUND:
            t = res.trail
            return SearchResult(
                FOUND,
                ClosedTrail(
                    tuple(vmap[v] for v in t.anchors), tuple(emap[j] for j in t.edges)
                ),
            )
    for w in sorted(comp2[0]):
        for a in f1p:
            for c in f2p:
                new_edges = list(h.edges)
                new_edges[f1] = tuple(sorted((a, w)))
                new_edges[f2] = tuple(sorted((c, w)))
                cand = Hypergraph(h.vertex_labels, tuple(new_edges))
                res = _brute(cand, b)
                if res.status == FOUND:
                    return SearchResult(FOUND, res.trail)
    return SearchResult(NONE)


def _large_cut(h, f_ids, comps, b, depth) -> SearchResult:
    """|F| >= 3 over more than two components: enumerate choice functions,
    pruned by the parity needed for an even single-component multigraph."""
    ncomp = len(comps)
    nonempty_idx = [i for i, (_, es) in enumerate(comps) if es]
    pair_options = []
    for j in f_ids:
        bits = h.edge_bits[j]
        opts = []
        for i1 in range(ncomp):
            icount = sum(1 for v in comps[i1][0] if (bits >> v) & 1)
            if icount == 0:
                raise InvalidInputsError("cut is not minimal")
            if icount >= 2:
                opts.append((i1, i1))
            for i2 in range(i1 + 1, ncomp):
                if any((bits >> v) & 1 for v in comps[i2][0]):
                    opts.append((i1, i2))
        pair_options.append(opts)

    deg = [0] * ncomp
    chosen: list[tuple[int, int]] = []
    seen_trims: set[tuple] = set()

    def needed_slots() -> int:
        need = 0
        for i in nonempty_idx:
            if deg[i] < 2:
                need += 2 - deg[i]
            elif deg[i] % 2:
                need += 1
        for i in range(ncomp):
            if i not in nonempty_idx and deg[i] % 2:
                need += 1
        return need

    def enumerate_alpha(pos: int):
        b.charge()
        if pos == len(f_ids):
            yield ChoiceFunction(tuple(zip(f_ids, chosen)))
            return
        remaining = len(f_ids) - pos
        if needed_slots() > 2 * remaining:
            return
        for pair in pair_options[pos]:
            i1, i2 = pair
            deg[i1] += 1
            deg[i2] += 1
            chosen.append(pair)
            yield from enumerate_alpha(pos + 1)
            chosen.pop()
            deg[i1] -= 1
            deg[i2] -= 1

    for alpha in enumerate_alpha(0):
        g = build_G_alpha(ncomp, alpha)
        if not g.is_even() or not g.has_single_nonempty_component():
            continue
        trim = trim_cut_edges(h, f_ids, alpha)
        if trim.unchanged:
            return _brute(h, b)
        if trim.degenerate:
            continue
        key = tuple(trim.hypergraph.edges[j] for j in f_ids)
        if key in seen_trims:
            continue
        seen_trims.add(key)
        if not is_connected(trim.hypergraph):
            continue
        res = _find(trim.hypergraph, b, depth + 1)
        if res.status == FOUND:
            return res  # trimmed edges sit inside the originals; ids match
    return SearchResult(NONE)
