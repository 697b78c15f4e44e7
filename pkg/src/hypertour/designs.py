"""Design-hypergraph generators and constructive tours for Steiner systems.

The large-order Steiner tour follows the labeled 2-section: fix a base
vertex, extend its label class (a perfect matching) to a Hamilton cycle,
cycle-exchange until no other label dominates, lift the cycle into the
hypergraph, and concatenate with an Euler family of the remainder.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .errors import (
    BadIndicesError,
    BadOrderError,
    BadParamsError,
    DiminishingSearchError,
    InadmissibleError,
    LabelClashError,
    NotCubicSimpleError,
    NotSTSError,
)
from .euler import ClosedTrail, EulerFamily, canonical_trail, solve_family, validate_tour
from .hcore import Hypergraph, Multigraph, build_hypergraph, dual
from .interchange import minimize_family

_STS7_TRIPLES = ["123", "145", "167", "247", "256", "346", "357"]
_STS9_TRIPLES = [
    "123", "456", "789", "147", "258", "369",
    "159", "267", "348", "168", "249", "357",
]


def sts_fixture(n: int) -> Hypergraph:
    """The explicit STS(7)/STS(9) edge lists."""
    if n == 7:
        triples = _STS7_TRIPLES
    elif n == 9:
        triples = _STS9_TRIPLES
    else:
        raise BadOrderError("fixtures exist only for orders 7 and 9")
    labels = [str(i) for i in range(1, n + 1)]
    return build_hypergraph(labels, [list(t) for t in triples])


def gen_sts(n: int) -> Hypergraph:
    """Steiner triple system of order n (n = 1 or 3 mod 6).

    Bose construction for n = 6t+3, Skolem construction for n = 6t+1; both
    hang triples off a (half-)idempotent commutative quasigroup on Z_q.
    """
    if n < 3 or n % 6 not in (1, 3):
        raise BadOrderError(f"no Steiner triple system of order {n}")
    triples: list[tuple[int, int, int]] = []
    if n % 6 == 3:
        t = (n - 3) // 6
        q = 2 * t + 1

        def mul(i, j):
            return ((i + j) * (t + 1)) % q

        def idx(i, k):
            return 3 * i + k

        for i in range(q):
            triples.append((idx(i, 0), idx(i, 1), idx(i, 2)))
        for i in range(q):
            for j in range(i + 1, q):
                for k in range(3):
                    triples.append((idx(i, k), idx(j, k), idx(mul(i, j), (k + 1) % 3)))
    else:
        t = (n - 1) // 6
        q = 2 * t
        inf = 3 * q

        def half(x):
            # bijection sending 2x -> x, 2x+1 -> t+x: half-idempotent quasigroup
            return x // 2 if x % 2 == 0 else t + x // 2

        def mul(i, j):
            return half((i + j) % q)

        def idx(i, k):
            return 3 * i + k

        for i in range(t):
            triples.append((idx(i, 0), idx(i, 1), idx(i, 2)))
        for i in range(t, q):
            for k in range(3):
                triples.append((inf, idx(i, k), idx(i - t, (k + 1) % 3)))
        for i in range(q):
            for j in range(i + 1, q):
                for k in range(3):
                    triples.append((idx(i, k), idx(j, k), idx(mul(i, j), (k + 1) % 3)))
    labels = tuple(str(i) for i in range(1, n + 1))
    return Hypergraph(labels, tuple(tuple(sorted(tr)) for tr in triples))


def is_sts(h: Hypergraph) -> bool:
    if h.uniform_cardinality() != 3:
        return False
    return _pair_multiplicities_all(h, 1)


def _pair_multiplicities_all(h: Hypergraph, lam: int) -> bool:
    count: dict[tuple[int, int], int] = {}
    for e in h.edges:
        for p in itertools.combinations(e, 2):
            count[p] = count.get(p, 0) + 1
    for p in itertools.combinations(range(h.order), 2):
        if count.get(p, 0) != lam:
            return False
    return True


def gen_ts(n: int, lam: int) -> Hypergraph:
    """Triple system TS(n, lam): every pair in exactly lam edges.

    Built by lam-fold replication of an STS when one exists; otherwise by
    replicating the complete 3-uniform hypergraph (pair multiplicity n-2)
    when n-2 divides lam.  Admissible parameter sets outside those
    constructions are reported as inadmissible.
    """
    if n < 3 or lam < 1:
        raise InadmissibleError("need n >= 3 and lam >= 1")
    if (lam * (n - 1)) % 2 or (lam * n * (n - 1)) % 6:
        raise InadmissibleError(f"TS({n},{lam}) parameters are inadmissible")
    if n % 6 in (1, 3):
        base = gen_sts(n)
        edges = tuple(e for _ in range(lam) for e in base.edges)
        return Hypergraph(base.vertex_labels, edges)
    if lam % (n - 2) == 0:
        reps = lam // (n - 2)
        labels = tuple(str(i) for i in range(1, n + 1))
        full = tuple(itertools.combinations(range(n), 3))
        return Hypergraph(labels, full * reps)
    raise InadmissibleError(f"no construction available for TS({n},{lam})")


def gen_covering(n: int, k: int, ell: int, thin: bool = False, seed: int = 0) -> Hypergraph:
    """An ell-covering k-hypergraph on n vertices: the complete k-uniform
    hypergraph, optionally thinned while every ell-subset stays covered."""
    if not (n >= k > ell >= 2):
        raise BadParamsError(f"need n >= k > ell >= 2, got ({n},{k},{ell})")
    labels = tuple(str(i) for i in range(1, n + 1))
    edges = list(itertools.combinations(range(n), k))
    if thin:
        rng = random.Random(seed)
        cover: dict[tuple[int, ...], int] = {}
        for e in edges:
            for c in itertools.combinations(e, ell):
                cover[c] = cover.get(c, 0) + 1
        order = list(range(len(edges)))
        rng.shuffle(order)
        removed = set()
        for j in order:
            subs = list(itertools.combinations(edges[j], ell))
            if all(cover[c] >= 2 for c in subs):
                removed.add(j)
                for c in subs:
                    cover[c] -= 1
        edges = [e for j, e in enumerate(edges) if j not in removed]
    return Hypergraph(labels, tuple(edges))


# ---------------------------------------------------------------------------
# labeled 2-section machinery


@dataclass(frozen=True)
class LabeledTwoSection:
    """Complete 2-section of an STS with the edge-corresponding function.

    ``phi[i]`` is the hyperedge behind graph edge i; ``labels[i]`` is its
    third vertex, so phi(uv) = {u, v, label(uv)}.
    """

    graph: Multigraph
    phi: tuple[int, ...]
    labels: tuple[int, ...]

    def edge_index(self, u: int, v: int) -> int:
        n = self.graph.node_count
        a, b = (u, v) if u < v else (v, u)
        # lexicographic pair rank in the complete graph
        return a * (2 * n - a - 1) // 2 + (b - a - 1)

    def label_of(self, u: int, v: int) -> int:
        return self.labels[self.edge_index(u, v)]

    def phi_of(self, u: int, v: int) -> int:
        return self.phi[self.edge_index(u, v)]


def labeled_two_section(h: Hypergraph) -> LabeledTwoSection:
    if not is_sts(h):
        raise NotSTSError("labeled 2-section requires a Steiner triple system")
    n = h.order
    third: dict[tuple[int, int], tuple[int, int]] = {}
    for j, e in enumerate(h.edges):
        for u, v in itertools.combinations(e, 2):
            (w,) = [x for x in e if x != u and x != v]
            third[(u, v)] = (j, w)
    pairs = list(itertools.combinations(range(n), 2))
    phi = tuple(third[p][0] for p in pairs)
    labels = tuple(third[p][1] for p in pairs)
    return LabeledTwoSection(Multigraph(n, tuple(pairs)), phi, labels)


def cycle_exchange(cycle: tuple[int, ...], i: int, j: int) -> tuple[int, ...]:
    """Swap cycle edges (v_i, v_i+1) and (v_j, v_j+1) for (v_i, v_j) and
    (v_i+1, v_j+1), reversing the enclosed arc."""
    k = len(cycle)
    if not (0 <= i < j < k):
        raise BadIndicesError("need 0 <= i < j < cycle length")
    if j - i < 2 or j - i > k - 2:
        raise BadIndicesError("exchanged edges must not be adjacent")
    return cycle[: i + 1] + tuple(reversed(cycle[i + 1 : j + 1])) + cycle[j + 1 :]


def lift_cycle(lts: LabeledTwoSection, cycle: tuple[int, ...]) -> ClosedTrail:
    """Lift a graph cycle through phi into a hypergraph cycle.

    Fails with the clash position when two consecutive graph edges map to the
    same triple, i.e. when (label(v_prev v), label(v v_next)) = (v_next, v_prev).
    """
    k = len(cycle)
    if k < 3:
        raise BadIndicesError("cycle must have at least three vertices")
    for i in range(k):
        prv, cur, nxt = cycle[i - 1], cycle[i], cycle[(i + 1) % k]
        if lts.label_of(prv, cur) == nxt and lts.label_of(cur, nxt) == prv:
            raise LabelClashError(i)
    edges = tuple(lts.phi_of(cycle[i], cycle[(i + 1) % k]) for i in range(k))
    assert len(set(edges)) == k, "non-consecutive edges cannot repeat in a triple system"
    return ClosedTrail(tuple(cycle) + (cycle[0],), edges)


# ---------------------------------------------------------------------------
# the Steiner tour pipeline


@dataclass(frozen=True)
class StsTourReport:
    trail: ClosedTrail
    max_label_count: int  # M_C of the lifted Hamilton cycle
    bound: int  # (n - 9) / 2
    restarts: int


def _hamilton_from_matching(matching: list[tuple[int, int]]) -> list[int]:
    cycle: list[int] = []
    for a, b in matching:
        cycle.extend((a, b))
    return cycle


def _label_counts(lts: LabeledTwoSection, cycle: list[int], u0: int) -> dict[int, int]:
    counts: dict[int, int] = {}
    k = len(cycle)
    for i in range(k):
        lab = lts.label_of(cycle[i], cycle[(i + 1) % k])
        if lab != u0:
            counts[lab] = counts.get(lab, 0) + 1
    return counts


def sts_tour_report(h: Hypergraph, base_vertex: int = 0, seed: int = 0) -> StsTourReport:
    """Euler tour of an STS(n), n >= 13, with local-search diagnostics."""
    if not is_sts(h):
        raise NotSTSError("expected a Steiner triple system")
    n = h.order
    if n < 13:
        fam = minimize_family(h)
        assert len(fam) == 1
        return StsTourReport(fam.trails[0], 0, 0, 0)
    lts = labeled_two_section(h)
    u0 = base_vertex
    bound = (n - 9) // 2
    matching = sorted(
        (tuple(sorted((u, v))))
        for u, v in itertools.combinations(range(n), 2)
        if u != u0 and v != u0 and lts.label_of(u, v) == u0
    )
    rng = random.Random(seed)
    max_restarts = 40
    for restart in range(max_restarts):
        pairs = [list(p) for p in matching]
        if restart:
            rng.shuffle(pairs)
            for p in pairs:
                if rng.random() < 0.5:
                    p.reverse()
        cycle = _hamilton_from_matching([tuple(p) for p in pairs])
        counts = _label_counts(lts, cycle, u0)
        best_m = max(counts.values(), default=0)
        for _ in range(10 * n):
            if best_m <= bound:
                break
            move = _best_exchange(lts, cycle, counts, u0)
            if move is None:
                break
            cycle, counts = move
            best_m = max(counts.values(), default=0)
        if best_m > bound:
            continue
        trail = lift_cycle(lts, tuple(cycle))
        assert trail.length == n - 1 and u0 not in trail.anchors
        tour = _attach_remainder(h, trail, u0)
        return StsTourReport(canonical_trail(tour), best_m, bound, restart)
    raise DiminishingSearchError("label local search failed to reach its bound")


def sts_tour(h: Hypergraph, base_vertex: int = 0, seed: int = 0) -> ClosedTrail:
    return sts_tour_report(h, base_vertex, seed).trail


def _best_exchange(lts, cycle, counts, u0):
    """Best-improving exchange of two non-matching cycle edges, or None."""
    k = len(cycle)
    m_now = max(counts.values(), default=0)
    nonmatch = [
        i for i in range(k) if lts.label_of(cycle[i], cycle[(i + 1) % k]) != u0
    ]
    best = None
    for ai in range(len(nonmatch)):
        for bi in range(ai + 1, len(nonmatch)):
            i, j = nonmatch[ai], nonmatch[bi]
            if j - i < 2 or j - i > k - 2:
                continue
            out1 = lts.label_of(cycle[i], cycle[(i + 1) % k])
            out2 = lts.label_of(cycle[j], cycle[(j + 1) % k])
            in1 = lts.label_of(cycle[i], cycle[j])
            in2 = lts.label_of(cycle[(i + 1) % k], cycle[(j + 1) % k])
            if u0 in (in1, in2):
                continue  # would break the matching alternation
            delta: dict[int, int] = {}
            for lab, d in ((out1, -1), (out2, -1), (in1, 1), (in2, 1)):
                delta[lab] = delta.get(lab, 0) + d
            new_m = 0
            for lab in set(counts) | set(delta):
                new_m = max(new_m, counts.get(lab, 0) + delta.get(lab, 0))
            if new_m < m_now and (best is None or new_m < best[0]):
                best = (new_m, i, j)
    if best is None:
        return None
    _, i, j = best
    new_cycle = list(cycle_exchange(tuple(cycle), i, j))
    return new_cycle, _label_counts(lts, new_cycle, u0)


def _attach_remainder(h: Hypergraph, c_h: ClosedTrail, u0: int) -> ClosedTrail:
    """Solve (H minus the lifted cycle) - u0 for a family and concatenate."""
    used = set(c_h.edges)
    rem_ids = [j for j in range(h.size) if j not in used]
    assert all(u0 not in h.edges[j] for j in rem_ids)
    keep_vs = [v for v in range(h.order) if v != u0]
    inv = {v: i for i, v in enumerate(keep_vs)}
    inner = Hypergraph(
        tuple(h.vertex_labels[v] for v in keep_vs),
        tuple(tuple(inv[v] for v in h.edges[j]) for j in rem_ids),
    )
    fam = solve_family(inner)
    assert fam is not None, "remainder of the lifted cycle must be quasi-eulerian"
    trails = [
        ClosedTrail(
            tuple(keep_vs[a] for a in t.anchors),
            tuple(rem_ids[j] for j in t.edges),
        )
        for t in fam.trails
    ]
    tour = c_h
    for t in sorted(trails, key=lambda t: min(t.anchor_set())):
        common = [i for i, a in enumerate(tour.anchors[:-1]) if a in t.anchor_set()]
        assert common, "remainder trail shares no anchor with the cycle"
        i = common[0]
        rot_a = list(t.anchors[:-1])
        rot_e = list(t.edges)
        p = rot_a.index(tour.anchors[i])
        rot_a = rot_a[p:] + rot_a[:p]
        rot_e = rot_e[p:] + rot_e[:p]
        anchors = tour.anchors[: i + 1] + tuple(rot_a[1:]) + (rot_a[0],) + tour.anchors[i + 1 :]
        edges = tour.edges[:i] + tuple(rot_e) + tour.edges[i:]
        tour = ClosedTrail(anchors, edges)
    assert validate_tour(h, tour)
    return tour


# ---------------------------------------------------------------------------
# cubic graphs and the duality harness


def cubic_graph(name: str) -> Multigraph:
    """Named simple cubic graphs: k4, prism, petersen."""
    if name == "k4":
        return Multigraph(4, tuple(itertools.combinations(range(4), 2)))
    if name == "prism":
        edges = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)]
        return Multigraph(6, tuple(edges))
    if name == "petersen":
        edges = []
        for i in range(5):
            edges.append((i, (i + 1) % 5))
        for i in range(5):
            edges.append((5 + i, 5 + (i + 2) % 5))
        for i in range(5):
            edges.append((i, 5 + i))
        return Multigraph(10, tuple(edges))
    raise BadParamsError(f"unknown cubic graph {name!r}")


def random_cubic(n: int, seed: int = 0) -> Multigraph:
    """Random simple 3-regular graph by the pairing model with rejection."""
    if n < 4 or n % 2:
        raise BadParamsError("a cubic graph needs an even order >= 4")
    rng = random.Random(seed)
    while True:
        stubs = [v for v in range(n) for _ in range(3)]
        rng.shuffle(stubs)
        edges = []
        ok = True
        seen = set()
        for i in range(0, len(stubs), 2):
            u, v = stubs[i], stubs[i + 1]
            if u == v or (min(u, v), max(u, v)) in seen:
                ok = False
                break
            seen.add((min(u, v), max(u, v)))
            edges.append((u, v))
        if ok:
            return Multigraph(n, tuple(edges))


class DualHarness:
    """Dual of a simple cubic graph with Hamilton/Euler certificate converters."""

    def __init__(self, graph: Multigraph):
        if any(u == v for u, v in graph.edges):
            raise NotCubicSimpleError("graph has a loop")
        if len(set(graph.edges)) != len(graph.edges):
            raise NotCubicSimpleError("graph has parallel edges")
        if any(d != 3 for d in graph.degrees()):
            raise NotCubicSimpleError("graph is not 3-regular")
        self.graph = graph
        primal = Hypergraph(
            tuple(str(v) for v in range(graph.node_count)), graph.edges
        )
        self.hypergraph = dual(primal)
        self._edge_id = {}
        for i, (u, v) in enumerate(graph.edges):
            self._edge_id[(u, v)] = i
            self._edge_id[(v, u)] = i

    def hamilton_to_tour(self, cycle: tuple[int, ...]) -> ClosedTrail:
        """Hamilton cycle v0..v_{n-1} of the graph -> Euler tour of the dual."""
        n = len(cycle)
        eids = [self._edge_id[(cycle[i], cycle[(i + 1) % n])] for i in range(n)]
        anchors = tuple(eids) + (eids[0],)
        edges = tuple(cycle[(i + 1) % n] for i in range(n))
        return ClosedTrail(anchors, edges)

    def tour_to_hamilton(self, trail: ClosedTrail) -> tuple[int, ...]:
        """Euler tour of the dual -> Hamilton cycle of the graph."""
        return tuple(trail.edges)


def dual_harness(graph: Multigraph) -> DualHarness:
    return DualHarness(graph)
