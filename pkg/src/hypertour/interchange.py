"""Interchanging cycles on the incidence graph and family minimization.

An interchanging cycle meets each of its e-nodes in exactly one kept
incidence; taking the symmetric difference with the family subgraph yields
another family subgraph.  A diminishing cycle lowers the number of
nontrivial components, i.e. merges trails.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import (
    DiminishingSearchError,
    InvalidInputsError,
    NotACycleError,
    NotCovering3Error,
    NotCoveringError,
    NotInterchangingError,
    NotQuasiEulerianError,
    TooFewEdgesError,
)
from .euler import (
    ClosedTrail,
    EulerFamily,
    FamilySubgraph,
    family_to_subgraph,
    solve_family,
    subgraph_to_family,
)
from .hcore import Hypergraph, delete_vertices

_SEARCH_STEPS = 500_000
_RESTART_SEEDS = 64


@dataclass(frozen=True)
class InterchangeCycle:
    """Closed alternating v-node/e-node sequence (v0, e1, v1, ..., e_k)."""

    nodes: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))

    @property
    def edge_count(self) -> int:
        return len(self.nodes) // 2

    def vertices(self) -> tuple[int, ...]:
        return self.nodes[0::2]

    def edge_ids(self) -> tuple[int, ...]:
        return self.nodes[1::2]

    def flags(self) -> list[tuple[int, int]]:
        k = self.edge_count
        out = []
        for i in range(k):
            e = self.nodes[2 * i + 1]
            out.append((self.nodes[2 * i], e))
            out.append((self.nodes[(2 * i + 2) % (2 * k)], e))
        return out


def cycle_violation(h: Hypergraph, cyc: InterchangeCycle) -> str | None:
    nodes = cyc.nodes
    if len(nodes) < 4 or len(nodes) % 2:
        return "cycle must alternate v/e nodes with at least two edges"
    vs, es = cyc.vertices(), cyc.edge_ids()
    if len(set(vs)) != len(vs):
        return "v-nodes repeat"
    if len(set(es)) != len(es):
        return "e-nodes repeat"
    if any(v < 0 or v >= h.order for v in vs):
        return "v-node out of range"
    if any(e < 0 or e >= h.size for e in es):
        return "e-node out of range"
    for v, e in cyc.flags():
        if not (h.edge_bits[e] >> v) & 1:
            return f"vertex {v} not incident with edge {e}"
    return None


def is_interchanging(h: Hypergraph, sub: FamilySubgraph, cyc: InterchangeCycle) -> bool:
    """Every e-node of the cycle meets exactly one of its two cycle edges in sub."""
    reason = cycle_violation(h, cyc)
    if reason is not None:
        raise NotACycleError(reason)
    flags = cyc.flags()
    for i in range(cyc.edge_count):
        a, b = flags[2 * i], flags[2 * i + 1]
        if (a in sub.flags) + (b in sub.flags) != 1:
            return False
    return True


def apply_interchange(h: Hypergraph, sub: FamilySubgraph, cyc: InterchangeCycle) -> FamilySubgraph:
    """Symmetric difference with the cycle's incidences; stays a family subgraph."""
    if not is_interchanging(h, sub, cyc):
        raise NotInterchangingError("cycle is not interchanging for this subgraph")
    out = FamilySubgraph(
        sub.v_count, sub.e_count, sub.flags ^ frozenset(cyc.flags())
    )
    assert out.violation() is None, "interchange broke the family subgraph"
    return out


def is_ell_covering(h: Hypergraph, ell: int) -> bool:
    """Every ell-subset of vertices lies in some edge (and h is nonempty)."""
    if h.size == 0:
        return False
    for combo in itertools.combinations(range(h.order), ell):
        if not any(all((bits >> v) & 1 for v in combo) for bits in h.edge_bits):
            return False
    return True


def _is_covering3(h: Hypergraph) -> bool:
    return h.uniform_cardinality() == 3 and is_ell_covering(h, 2)


def _subgraph_components(sub: FamilySubgraph):
    """Nontrivial components plus isolated v-nodes, ordered by lowest v-node."""
    nontrivial = sub.nontrivial_components()
    covered = set()
    for vs, _ in nontrivial:
        covered |= vs
    isolated = [v for v in range(sub.v_count) if v not in covered]
    comps: list[tuple[frozenset[int], frozenset[int]]] = list(nontrivial)
    comps.extend((frozenset([v]), frozenset()) for v in isolated)
    comps.sort(key=lambda c: min(c[0]))
    return comps


def _noncut_vnode(sub: FamilySubgraph, comp_vs: frozenset[int], comp_es: frozenset[int]) -> int:
    """Lowest v-node whose removal keeps the component's flag graph connected."""
    if not comp_es:
        return min(comp_vs)
    nodes = set(comp_vs) | {sub.v_count + j for j in comp_es}
    adj: dict[int, list[int]] = {x: [] for x in nodes}
    for v, j in sub.flags:
        if v in comp_vs:
            adj[v].append(sub.v_count + j)
            adj[sub.v_count + j].append(v)
    for cand in sorted(comp_vs):
        rest = nodes - {cand}
        start = next(iter(rest))
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y != cand and y not in seen:
                    seen.add(y)
                    stack.append(y)
        if seen == rest:
            return cand
    raise AssertionError("even component without a non-cut v-node")


def _multi_component_cycle(h: Hypergraph, sub: FamilySubgraph) -> InterchangeCycle:
    """Covering-3 construction: one non-cut v-node per component, consecutive
    picks linked by covering edges.  Guaranteed diminishing for >= 3 components."""
    comps = _subgraph_components(sub)
    picks = [_noncut_vnode(sub, vs, es) for vs, es in comps]
    k = len(picks)
    nodes: list[int] = []
    used_edges = set()
    for i in range(k):
        a, b = picks[i], picks[(i + 1) % k]
        eid = None
        for j, bits in enumerate(h.edge_bits):
            if j not in used_edges and (bits >> a) & 1 and (bits >> b) & 1:
                eid = j
                break
        if eid is None:
            raise AssertionError("covering 3-hypergraph is missing a pair edge")
        used_edges.add(eid)
        nodes.append(a)
        nodes.append(eid)
    return InterchangeCycle(tuple(nodes))


def _nontrivial_count(sub: FamilySubgraph) -> int:
    return len(sub.nontrivial_components())


def _generic_search(
    h: Hypergraph, sub: FamilySubgraph, steps: int = _SEARCH_STEPS
) -> InterchangeCycle | None:
    """Bounded DFS over interchanging cycles, returning the first diminishing
    one.  Cycles are rooted at their minimum v-node to avoid duplicates."""
    target = _nontrivial_count(sub)
    budget = steps
    vadj = [h.vertex_edges[v] for v in range(h.order)]

    def diminishing(cyc: InterchangeCycle) -> bool:
        new = FamilySubgraph(sub.v_count, sub.e_count, sub.flags ^ frozenset(cyc.flags()))
        if new.violation() is not None:
            return False
        return _nontrivial_count(new) < target

    for root in range(h.order):
        # path alternates v-nodes and e-nodes starting and ending at root
        stack: list[tuple[int, list[int], set[int], set[int]]] = [(root, [root], set(), {root})]
        while stack:
            budget -= 1
            if budget <= 0:
                return None
            v, path, used_e, used_v = stack.pop()
            for j in reversed(vadj[v]):
                if j in used_e:
                    continue
                vflag = (v, j) in sub.flags
                for w in reversed(h.edges[j]):
                    if w == v:
                        continue
                    wflag = (w, j) in sub.flags
                    if vflag == wflag:
                        continue  # the e-node needs exactly one kept incidence
                    if w == root and len(path) >= 3:
                        cyc = InterchangeCycle(tuple(path + [j]))
                        if is_interchanging(h, sub, cyc) and diminishing(cyc):
                            return cyc
                        continue
                    if w in used_v or w < root:
                        continue
                    stack.append((w, path + [j, w], used_e | {j}, used_v | {w}))
    return None


def find_diminishing_cycle(h: Hypergraph, sub: FamilySubgraph) -> InterchangeCycle | None:
    """A cycle whose interchange merges trails of a covering 3-hypergraph.

    With three or more components the covering construction is guaranteed;
    with exactly two the bounded search may fail (None), in which case the
    caller restarts from a different family.
    """
    if not _is_covering3(h):
        raise NotCovering3Error("expected a covering 3-hypergraph")
    if _nontrivial_count(sub) < 2:
        raise InvalidInputsError("need at least two nontrivial components")
    if len(_subgraph_components(sub)) >= 3:
        return _multi_component_cycle(h, sub)
    return _generic_search(h, sub)


def _minimize_subgraph(
    h: Hypergraph, sub: FamilySubgraph, covering3: bool
) -> FamilySubgraph:
    """Apply diminishing interchanges until a single nontrivial component or stall."""
    while _nontrivial_count(sub) >= 2:
        if covering3 and len(_subgraph_components(sub)) >= 3:
            cyc = _multi_component_cycle(h, sub)
        else:
            cyc = _generic_search(h, sub)
        if cyc is None:
            break
        nxt = apply_interchange(h, sub, cyc)
        assert _nontrivial_count(nxt) < _nontrivial_count(sub)
        sub = nxt
    return sub


def minimize_family(h: Hypergraph, restarts: int = _RESTART_SEEDS) -> EulerFamily:
    """Shrink an Euler family by interchanges; a tour for covering 3-hypergraphs.

    Stalled two-component searches restart from a family found under a
    perturbed matching tie-break.  For covering 3-hypergraphs with at least
    two edges a stall across every restart is a bug signal, reported as
    DiminishingSearchError rather than returning a non-tour silently.
    """
    fam = solve_family(h)
    if fam is None:
        raise NotQuasiEulerianError("hypergraph has no Euler family")
    if len(fam) == 0:
        return fam
    covering3 = _is_covering3(h)
    best: FamilySubgraph | None = None
    for seed in range(restarts if covering3 else 1):
        if seed > 0:
            fam = solve_family(h, seed=seed)
        sub = _minimize_subgraph(h, family_to_subgraph(h, fam), covering3)
        if best is None or _nontrivial_count(sub) < _nontrivial_count(best):
            best = sub
        if _nontrivial_count(best) <= 1:
            return subgraph_to_family(h, best)
    if covering3 and h.size >= 2:
        raise DiminishingSearchError(
            "diminishing-cycle search stalled on a covering 3-hypergraph"
        )
    return subgraph_to_family(h, best)


def covering_tour(h: Hypergraph) -> ClosedTrail:
    """Euler tour of a covering k-hypergraph (k >= 3, at least two edges).

    For k = 3 this is interchange minimization; for larger k, delete the
    lowest vertex, shrink the edges avoiding it by their lowest vertex,
    recurse on the resulting covering (k-1)-hypergraph, and lift."""
    k = h.uniform_cardinality()
    if k is None or k < 3:
        raise NotCoveringError("expected a k-uniform hypergraph with k >= 3")
    if not is_ell_covering(h, k - 1):
        raise NotCoveringError(f"not a covering {k}-hypergraph")
    if h.size < 2:
        raise TooFewEdgesError("a single-edge hypergraph is not eulerian")
    if k == 3:
        fam = minimize_family(h)
        assert len(fam) == 1
        return fam.trails[0]
    v = 0
    shrunk = []
    for e in h.edges:
        if v in e:
            shrunk.append(tuple(x for x in e if x != v))
        else:
            shrunk.append(tuple(x for x in e if x != min(e)))
    inner = Hypergraph(
        tuple(h.vertex_labels[x] for x in range(1, h.order)),
        tuple(tuple(x - 1 for x in e) for e in shrunk),
    )
    t = covering_tour(inner)
    lifted = ClosedTrail(tuple(a + 1 for a in t.anchors), t.edges)
    return lifted
