"""Hot search kernels, JIT-compiled with numba unless disabled.

Set ``HYPERTOUR_NUMBA=0`` to select the interpreted fallback: the same
functions run as plain Python over numpy arrays.  ``benchmarks/bench_kernels.py``
compares both paths.
"""
from __future__ import annotations

import os

import numpy as np


def _want_jit() -> bool:
    env = os.environ.get("HYPERTOUR_NUMBA", "").strip().lower()
    if env in {"0", "false", "off", "no"}:
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


JIT_ENABLED = _want_jit()

if JIT_ENABLED:
    from numba import njit as _njit

    def _maybe_jit(func):
        return _njit(cache=True)(func)
else:
    def _maybe_jit(func):
        return func


# Tour search outcome codes shared with the wrappers.
TOUR_NONE = 0
TOUR_FOUND = 1
TOUR_UNKNOWN = 2


def _tour_search_impl(edge_off, edge_vs, vert_off, vert_es, m, budget):
    """Exhaustive backtracking for a closed strict trail covering all m edges.

    Seeds at edge 0, trying its ordered anchor pairs in index order; extends
    from the lowest-id unused edge at the current anchor, next anchors in
    index order.  A node is one placed partial-trail state; exceeding the
    budget aborts with TOUR_UNKNOWN.
    """
    anchors = np.full(m + 1, -1, dtype=np.int64)
    eseq = np.full(m, -1, dtype=np.int64)
    # iterator state per depth: position in the anchor's edge list, and
    # position within the candidate edge's vertex list
    it_pos = np.zeros(m + 1, dtype=np.int64)
    it_wi = np.zeros(m + 1, dtype=np.int64)
    nodes = 0
    k0 = edge_off[1] - edge_off[0]
    for ai in range(k0):
        for bi in range(k0):
            if ai == bi:
                continue
            u0 = edge_vs[edge_off[0] + ai]
            v1 = edge_vs[edge_off[0] + bi]
            anchors[0] = u0
            anchors[1] = v1
            eseq[0] = 0
            used = np.int64(1)
            nodes += 1
            if nodes > budget:
                return TOUR_UNKNOWN, nodes, anchors, eseq
            depth = 1
            it_pos[1] = vert_off[anchors[1]]
            it_wi[1] = 0
            while depth >= 1:
                if depth == m:
                    if anchors[m] == u0:
                        return TOUR_FOUND, nodes, anchors, eseq
                    used &= ~(np.int64(1) << eseq[depth - 1])
                    depth -= 1
                    continue
                cur = anchors[depth]
                placed = False
                while it_pos[depth] < vert_off[cur + 1]:
                    f = vert_es[it_pos[depth]]
                    if (used >> f) & 1:
                        it_pos[depth] += 1
                        it_wi[depth] = 0
                        continue
                    fs = edge_off[f]
                    fe = edge_off[f + 1]
                    advanced = False
                    while fs + it_wi[depth] < fe:
                        w = edge_vs[fs + it_wi[depth]]
                        it_wi[depth] += 1
                        if w == cur:
                            continue
                        used |= np.int64(1) << f
                        eseq[depth] = f
                        anchors[depth + 1] = w
                        depth += 1
                        it_pos[depth] = vert_off[w]
                        it_wi[depth] = 0
                        nodes += 1
                        if nodes > budget:
                            return TOUR_UNKNOWN, nodes, anchors, eseq
                        placed = True
                        advanced = True
                        break
                    if advanced:
                        break
                    it_pos[depth] += 1
                    it_wi[depth] = 0
                if not placed:
                    depth -= 1
                    if depth >= 1:
                        used &= ~(np.int64(1) << eseq[depth])
    return TOUR_NONE, nodes, anchors, eseq


def _lovasz_scan_impl(adj, deg, n, m):
    """Exhaustive check of the parity-factor feasibility inequality.

    Node space: v-nodes 0..n-1, e-nodes n..n+m-1; ``adj`` holds int64
    adjacency bitmasks of the incidence graph.  Returns 1 if for all disjoint
    S (e-nodes) and T (any nodes)

        2|S| + sum(deg(T)) - 2|T∩E| - eps(S, T∩V) - q'(S,T) >= 0,

    where q' counts components C of the graph minus S and T with an odd
    number of edges into T.
    """
    total = n + m
    full = (np.int64(1) << total) - 1
    emask = ((np.int64(1) << m) - 1) << n
    vmask = (np.int64(1) << n) - 1

    s = emask
    while True:
        # |S| and the trimmed universe for T
        scount = 0
        x = s
        while x:
            x &= x - 1
            scount += 1
        rem = full & ~s
        t = rem
        while True:
            if t != 0:
                lhs = 2 * scount
                tv = t & vmask
                te = t & emask
                x = te
                while x:
                    x &= x - 1
                    lhs -= 2
                for i in range(total):
                    if (t >> i) & 1:
                        lhs += deg[i]
                x = s
                while x:
                    b = x & (-x)
                    x &= x - 1
                    i = 0
                    while (np.int64(1) << i) != b:
                        i += 1
                    y = adj[i] & tv
                    while y:
                        y &= y - 1
                        lhs -= 1
                if lhs < 0:
                    return 0
                if lhs < total:
                    # q'(S,T): flood-fill components of the remainder
                    rem2 = full & ~(s | t)
                    q = 0
                    while rem2:
                        b = rem2 & (-rem2)
                        comp = b
                        frontier = b
                        while frontier:
                            nf = np.int64(0)
                            for i in range(total):
                                if (frontier >> i) & 1:
                                    nf |= adj[i]
                            nf &= rem2 & ~comp
                            comp |= nf
                            frontier = nf
                        rem2 &= ~comp
                        cnt = 0
                        x = comp
                        while x:
                            b2 = x & (-x)
                            x &= x - 1
                            i = 0
                            while (np.int64(1) << i) != b2:
                                i += 1
                            y = adj[i] & t
                            while y:
                                y &= y - 1
                                cnt += 1
                        if cnt & 1:
                            q += 1
                    if lhs - q < 0:
                        return 0
            if t == 0:
                break
            t = (t - 1) & rem
        if s == 0:
            break
        s = (s - 1) & emask
    return 1


tour_search = _maybe_jit(_tour_search_impl)
lovasz_scan = _maybe_jit(_lovasz_scan_impl)


def tour_search_arrays(h) -> tuple:
    """CSR arrays (edge_off, edge_vs, vert_off, vert_es) for the kernel."""
    m, n = h.size, h.order
    edge_off = np.zeros(m + 1, dtype=np.int64)
    for j, e in enumerate(h.edges):
        edge_off[j + 1] = edge_off[j] + len(e)
    edge_vs = np.fromiter(
        (v for e in h.edges for v in e), dtype=np.int64, count=int(edge_off[m])
    )
    vert_off = np.zeros(n + 1, dtype=np.int64)
    for v in range(n):
        vert_off[v + 1] = vert_off[v] + len(h.vertex_edges[v])
    vert_es = np.fromiter(
        (j for v in range(n) for j in h.vertex_edges[v]),
        dtype=np.int64,
        count=int(vert_off[n]),
    )
    return edge_off, edge_vs, vert_off, vert_es
