"""Maximum-cardinality matching in general graphs (blossom contraction).

Classic O(V^3) algorithm: repeated BFS for augmenting paths, contracting
odd cycles (blossoms) to their base vertex via the ``base`` array.
"""
from __future__ import annotations

from collections import deque


def max_matching(n: int, adj: list[list[int]]) -> list[int]:
    """Return mate[v] (-1 if unmatched) for the graph given by adjacency lists.

    Deterministic: roots are tried in ascending order and neighbours in list
    order, so the result depends only on the adjacency layout.
    """
    mate = [-1] * n
    p = [-1] * n
    base = list(range(n))
    used = [False] * n
    blossom = [False] * n

    def lca(a: int, b: int) -> int:
        marked = [False] * n
        while True:
            a = base[a]
            marked[a] = True
            if mate[a] == -1:
                break
            a = p[mate[a]]
        while True:
            b = base[b]
            if marked[b]:
                return b
            b = p[mate[b]]

    def mark_path(v: int, b: int, child: int) -> None:
        while base[v] != b:
            blossom[base[v]] = True
            blossom[base[mate[v]]] = True
            p[v] = child
            child = mate[v]
            v = p[mate[v]]

    def find_path(root: int) -> bool:
        for i in range(n):
            used[i] = False
            p[i] = -1
            base[i] = i
        used[root] = True
        q = deque([root])
        while q:
            v = q.popleft()
            for to in adj[v]:
                if base[v] == base[to] or mate[v] == to:
                    continue
                if to == root or (mate[to] != -1 and p[mate[to]] != -1):
                    # odd cycle: contract the blossom to its base
                    cur = lca(v, to)
                    for i in range(n):
                        blossom[i] = False
                    mark_path(v, cur, to)
                    mark_path(to, cur, v)
                    for i in range(n):
                        if blossom[base[i]]:
                            base[i] = cur
                            if not used[i]:
                                used[i] = True
                                q.append(i)
                elif p[to] == -1:
                    p[to] = v
                    if mate[to] == -1:
                        # augment along root..to
                        u = to
                        while u != -1:
                            pv = p[u]
                            ppv = mate[pv]
                            mate[u] = pv
                            mate[pv] = u
                            u = ppv
                        return True
                    used[mate[to]] = True
                    q.append(mate[to])
        return False

    for v in range(n):
        if mate[v] == -1:
            find_path(v)
    return mate
