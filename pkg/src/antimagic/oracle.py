"""Exhaustive ground truth for small graphs: decide by backtracking whether
any bijective edge labeling gives pairwise distinct vertex sums.

Edges are assigned in an order that finalizes vertex sums as early as
possible, so duplicate sums prune whole subtrees.  Completely independent of
the constructive engine; used to cross-check it on tiny instances.
"""

from __future__ import annotations

from .errors import OracleBudgetError
from .graph import Graph

DEFAULT_NODE_BUDGET = 5_000_000


def brute_force_antimagic(graph: Graph, max_perms: int | None = None):
    """Return (found, labels) where labels maps edge id to label when a valid
    assignment exists, else (False, None).  Raises OracleBudgetError after
    exploring max_perms search nodes (default 5,000,000)."""
    budget = DEFAULT_NODE_BUDGET if max_perms is None else max_perms
    if budget <= 0:
        raise ValueError("search budget must be positive")
    m = graph.m
    n = graph.n
    if m == 0:
        return (n <= 1, {})

    # Assign edges sorted by their endpoint pair so that once every edge at a
    # vertex is placed, all earlier vertices are finalized too.
    order = sorted(range(m), key=lambda eid: graph.edges[eid])
    remaining = [graph.degree(v) for v in range(n)]
    # last_of[pos] lists vertices whose final incident edge is order[pos].
    last_of: list[list[int]] = [[] for _ in range(m)]
    for pos, eid in enumerate(order):
        for v in graph.edges[eid]:
            remaining[v] -= 1
            if remaining[v] == 0:
                last_of[pos].append(v)

    sums = [0] * n
    used = [False] * (m + 1)
    finalized: set[int] = set()
    assignment = [0] * m
    nodes = 0

    def place(pos: int) -> bool:
        nonlocal nodes
        if pos == m:
            return True
        eid = order[pos]
        u, v = graph.edges[eid]
        for label in range(1, m + 1):
            if used[label]:
                continue
            nodes += 1
            if nodes > budget:
                raise OracleBudgetError(
                    f"search exceeded {budget} nodes on a graph with {m} edges")
            used[label] = True
            sums[u] += label
            sums[v] += label
            done = [w for w in last_of[pos] if sums[w] not in finalized]
            if len(done) == len(last_of[pos]) and len({sums[w] for w in done}) == len(done):
                for w in done:
                    finalized.add(sums[w])
                assignment[eid] = label
                if place(pos + 1):
                    return True
                for w in done:
                    finalized.discard(sums[w])
            used[label] = False
            sums[u] -= label
            sums[v] -= label
        return False

    if not place(0):
        return False, None

    labels = {eid: assignment[eid] for eid in range(m)}
    check = [0] * n
    for eid, lab in labels.items():
        a, b = graph.edges[eid]
        check[a] += lab
        check[b] += lab
    if sorted(labels.values()) != list(range(1, m + 1)) or len(set(check)) != n:
        raise OracleBudgetError("internal check of the found assignment failed")
    return True, labels
