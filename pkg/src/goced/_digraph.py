"""Small directed-graph routines over string node ids (SCCs, DAG closure)."""

from __future__ import annotations

from collections import defaultdict
from typing import Iterable


def adjacency(edges: Iterable[tuple[str, str]]) -> dict[str, list[str]]:
    adj: dict[str, list[str]] = defaultdict(list)
    for a, b in edges:
        adj[a].append(b)
        adj.setdefault(b, [])
    return {k: sorted(set(v)) for k, v in sorted(adj.items())}


def strongly_connected(adj: dict[str, list[str]]) -> list[list[str]]:
    """Tarjan's algorithm, iterative.  Components come back sorted, each sorted."""
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    out: list[list[str]] = []
    counter = 0
    for root in adj:
        if root in index:
            continue
        work = [(root, iter(adj[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for nxt in it:
                if nxt not in index:
                    index[nxt] = low[nxt] = counter
                    counter += 1
                    stack.append(nxt)
                    on_stack.add(nxt)
                    work.append((nxt, iter(adj[nxt])))
                    advanced = True
                    break
                if nxt in on_stack:
                    low[node] = min(low[node], index[nxt])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == node:
                        break
                out.append(sorted(comp))
    return sorted(out)


def cyclic_components(adj: dict[str, list[str]]) -> list[list[str]]:
    return [
        c for c in strongly_connected(adj) if len(c) > 1 or c[0] in adj.get(c[0], ())
    ]


def dag_closure(adj: dict[str, list[str]]) -> set[tuple[str, str]]:
    """Transitive closure of an acyclic adjacency map, via reachability bitsets."""
    nodes = list(adj)
    bit = {n: i for i, n in enumerate(nodes)}
    indeg = {n: 0 for n in nodes}
    for n in nodes:
        for m in adj[n]:
            indeg[m] += 1
    order = [n for n in nodes if indeg[n] == 0]
    for n in order:
        for m in adj[n]:
            indeg[m] -= 1
            if indeg[m] == 0:
                order.append(m)
    if len(order) != len(nodes):
        raise ValueError("graph has a cycle")
    reach: dict[str, int] = {}
    for n in reversed(order):
        bits = 0
        for m in adj[n]:
            bits |= (1 << bit[m]) | reach[m]
        reach[n] = bits
    pairs = set()
    for n in nodes:
        bits = reach[n]
        while bits:
            low = bits & -bits
            pairs.add((n, nodes[low.bit_length() - 1]))
            bits ^= low
    return pairs
