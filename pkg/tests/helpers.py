"""Shared test utilities: brute-force oracles and graph pools."""
from __future__ import annotations

from collections import deque

import numpy as np

from blockgossip import Graph, complete, graphs, grid, path, ring


def bfs_components(g: Graph, selected: list[int]) -> set[frozenset[int]]:
    """Reachability oracle for edge-induced components, independent of union-find."""
    adj: dict[int, list[int]] = {}
    for e in selected:
        i, j = g.edges[e]
        adj.setdefault(i, []).append(j)
        adj.setdefault(j, []).append(i)
    seen: set[int] = set()
    out: set[frozenset[int]] = set()
    for start in adj:
        if start in seen:
            continue
        queue = deque([start])
        seen.add(start)
        group = {start}
        while queue:
            a = queue.popleft()
            for b in adj[a]:
                if b not in seen:
                    seen.add(b)
                    group.add(b)
                    queue.append(b)
        out.add(frozenset(group))
    return out


def graph_pool() -> list[Graph]:
    return [
        path(2), path(7), complete(3), complete(5),
        ring(6), ring(9), ring(10), grid(3, 4),
    ]


def random_graph(rng: np.random.Generator) -> Graph:
    kind = int(rng.integers(0, 4))
    if kind == 0:
        return ring(int(rng.integers(3, 11)))
    if kind == 1:
        return path(int(rng.integers(2, 11)))
    if kind == 2:
        return grid(int(rng.integers(2, 5)), int(rng.integers(2, 5)))
    return complete(int(rng.integers(2, 8)))
