"""Graphs, generators, and the incidence system behind average consensus.

A graph here is always undirected, connected, simple, with nodes 0..n-1 and
a canonical lexicographic edge order. That order fixes edge indices, and
hence the row order (and sign convention) of the incidence matrix, so the
matrix is reproducible bit for bit.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


class DisconnectedGraphError(ValueError):
    """Raised when an edge list does not describe a connected graph."""

    def __init__(self, component_count: int):
        self.component_count = component_count
        super().__init__(
            f"graph is not connected: {component_count} connected components"
        )


class EdgeListParseError(ValueError):
    """Raised for malformed edge-list files; carries the offending line number."""

    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


@dataclass(frozen=True)
class Graph:
    """Undirected connected graph with a canonical edge order.

    Edges are pairs (i, j) with i < j, sorted lexicographically; the position
    of an edge in this tuple is its edge index.
    """

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"graph needs at least 2 nodes, got n={self.n}")
        seen = set()
        for i, j in self.edges:
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"edge ({i}, {j}) out of range for n={self.n}")
            if i == j:
                raise ValueError(f"self-loop at node {i}")
            if i > j:
                raise ValueError(f"edge ({i}, {j}) not oriented with i < j")
            if (i, j) in seen:
                raise ValueError(f"duplicate edge ({i}, {j})")
            seen.add((i, j))
        if self.edges != tuple(sorted(self.edges)):
            raise ValueError("edges not in canonical lexicographic order")
        n_comp = _component_count(self.n, self.edges)
        if n_comp != 1:
            raise DisconnectedGraphError(n_comp)

    @property
    def m(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class IncidenceSystem:
    """The m-by-n edge/node matrix A encoding x_i = x_j for every edge.

    Row e for edge (i, j) with i < j carries +1 in column i and -1 in
    column j. The right-hand side is identically zero and stays implicit.
    """

    A: np.ndarray
    m: int
    n: int


@dataclass(frozen=True)
class Component:
    """One connected piece of an edge-induced subgraph. Always >= 2 nodes."""

    nodes: frozenset[int]

    def sorted_nodes(self) -> tuple[int, ...]:
        return tuple(sorted(self.nodes))


class _UnionFind:
    """Union-find with path compression over an arbitrary node subset."""

    def __init__(self):
        self.parent: dict[int, int] = {}

    def add(self, a: int) -> None:
        if a not in self.parent:
            self.parent[a] = a

    def find(self, a: int) -> int:
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def _component_count(n: int, edges: Iterable[tuple[int, int]]) -> int:
    uf = _UnionFind()
    for a in range(n):
        uf.add(a)
    for i, j in edges:
        uf.union(i, j)
    return len({uf.find(a) for a in range(n)})


def canonical_edges(pairs: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    """Orient every pair with the smaller index first and sort lexicographically."""
    return tuple(sorted((min(i, j), max(i, j)) for i, j in pairs))


def ring(n: int) -> Graph:
    """Cycle on n >= 3 nodes; m = n."""
    if n < 3:
        raise ValueError(f"ring needs n >= 3, got {n}")
    return Graph(n, canonical_edges((i, (i + 1) % n) for i in range(n)))


def path(n: int) -> Graph:
    """Path on n >= 2 nodes; m = n - 1."""
    if n < 2:
        raise ValueError(f"path needs n >= 2, got {n}")
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


def grid(rows: int, cols: int) -> Graph:
    """rows-by-cols lattice; node (r, c) is index r*cols + c."""
    if rows < 2 or cols < 2:
        raise ValueError(f"grid needs rows >= 2 and cols >= 2, got {rows}x{cols}")
    pairs = []
    for r in range(rows):
        for c in range(cols):
            a = r * cols + c
            if c + 1 < cols:
                pairs.append((a, a + 1))
            if r + 1 < rows:
                pairs.append((a, a + cols))
    return Graph(rows * cols, canonical_edges(pairs))


def complete(n: int) -> Graph:
    """Complete graph on n >= 2 nodes."""
    if n < 2:
        raise ValueError(f"complete needs n >= 2, got {n}")
    return Graph(n, tuple(itertools.combinations(range(n), 2)))


def from_edge_list(file_path: str) -> Graph:
    """Load a graph from a text file: one edge per line, two whitespace-separated
    node indices, '#' starts a comment. Nodes are 0..max_index."""
    pairs: list[tuple[int, int]] = []
    with open(file_path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise EdgeListParseError(
                    line_no, f"expected two node indices, got {len(parts)} fields"
                )
            try:
                i, j = int(parts[0]), int(parts[1])
            except ValueError:
                raise EdgeListParseError(line_no, f"non-integer node index in {parts!r}")
            if i < 0 or j < 0:
                raise EdgeListParseError(line_no, f"negative node index in ({i}, {j})")
            if i == j:
                raise EdgeListParseError(line_no, f"self-loop at node {i}")
            pairs.append((i, j))
    if not pairs:
        raise ValueError(f"{file_path}: no edges found")
    edges = canonical_edges(pairs)
    if len(set(edges)) != len(edges):
        dup = next(e for k, e in enumerate(edges) if e in edges[:k])
        raise ValueError(f"{file_path}: duplicate edge {dup}")
    n = max(j for _, j in edges) + 1
    return Graph(n, edges)


def build_graph(spec: str) -> Graph:
    """Build a graph from a generator spec string.

    Accepted forms: "ring:N", "path:N", "complete:N", "grid:RxC", "file:PATH".
    """
    kind, sep, arg = spec.partition(":")
    if not sep or not arg:
        raise ValueError(f"malformed graph spec {spec!r}; expected KIND:ARG")
    if kind == "ring":
        return ring(_positive_int(arg, spec))
    if kind == "path":
        return path(_positive_int(arg, spec))
    if kind == "complete":
        return complete(_positive_int(arg, spec))
    if kind == "grid":
        r, sep2, c = arg.partition("x")
        if not sep2:
            raise ValueError(f"malformed grid spec {spec!r}; expected grid:RxC")
        return grid(_positive_int(r, spec), _positive_int(c, spec))
    if kind == "file":
        return from_edge_list(arg)
    raise ValueError(f"unknown graph kind {kind!r} in spec {spec!r}")


def _positive_int(text: str, spec: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise ValueError(f"non-integer size {text!r} in graph spec {spec!r}")
    return value


def incidence(g: Graph) -> IncidenceSystem:
    """Canonical incidence system of g: A @ ones(n) == 0 and rank(A) == n - 1."""
    A = np.zeros((g.m, g.n), dtype=np.float64)
    for e, (i, j) in enumerate(g.edges):
        A[e, i] = 1.0
        A[e, j] = -1.0
    return IncidenceSystem(A=A, m=g.m, n=g.n)


def components(g: Graph, selected: Sequence[int]) -> list[Component]:
    """Connected components of the subgraph induced by the selected edge indices.

    Only nodes touched by a selected edge appear; returned components are
    disjoint, each with at least two nodes, ordered by smallest member.
    """
    if len(selected) == 0:
        raise ValueError("empty edge selection: a gossip step needs at least one edge")
    uf = _UnionFind()
    for e in selected:
        if not (0 <= e < g.m):
            raise ValueError(f"edge index {e} out of range for m={g.m}")
        i, j = g.edges[e]
        uf.add(i)
        uf.add(j)
        uf.union(i, j)
    groups: dict[int, list[int]] = {}
    for a in uf.parent:
        groups.setdefault(uf.find(a), []).append(a)
    comps = [Component(frozenset(nodes)) for nodes in groups.values()]
    comps.sort(key=lambda comp: min(comp.nodes))
    return comps


def component_node_lists(g: Graph, selected: Sequence[int]) -> list[list[int]]:
    """Components as plain sorted node lists; cheap form used by the run loops."""
    uf = _UnionFind()
    for e in selected:
        i, j = g.edges[e]
        uf.add(i)
        uf.add(j)
        uf.union(i, j)
    groups: dict[int, list[int]] = {}
    for a in uf.parent:
        groups.setdefault(uf.find(a), []).append(a)
    out = [sorted(nodes) for nodes in groups.values()]
    out.sort(key=lambda nodes: nodes[0])
    return out


def girth(g: Graph) -> int | None:
    """Length of the shortest cycle, or None for a forest.

    Every edge subset of size below the girth is acyclic, i.e. the matching
    block of incidence rows has full row rank.
    """
    adj: list[list[int]] = [[] for _ in range(g.n)]
    for i, j in g.edges:
        adj[i].append(j)
        adj[j].append(i)
    best: int | None = None
    for e, (u, v) in enumerate(g.edges):
        # shortest u-v path avoiding the edge itself closes the shortest
        # cycle through that edge
        dist = {u: 0}
        frontier = [u]
        found = None
        while frontier and found is None:
            nxt = []
            for a in frontier:
                for b in adj[a]:
                    if a == u and b == v:
                        continue
                    if a == v and b == u:
                        continue
                    if b not in dist:
                        dist[b] = dist[a] + 1
                        if b == v:
                            found = dist[b]
                            break
                        nxt.append(b)
                if found is not None:
                    break
            frontier = nxt
        if found is not None:
            cycle = found + 1
            if best is None or cycle < best:
                best = cycle
    return best
