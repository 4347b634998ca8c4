"""Simple undirected graphs on integer vertex ids, with cached BFS metrics."""

from __future__ import annotations

from collections import deque
from typing import Iterable

import numpy as np

from .errors import GraphNotConnectedError, UnknownVertexError


def _norm_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable simple graph.

    Vertices are non-negative integers; edges are unordered pairs. Loops and
    parallel edges are rejected at construction time.
    """

    def __init__(self, vertices: Iterable[int], edges: Iterable[tuple[int, int]]):
        vs = sorted(set(int(v) for v in vertices))
        vset = set(vs)
        es = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"loop edge at vertex {u}")
            if u not in vset or v not in vset:
                raise UnknownVertexError(f"edge ({u},{v}) references undeclared vertex")
            es.add(_norm_edge(u, v))
        self.vertices: tuple[int, ...] = tuple(vs)
        self.edges: tuple[tuple[int, int], ...] = tuple(sorted(es))
        adj: dict[int, list[int]] = {v: [] for v in vs}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        self._adj = {v: tuple(sorted(ns)) for v, ns in adj.items()}
        self._index = {v: i for i, v in enumerate(vs)}
        self._cache: dict = {}

    # -- basic queries ---------------------------------------------------

    def __contains__(self, v: int) -> bool:
        return v in self._adj

    def __len__(self) -> int:
        return len(self.vertices)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Graph)
            and self.vertices == other.vertices
            and self.edges == other.edges
        )

    def __hash__(self):
        return hash((self.vertices, self.edges))

    def __repr__(self):
        return f"Graph(|V|={len(self.vertices)}, |E|={len(self.edges)})"

    def neighbors(self, v: int) -> tuple[int, ...]:
        try:
            return self._adj[v]
        except KeyError:
            raise UnknownVertexError(f"vertex {v} not in graph") from None

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def has_edge(self, u: int, v: int) -> bool:
        return _norm_edge(u, v) in self.edge_set()

    def edge_set(self) -> frozenset:
        if "edgeset" not in self._cache:
            self._cache["edgeset"] = frozenset(self.edges)
        return self._cache["edgeset"]

    def index_of(self, v: int) -> int:
        return self._index[v]

    # -- metrics ----------------------------------------------------------

    def bfs_distances(self, source: int) -> dict[int, int]:
        """Hop distances from ``source``; unreachable vertices are absent."""
        if source not in self._adj:
            raise UnknownVertexError(f"vertex {source} not in graph")
        dist = {source: 0}
        q = deque([source])
        while q:
            u = q.popleft()
            du = dist[u]
            for w in self._adj[u]:
                if w not in dist:
                    dist[w] = du + 1
                    q.append(w)
        return dist

    def distance_matrix(self) -> np.ndarray:
        """Dense matrix of hop distances (-1 for unreachable), row/col by vertex order."""
        if "dmat" not in self._cache:
            n = len(self.vertices)
            mat = np.full((n, n), -1, dtype=np.int32)
            for i, v in enumerate(self.vertices):
                d = self.bfs_distances(v)
                for w, dw in d.items():
                    mat[i, self._index[w]] = dw
            self._cache["dmat"] = mat
        return self._cache["dmat"]

    def distance(self, u: int, v: int) -> int:
        mat = self.distance_matrix()
        return int(mat[self.index_of(u), self.index_of(v)])

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        return len(self.bfs_distances(self.vertices[0])) == len(self.vertices)

    def require_connected(self):
        if not self.is_connected():
            raise GraphNotConnectedError("graph is not connected")

    def component_of(self, v: int) -> frozenset:
        return frozenset(self.bfs_distances(v))

    def adjacency_matrix(self) -> np.ndarray:
        if "amat" not in self._cache:
            n = len(self.vertices)
            mat = np.zeros((n, n), dtype=np.uint8)
            for u, v in self.edges:
                iu, iv = self._index[u], self._index[v]
                mat[iu, iv] = 1
                mat[iv, iu] = 1
            self._cache["amat"] = mat
        return self._cache["amat"]

    def induced(self, keep: Iterable[int]) -> "Graph":
        ks = set(keep)
        return Graph(ks, [e for e in self.edges if e[0] in ks and e[1] in ks])

    def is_connected_set(self, vs: Iterable[int]) -> bool:
        """Whether ``vs`` induces a connected (nonempty) subgraph."""
        vs = set(vs)
        if not vs:
            return False
        start = next(iter(vs))
        seen = {start}
        q = deque([start])
        while q:
            u = q.popleft()
            for w in self._adj[u]:
                if w in vs and w not in seen:
                    seen.add(w)
                    q.append(w)
        return seen == vs
