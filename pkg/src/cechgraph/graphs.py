"""Graph families and their shortest-path metric.

Vertices are dense integer ids.  For hypercube-family graphs (hypercubes and
the prefix graphs on ``0..m-1``) coordinate ``x_{i+1}`` of a vertex is bit
``i`` of its id, so coordinate 1 is the least significant bit.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from .errors import ConnectivityError, DomainError, SizeError

MAX_HYPERCUBE_DIM = 20


@dataclass(frozen=True, eq=False)
class Graph:
    """A finite simple connected graph.

    ``family`` is one of ``"hypercube"``, ``"prefix"``, ``"cycle"`` or
    ``"custom"``; ``param`` is the family parameter (n or m).  ``labels[i]`` is
    the id vertex ``i`` had in the graph it was induced from (identity for
    freshly generated graphs).
    """

    n_vertices: int
    edges: frozenset[tuple[int, int]]
    family: str = "custom"
    param: int | None = None
    labels: tuple[int, ...] = ()
    _adj: tuple[tuple[int, ...], ...] = field(init=False, repr=False)
    _dist: list = field(init=False, repr=False)
    _lock: threading.Lock = field(init=False, repr=False)

    def __post_init__(self):
        if self.n_vertices < 1:
            raise SizeError("graph must have at least one vertex")
        adj: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for u, w in self.edges:
            if u == w:
                raise DomainError(f"loop at vertex {u}")
            if not (0 <= u < self.n_vertices and 0 <= w < self.n_vertices):
                raise DomainError(f"edge ({u}, {w}) out of range")
            adj[u].append(w)
            adj[w].append(u)
        object.__setattr__(self, "_adj", tuple(tuple(sorted(a)) for a in adj))
        if not self.labels:
            object.__setattr__(self, "labels", tuple(range(self.n_vertices)))
        object.__setattr__(self, "_dist", [None])
        object.__setattr__(self, "_lock", threading.Lock())
        if self.family not in ("hypercube", "prefix") and self.n_vertices > 1:
            n_comp, _ = connected_components(self._csr(), directed=False)
            if n_comp != 1:
                raise ConnectivityError(f"graph has {n_comp} connected components")

    @property
    def hamming_metric(self) -> bool:
        """True when the shortest-path distance is the Hamming distance of ids."""
        return self.family in ("hypercube", "prefix")

    def _csr(self) -> csr_matrix:
        n = self.n_vertices
        if not self.edges:
            return csr_matrix((n, n), dtype=np.int8)
        e = np.array(sorted(self.edges), dtype=np.int64)
        rows = np.concatenate([e[:, 0], e[:, 1]])
        cols = np.concatenate([e[:, 1], e[:, 0]])
        return csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def distance_matrix(self) -> np.ndarray:
        """All-pairs hop counts, computed once and cached."""
        with self._lock:
            if self._dist[0] is None:
                if self.hamming_metric:
                    ids = np.arange(self.n_vertices, dtype=np.int64)
                    x = ids[:, None] ^ ids[None, :]
                    d = np.zeros_like(x)
                    while x.any():
                        d += x & 1
                        x >>= 1
                else:
                    d = shortest_path(self._csr(), method="D", unweighted=True, directed=False)
                    d = d.astype(np.int64)
                d.setflags(write=False)
                self._dist[0] = d
            return self._dist[0]

    def distance(self, u: int, w: int) -> int:
        if self.hamming_metric:
            return (u ^ w).bit_count()
        return int(self.distance_matrix()[u, w])

    def diameter(self) -> int:
        return int(self.distance_matrix().max())

    def ball_mask(self, v: int, k: int) -> int:
        """Bitmask of the closed ``k``-neighborhood of ``v``."""
        mask = 0
        if self.hamming_metric:
            for w in range(self.n_vertices):
                if (v ^ w).bit_count() <= k:
                    mask |= 1 << w
            return mask
        for w in np.flatnonzero(self.distance_matrix()[v] <= k):
            mask |= 1 << int(w)
        return mask

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n_vertices == other.n_vertices and self.edges == other.edges

    def __hash__(self):
        return hash((self.n_vertices, self.edges))

    def __repr__(self):
        tag = self.family if self.param is None else f"{self.family}({self.param})"
        return f"Graph<{tag}, {self.n_vertices} vertices, {len(self.edges)} edges>"


def _edge(u: int, w: int) -> tuple[int, int]:
    return (u, w) if u < w else (w, u)


def hypercube(n: int) -> Graph:
    """The n-dimensional hypercube graph on ``2**n`` binary strings."""
    if not 1 <= n <= MAX_HYPERCUBE_DIM:
        raise SizeError(f"hypercube dimension must be in 1..{MAX_HYPERCUBE_DIM}, got {n}")
    N = 1 << n
    edges = frozenset((v, v | (1 << i)) for v in range(N) for i in range(n) if not v >> i & 1)
    return Graph(N, edges, family="hypercube", param=n)


def prefix_graph(m: int) -> Graph:
    """Hamming-distance-one graph on the integers ``0..m-1``."""
    if m < 1:
        raise SizeError("prefix graph needs m >= 1 (the empty graph is not allowed)")
    if m > 1 << MAX_HYPERCUBE_DIM:
        raise SizeError(f"prefix graph size {m} too large")
    edges = frozenset(
        (v, v | (1 << i))
        for v in range(m)
        for i in range(max(m - 1, 1).bit_length())
        if not v >> i & 1 and v | (1 << i) < m
    )
    return Graph(m, edges, family="prefix", param=m)


def cycle(m: int) -> Graph:
    if m < 3:
        raise SizeError(f"cycle needs at least 3 vertices, got {m}")
    edges = frozenset(_edge(i, (i + 1) % m) for i in range(m))
    return Graph(m, edges, family="cycle", param=m)


def custom_graph(n_vertices: int, edges: Iterable[tuple[int, int]]) -> Graph:
    es = set()
    for u, w in edges:
        e = _edge(int(u), int(w))
        if e in es:
            raise DomainError(f"duplicate edge {e}")
        es.add(e)
    return Graph(n_vertices, frozenset(es))


def induced_subgraph(G: Graph, S: Iterable[int]) -> Graph:
    """``G[S]`` relabeled densely; ``labels`` maps new ids back to ids of ``G``."""
    verts = sorted(set(S))
    if not verts:
        raise SizeError("induced subgraph on the empty set")
    for v in verts:
        if not 0 <= v < G.n_vertices:
            raise DomainError(f"vertex {v} not in graph")
    new = {v: i for i, v in enumerate(verts)}
    edges = frozenset(
        (new[u], new[w]) for u, w in G.edges if u in new and w in new
    )
    sub = Graph(len(verts), edges, labels=tuple(G.labels[v] for v in verts))
    return sub


def distances(G: Graph) -> np.ndarray:
    return G.distance_matrix()


def closed_neighborhood(G: Graph, v: int, k: int) -> frozenset[int]:
    """``{w : d(v, w) <= k}``."""
    if not 0 <= v < G.n_vertices:
        raise DomainError(f"vertex {v} not in graph")
    if k < 0:
        raise DomainError("radius must be nonnegative")
    mask = G.ball_mask(v, k)
    return frozenset(w for w in range(G.n_vertices) if mask >> w & 1)


def flip(v: int, indices: Iterable[int], n: int | None = None) -> int:
    """Flip the given 1-based coordinates of a hypercube vertex."""
    for i in indices:
        if i < 1 or (n is not None and i > n):
            raise DomainError(f"coordinate {i} outside [1, {n}]")
        v ^= 1 << (i - 1)
    return v


def format_vertex(v: int, n: int) -> str:
    """Render a hypercube vertex as the string ``x_1 x_2 ... x_n``."""
    return "".join(str(v >> i & 1) for i in range(n))


def parse_vertex(s: str) -> int:
    """Inverse of :func:`format_vertex`."""
    if not s or set(s) - {"0", "1"}:
        raise DomainError(f"not a binary string: {s!r}")
    return sum(1 << i for i, c in enumerate(s) if c == "1")


def subcube_vertices(n: int, i: int, eps: int) -> list[int]:
    """Vertices of ``I_n`` whose coordinate ``i`` equals ``eps``."""
    if not 1 <= i <= n or eps not in (0, 1):
        raise DomainError(f"bad subcube selector ({i}, {eps}) for n={n}")
    return [v for v in range(1 << n) if (v >> (i - 1) & 1) == eps]
