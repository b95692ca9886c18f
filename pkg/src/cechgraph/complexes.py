"""Čech complexes of graphs and the subcomplex constructions built from them.

A complex is stored by its maximal faces only, each face a bitmask over vertex
ids.  The full face poset is enumerated on first use and cached per dimension.
Faces handed out to callers are sorted vertex tuples in lexicographic order.
"""

from __future__ import annotations

import logging
import math
import threading
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .errors import DomainError, SizeError
from .graphs import Graph, hypercube, induced_subgraph, subcube_vertices

log = logging.getLogger(__name__)

DEFAULT_FACE_BUDGET = 2_000_000

Simplex = tuple[int, ...]


def to_mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        if v < 0:
            raise DomainError(f"negative vertex id {v}")
        m |= 1 << v
    return m


def mask_to_tuple(m: int) -> Simplex:
    out = []
    while m:
        low = m & -m
        out.append(low.bit_length() - 1)
        m ^= low
    return tuple(out)


def _antichain(masks: Iterable[int]) -> list[int]:
    """Drop every mask contained in another one (duplicates collapse)."""
    kept: list[int] = []
    for m in sorted(set(masks), key=lambda x: -x.bit_count()):
        if m and not any(m & ~k == 0 for k in kept):
            kept.append(m)
    return kept


class SimplicialComplex:
    """Finite abstract simplicial complex given by its maximal faces.

    The vertex set is the union of the maximal faces; a complex with no faces is
    the void complex.  Instances are immutable.
    """

    def __init__(self, maximal_faces: Iterable[Iterable[int]] = ()):
        self._init_masks(to_mask(f) for f in maximal_faces)

    @classmethod
    def from_masks(cls, masks: Iterable[int]) -> "SimplicialComplex":
        K = cls.__new__(cls)
        K._init_masks(masks)
        return K

    def _init_masks(self, masks: Iterable[int]) -> None:
        kept = _antichain(masks)
        kept.sort(key=mask_to_tuple)
        self._masks = tuple(kept)
        self._vertex_mask = 0
        for m in kept:
            self._vertex_mask |= m
        self._by_dim: dict[int, list[int]] | None = None
        self._tuples: dict[int, list[Simplex]] = {}
        self._lock = threading.Lock()

    # -- basic queries -------------------------------------------------

    @property
    def maximal_masks(self) -> tuple[int, ...]:
        return self._masks

    @property
    def maximal_faces(self) -> list[Simplex]:
        return [mask_to_tuple(m) for m in self._masks]

    @property
    def vertex_mask(self) -> int:
        return self._vertex_mask

    @property
    def vertices(self) -> Simplex:
        return mask_to_tuple(self._vertex_mask)

    @property
    def n_vertices(self) -> int:
        return self._vertex_mask.bit_count()

    @property
    def dim(self) -> int:
        """Dimension; -1 for the void complex."""
        return max((m.bit_count() for m in self._masks), default=0) - 1

    def is_void(self) -> bool:
        return not self._masks

    def contains_mask(self, m: int) -> bool:
        return any(m & ~g == 0 for g in self._masks)

    def __contains__(self, face: Iterable[int]) -> bool:
        return contains(self, face)

    def maximal_cofaces(self, m: int) -> list[int]:
        return [g for g in self._masks if m & ~g == 0]

    def __eq__(self, other):
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self._masks == other._masks

    def __hash__(self):
        return hash(self._masks)

    def __repr__(self):
        return f"SimplicialComplex(dim={self.dim}, vertices={self.n_vertices}, maximal={len(self._masks)})"

    # -- face enumeration ----------------------------------------------

    def _populate(self, budget: int) -> dict[int, list[int]]:
        with self._lock:
            if self._by_dim is not None:
                return self._by_dim
            seen: set[int] = set()
            for g in self._masks:
                s = g
                while s:
                    seen.add(s)
                    s = (s - 1) & g
                if len(seen) > budget:
                    raise SizeError(
                        f"complex has more than {budget} faces (reached {len(seen)} "
                        f"while enumerating); raise the face budget to proceed"
                    )
            by_dim: dict[int, list[int]] = {}
            for m in seen:
                by_dim.setdefault(m.bit_count() - 1, []).append(m)
            for d in by_dim:
                by_dim[d].sort(key=mask_to_tuple)
            self._by_dim = by_dim
            return by_dim

    def face_masks(self, d: int, budget: int = DEFAULT_FACE_BUDGET) -> list[int]:
        """Masks of all ``d``-faces, in lexicographic order."""
        if d < 0:
            raise DomainError("dimension must be nonnegative")
        return self._populate(budget).get(d, [])

    def faces(self, d: int, budget: int = DEFAULT_FACE_BUDGET) -> list[Simplex]:
        if d < 0:
            raise DomainError("dimension must be nonnegative")
        by_dim = self._populate(budget)
        with self._lock:
            if d not in self._tuples:
                self._tuples[d] = [mask_to_tuple(m) for m in by_dim.get(d, [])]
            return self._tuples[d]

    def f_vector(self, budget: int = DEFAULT_FACE_BUDGET) -> tuple[int, ...]:
        by_dim = self._populate(budget)
        return tuple(len(by_dim.get(d, [])) for d in range(self.dim + 1))

    def n_faces(self, budget: int = DEFAULT_FACE_BUDGET) -> int:
        return sum(self.f_vector(budget))

    def face_count_upper_bound(self) -> int:
        """Cheap bound on the number of faces, no enumeration."""
        return sum((1 << m.bit_count()) - 1 for m in self._masks)

    def relabel(self, mapping: Sequence[int] | dict[int, int]) -> "SimplicialComplex":
        out = []
        for f in self.maximal_faces:
            out.append([mapping[v] for v in f])
        return SimplicialComplex(out)


def faces(K: SimplicialComplex, dim: int) -> list[Simplex]:
    return K.faces(dim)


def contains(K: SimplicialComplex, sigma: Iterable[int]) -> bool:
    return K.contains_mask(to_mask(sigma))


def euler_characteristic(K: SimplicialComplex, budget: int = DEFAULT_FACE_BUDGET) -> int:
    """Unreduced Euler characteristic."""
    return sum((-1) ** d * f for d, f in enumerate(K.f_vector(budget)))


def simplex(vertices: Iterable[int]) -> SimplicialComplex:
    return SimplicialComplex([tuple(vertices)])


def boundary_of_simplex(vertices: Iterable[int]) -> SimplicialComplex:
    vs = tuple(sorted(vertices))
    return SimplicialComplex(combinations(vs, len(vs) - 1))


# -- Čech complexes ----------------------------------------------------


def cech_generators(G: Graph, r: int) -> list[int]:
    """Generating vertex sets of ``N(G, r)`` as masks, before pruning."""
    if r == 0:
        return [1 << v for v in range(G.n_vertices)]
    if r % 2 == 0:
        return [G.ball_mask(v, r // 2) for v in range(G.n_vertices)]
    k = (r - 1) // 2
    balls = [G.ball_mask(v, k) for v in range(G.n_vertices)]
    return [balls[v] | balls[w] for v, w in sorted(G.edges)]


def cech_complex(G: Graph, r: float) -> SimplicialComplex:
    """The Čech complex ``N(G, r)``; non-integer scales are floored."""
    if r < 0:
        raise DomainError(f"scale must be nonnegative, got {r}")
    r = math.floor(r)
    gens = cech_generators(G, r)
    # singletons keep isolated vertices when there are no edges (G = one vertex)
    singles = [1 << v for v in range(G.n_vertices)]
    K = SimplicialComplex.from_masks(gens + singles)
    n_pruned = len(gens) - len(K.maximal_masks)
    if n_pruned > 0 and r > 0:
        log.info("N(%r, %d): pruned %d nested or duplicate generators", G, r, n_pruned)
    return K


# -- star, link, deletion, skeleton, join --------------------------------


def _require_vertex(K: SimplicialComplex, v: int) -> None:
    if v < 0 or not K.vertex_mask >> v & 1:
        raise DomainError(f"vertex {v} is not a vertex of the complex")


def star(K: SimplicialComplex, v: int) -> SimplicialComplex:
    _require_vertex(K, v)
    return SimplicialComplex.from_masks(g for g in K.maximal_masks if g >> v & 1)


def link(K: SimplicialComplex, v: int) -> SimplicialComplex:
    _require_vertex(K, v)
    bit = 1 << v
    return SimplicialComplex.from_masks(g & ~bit for g in K.maximal_masks if g & bit)


def deletion(K: SimplicialComplex, v: int) -> SimplicialComplex:
    _require_vertex(K, v)
    bit = 1 << v
    return SimplicialComplex.from_masks(g & ~bit for g in K.maximal_masks)


def skeleton(K: SimplicialComplex, d: int) -> SimplicialComplex:
    if d < 0:
        raise DomainError("skeleton dimension must be nonnegative")
    out: set[int] = set()
    for g in K.maximal_masks:
        if g.bit_count() <= d + 1:
            out.add(g)
        else:
            for sub in combinations(mask_to_tuple(g), d + 1):
                out.add(to_mask(sub))
    return SimplicialComplex.from_masks(out)


def join(K1: SimplicialComplex, K2: SimplicialComplex) -> SimplicialComplex:
    """Join, with the vertices of ``K2`` shifted past those of ``K1``."""
    if K1.is_void():
        return K2
    if K2.is_void():
        return K1
    shift = K1.vertex_mask.bit_length()
    return SimplicialComplex.from_masks(
        a | (b << shift) for a in K1.maximal_masks for b in K2.maximal_masks
    )


# -- covers and nerves ---------------------------------------------------


@dataclass(frozen=True)
class Cover:
    """A family of subcomplexes over one ambient vertex set."""

    parts: tuple[SimplicialComplex, ...]
    names: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        if not self.names:
            object.__setattr__(self, "names", tuple(str(i) for i in range(len(self.parts))))

    def union(self) -> SimplicialComplex:
        return SimplicialComplex.from_masks(m for p in self.parts for m in p.maximal_masks)

    def covers(self, K: SimplicialComplex) -> bool:
        return self.union() == K


def intersection(K1: SimplicialComplex, K2: SimplicialComplex) -> SimplicialComplex:
    """Faces common to both complexes, as an antichain of pairwise intersections."""
    return SimplicialComplex.from_masks(a & b for a in K1.maximal_masks for b in K2.maximal_masks)


def nerve_of_cover(cover: Cover | Sequence[SimplicialComplex]) -> SimplicialComplex:
    """One vertex per part; a set of parts spans a face iff they share a simplex."""
    parts = cover.parts if isinstance(cover, Cover) else tuple(cover)
    if not parts:
        raise DomainError("cover has no parts")
    for i, p in enumerate(parts):
        if p.is_void():
            raise DomainError(f"cover part {i} is empty")
    # subcomplexes share a simplex iff they share a vertex
    ambient = 0
    for p in parts:
        ambient |= p.vertex_mask
    gens = []
    x = ambient
    while x:
        low = x & -x
        gens.append(sum(1 << i for i, p in enumerate(parts) if p.vertex_mask & low))
        x ^= low
    return SimplicialComplex.from_masks(gens)


def boundary_subcomplex(n: int) -> tuple[SimplicialComplex, Cover]:
    """The union of the Čech complexes (scale 3) of the 2n facets of ``I_n``.

    Returns the union on the vertex ids of ``I_n`` together with the cover by the
    ``2n`` facet complexes, ordered ``(1,0), (1,1), (2,0), ...``.
    """
    if not 2 <= n <= 5:
        raise SizeError(f"boundary subcomplex supported for 2 <= n <= 5, got {n}")
    Q = hypercube(n)
    parts, names = [], []
    for i in range(1, n + 1):
        for eps in (0, 1):
            sub = induced_subgraph(Q, subcube_vertices(n, i, eps))
            parts.append(cech_complex(sub, 3).relabel(sub.labels))
            names.append(f"{i},{eps}")
    cover = Cover(tuple(parts), tuple(names))
    return cover.union(), cover


def covers_all_places(face: Iterable[int], n: int) -> bool:
    """True iff every coordinate takes both values on the face."""
    vs = list(face)
    return all(
        any(v >> i & 1 for v in vs) and not all(v >> i & 1 for v in vs) for i in range(n)
    )
