"""Čech filtrations of graphs, Z/2 barcodes, and simplicial vertex maps."""

from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .complexes import (
    DEFAULT_FACE_BUDGET,
    SimplicialComplex,
    cech_complex,
    mask_to_tuple,
)
from .errors import DomainError, SizeError
from .graphs import Graph, hypercube

log = logging.getLogger(__name__)


def birth_scale(G: Graph, sigma: Iterable[int]) -> int:
    """Least integer ``r`` with ``sigma`` a face of ``N(G, r)``."""
    vs = sorted(set(sigma))
    if not vs:
        raise DomainError("empty simplex")
    if len(vs) == 1:
        return 0
    D = G.distance_matrix()
    sub = D[:, vs]
    best = 2 * int(sub.max(axis=1).min())
    if G.edges:
        E = np.array(sorted(G.edges), dtype=np.int64)
        reach = np.minimum(sub[E[:, 0]], sub[E[:, 1]]).max(axis=1)
        best = min(best, 2 * int(reach.min()) + 1)
    return best


def full_simplex_scale(G: Graph) -> int:
    """First scale at which ``N(G, r)`` is the full simplex on ``V(G)``."""
    if G.hamming_metric and G.family == "hypercube":
        return 2 * G.param - 1
    r = 0
    while len(cech_complex(G, r).maximal_masks) > 1:
        r += 1
    return r


@dataclass(frozen=True)
class Filtration:
    """Faces of ``N(G, max_scale)`` with birth scales, in filtration order.

    The order is (birth, dimension, lexicographic face).
    """

    graph: Graph
    max_scale: int
    masks: tuple[int, ...]
    births: tuple[int, ...]

    def __len__(self):
        return len(self.masks)

    @property
    def simplices(self) -> list[tuple[tuple[int, ...], int]]:
        return [(mask_to_tuple(m), b) for m, b in zip(self.masks, self.births)]

    def faces_at(self, r: int) -> set[int]:
        return {m for m, b in zip(self.masks, self.births) if b <= r}

    def birth_counts(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for b in self.births:
            out[b] = out.get(b, 0) + 1
        return out


def build_filtration(G: Graph, max_scale: int | None = None, budget: int = DEFAULT_FACE_BUDGET) -> Filtration:
    if max_scale is None:
        max_scale = full_simplex_scale(G)
    if max_scale < 0:
        raise DomainError("max_scale must be nonnegative")
    birth: dict[int, int] = {}
    done: set[int] = set()
    prev: SimplicialComplex | None = None
    for r in range(max_scale + 1):
        K = cech_complex(G, r)
        if prev is not None:
            for g in prev.maximal_masks:
                if not K.contains_mask(g):
                    raise AssertionError(f"N(G,{r - 1}) is not contained in N(G,{r}): {mask_to_tuple(g)}")
        prev = K
        for g in K.maximal_masks:
            if g in done:
                continue
            done.add(g)
            s = g
            while s:
                if s not in birth:
                    birth[s] = r
                s = (s - 1) & g
            if len(birth) > budget:
                raise SizeError(f"filtration exceeds the face budget of {budget} ({len(birth)} faces so far)")
    order = sorted(birth, key=lambda m: (birth[m], m.bit_count(), mask_to_tuple(m)))
    return Filtration(G, max_scale, tuple(order), tuple(birth[m] for m in order))


@dataclass(frozen=True)
class Barcode:
    """Reduced-homology persistence intervals ``[birth, death)``; ``death`` None is infinite."""

    intervals: tuple[tuple[int, int, int | None], ...]

    def in_dim(self, d: int) -> list[tuple[int, int | None]]:
        return [(b, e) for k, b, e in self.intervals if k == d]

    def betti_at(self, r: int, d: int) -> int:
        return sum(1 for k, b, e in self.intervals if k == d and b <= r and (e is None or e > r))

    def max_finite_length(self) -> int:
        return max((e - b for _, b, e in self.intervals if e is not None), default=0)

    def length_histogram(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for _, b, e in self.intervals:
            if e is not None:
                out[e - b] = out.get(e - b, 0) + 1
        return out

    def to_json(self) -> str:
        return json.dumps([{"dim": d, "birth": b, "death": e} for d, b, e in self.intervals])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["dim", "birth", "death"])
        for d, b, e in self.intervals:
            w.writerow([d, b, "inf" if e is None else e])
        return buf.getvalue()


def compute_barcode(F: Filtration) -> Barcode:
    """Standard column reduction over Z/2 with clearing, top dimension first."""
    index = {m: i for i, m in enumerate(F.masks)}
    by_dim: dict[int, list[int]] = {}
    for i, m in enumerate(F.masks):
        by_dim.setdefault(m.bit_count() - 1, []).append(i)
    top = max(by_dim, default=-1)
    paired: dict[int, int] = {}  # creator index -> destroyer index
    destroyers: set[int] = set()
    cleared: set[int] = set()
    for d in range(top, 0, -1):
        pivots: dict[int, int] = {}
        next_cleared: set[int] = set()
        for j in by_dim[d]:
            if j in cleared:
                continue
            f = F.masks[j]
            c = 0
            g = f
            while g:
                low = g & -g
                c |= 1 << index[f ^ low]
                g ^= low
            while c:
                p = c.bit_length() - 1
                q = pivots.get(p)
                if q is None:
                    pivots[p] = c
                    paired[p] = j
                    destroyers.add(j)
                    next_cleared.add(p)
                    break
                c ^= q
        cleared = next_cleared
    intervals = []
    for i, j in paired.items():
        if F.births[j] > F.births[i]:
            intervals.append((F.masks[i].bit_count() - 1, F.births[i], F.births[j]))
    essential = [i for i in range(len(F.masks)) if i not in paired and i not in destroyers]
    # the augmentation kills the first vertex in filtration order
    essential = [i for i in essential if i != 0]
    for i in essential:
        intervals.append((F.masks[i].bit_count() - 1, F.births[i], None))
    intervals.sort(key=lambda t: (t[0], t[1], float("inf") if t[2] is None else t[2]))
    return Barcode(tuple(intervals))


# -- vertex maps -------------------------------------------------------------


@dataclass(frozen=True)
class VertexMap:
    """A map of vertex ids given by a lookup table (``table[v]`` is the image of ``v``)."""

    table: tuple[int, ...]
    name: str = ""

    def __call__(self, v: int) -> int:
        return self.table[v]

    def image_mask(self, m: int) -> int:
        out = 0
        t = self.table
        while m:
            low = m & -m
            out |= 1 << t[low.bit_length() - 1]
            m ^= low
        return out

    def image(self, face: Iterable[int]) -> tuple[int, ...]:
        return tuple(sorted({self.table[v] for v in face}))

    def compose(self, other: "VertexMap") -> "VertexMap":
        """``self`` after ``other``."""
        return VertexMap(tuple(self.table[v] for v in other.table), f"{self.name}.{other.name}")

    def to_json(self) -> str:
        return json.dumps(list(self.table))


def _check_total(f: VertexMap, K: SimplicialComplex) -> None:
    if K.vertex_mask.bit_length() > len(f.table):
        raise DomainError(f"map {f.name or ''} is not defined on every vertex of the domain")


def is_simplicial(f: VertexMap, K: SimplicialComplex, L: SimplicialComplex) -> bool:
    """True iff the image of every maximal face of ``K`` is a face of ``L``."""
    _check_total(f, K)
    return all(L.contains_mask(f.image_mask(g)) for g in K.maximal_masks)


def _first_non_simplicial(f: VertexMap, K: SimplicialComplex, L: SimplicialComplex):
    for g in K.maximal_masks:
        if not L.contains_mask(f.image_mask(g)):
            return g
    return None


@dataclass(frozen=True)
class Contiguity:
    """Outcome of a contiguity test; falsy on failure, with the offending face."""

    ok: bool
    witness: tuple[int, ...] | None = None
    image: tuple[int, ...] | None = None

    def __bool__(self):
        return self.ok


def is_contiguous(f: VertexMap, g: VertexMap, K: SimplicialComplex, L: SimplicialComplex) -> Contiguity:
    """Checks ``f(sigma) | g(sigma) in L`` on maximal faces of ``K``, lexicographically."""
    for h in (f, g):
        bad = _first_non_simplicial(h, K, L)
        if bad is not None:
            raise DomainError(f"map {h.name or '?'} is not simplicial: image of {mask_to_tuple(bad)} is not a face")
    for s in K.maximal_masks:
        u = f.image_mask(s) | g.image_mask(s)
        if not L.contains_mask(u):
            return Contiguity(False, mask_to_tuple(s), mask_to_tuple(u))
    return Contiguity(True)


def identity_map(n_vertices: int) -> VertexMap:
    return VertexMap(tuple(range(n_vertices)), "id")


def constant_map(n_vertices: int, target: int = 0) -> VertexMap:
    return VertexMap((target,) * n_vertices, f"const{target}")


def coordinate_projection(n: int, i: int) -> VertexMap:
    """``p_i``: set coordinates ``1..i`` to zero (``p_0`` is the identity)."""
    if not 0 <= i <= n:
        raise DomainError(f"projection index {i} outside 0..{n}")
    keep = ~((1 << i) - 1)
    return VertexMap(tuple(v & keep for v in range(1 << n)), f"p{i}")


def subcube_retraction(n: int, i: int, eps: int) -> VertexMap:
    """Set coordinate ``i`` to ``eps`` and fix every other coordinate."""
    if not 1 <= i <= n or eps not in (0, 1):
        raise DomainError(f"bad retraction selector ({i}, {eps}) for n={n}")
    bit = 1 << (i - 1)
    if eps:
        table = tuple(v | bit for v in range(1 << n))
    else:
        table = tuple(v & ~bit for v in range(1 << n))
    return VertexMap(table, f"phi{i},{eps}")


@dataclass(frozen=True)
class ChainVerdict:
    n: int
    r: int
    codomain_delta: int
    ok: bool
    failed_index: int | None = None
    witness: tuple[int, ...] | None = None
    image: tuple[int, ...] | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "codomain_delta": self.codomain_delta,
            "ok": self.ok,
            "failed_index": self.failed_index,
            "witness": None if self.witness is None else list(self.witness),
            "image": None if self.image is None else list(self.image),
            "reason": self.reason,
        }


def contiguity_chain(n: int, r: int, codomain_delta: int = 2) -> ChainVerdict:
    """Check that consecutive projections ``N(I_n,r) -> N(I_n,r+delta)`` are contiguous.

    Succeeds when every pair ``p_{i-1}, p_i`` (``i = 1..n``) is contiguous and
    ``p_n`` is constant, which makes the inclusion null-homotopic.
    """
    if not 1 <= n <= 5:
        raise SizeError(f"contiguity chain supported for 1 <= n <= 5, got {n}")
    if r < 0:
        raise DomainError("scale must be nonnegative")
    if codomain_delta < 0:
        raise DomainError("codomain_delta must be nonnegative")
    Q = hypercube(n)
    K = cech_complex(Q, r)
    L = cech_complex(Q, r + codomain_delta)
    maps = [coordinate_projection(n, i) for i in range(n + 1)]
    for i in range(1, n + 1):
        for h in (maps[i - 1], maps[i]):
            bad = _first_non_simplicial(h, K, L)
            if bad is not None:
                return ChainVerdict(n, r, codomain_delta, False, i, mask_to_tuple(bad),
                                    mask_to_tuple(h.image_mask(bad)), f"{h.name} not simplicial")
        res = is_contiguous(maps[i - 1], maps[i], K, L)
        if not res:
            return ChainVerdict(n, r, codomain_delta, False, i, res.witness, res.image,
                                f"p{i - 1} and p{i} not contiguous")
    if len(set(maps[n].table)) != 1:
        return ChainVerdict(n, r, codomain_delta, False, n, None, None, f"p{n} not constant")
    return ChainVerdict(n, r, codomain_delta, True)


def retraction_copy(n: int, i: int, eps: int) -> SimplicialComplex:
    """``N(I_n^{i,eps}, 3)`` on the original vertex ids of ``I_n``."""
    from .graphs import induced_subgraph, subcube_vertices

    sub = induced_subgraph(hypercube(n), subcube_vertices(n, i, eps))
    return cech_complex(sub, 3).relabel(sub.labels)
