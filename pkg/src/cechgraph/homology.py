"""Exact reduced simplicial homology over Z and over Z/2.

Ranks are computed dimension by dimension from the top down with the clearing
optimisation: a face that is the pivot row of a reduced boundary of the next
dimension is a cycle and its column can be skipped.  Over Z this is only done
for pivots equal to +-1, which keeps the change of basis unimodular.
"""

from __future__ import annotations

import heapq
import json
import logging
from dataclasses import dataclass, field
from math import gcd
from typing import Sequence

import numpy as np

from .complexes import DEFAULT_FACE_BUDGET, SimplicialComplex
from .errors import DomainError, SizeError

log = logging.getLogger(__name__)

Z = "z"
Z2 = "z2"
AUTO_Z_LIMIT = 100_000
_WORD = 1 << 63


@dataclass(frozen=True)
class BoundaryMatrix:
    """Sparse signed boundary ``C_d -> C_{d-1}``; columns hold ``(row, sign)`` pairs."""

    dim: int
    n_rows: int
    columns: list[list[tuple[int, int]]]
    row_faces: list[int] = field(default_factory=list, repr=False)
    col_faces: list[int] = field(default_factory=list, repr=False)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_rows, len(self.columns))

    def to_dense(self) -> np.ndarray:
        A = np.zeros(self.shape, dtype=np.int64)
        for j, col in enumerate(self.columns):
            for i, s in col:
                A[i, j] = s
        return A


def _boundary_columns(col_faces: Sequence[int], row_index: dict[int, int]) -> list[list[tuple[int, int]]]:
    cols = []
    for f in col_faces:
        col = []
        g, sign = f, 1
        while g:
            low = g & -g
            col.append((row_index[f ^ low], sign))
            sign = -sign
            g ^= low
        cols.append(col)
    return cols


def boundary_matrix(K: SimplicialComplex, d: int, budget: int = DEFAULT_FACE_BUDGET) -> BoundaryMatrix:
    """Column for ``sigma`` is the alternating sum of its faces, dropping the i-th vertex with sign ``(-1)**i``."""
    if d < 1:
        raise DomainError("boundary_matrix needs d >= 1")
    rows = K.face_masks(d - 1, budget) if d - 1 <= K.dim else []
    cols = K.face_masks(d, budget) if d <= K.dim else []
    index = {m: i for i, m in enumerate(rows)}
    return BoundaryMatrix(d, len(rows), _boundary_columns(cols, index), list(rows), list(cols))


# -- Smith normal form -----------------------------------------------------


@dataclass(frozen=True)
class SmithForm:
    rank: int
    invariant_factors: tuple[int, ...] = ()
    max_entry: int = 1

    @property
    def escalated(self) -> bool:
        """True when some intermediate entry no longer fit a signed 64-bit word."""
        return self.max_entry >= _WORD


def _as_columns(M) -> tuple[list[dict[int, int]], int]:
    if isinstance(M, BoundaryMatrix):
        return [dict(c) for c in M.columns], M.n_rows
    A = np.asarray(M, dtype=object)
    if A.ndim != 2:
        raise DomainError("matrix must be two-dimensional")
    cols = []
    for j in range(A.shape[1]):
        cols.append({i: int(A[i, j]) for i in range(A.shape[0]) if A[i, j] != 0})
    return cols, A.shape[0]


def _diagonal_to_invariant(diag: list[int]) -> list[int]:
    """Turn a nonzero diagonal into its divisibility chain."""
    d = [abs(x) for x in diag]
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            g = gcd(d[i], d[j])
            d[i], d[j] = g, d[i] // g * d[j]
    return d


def _dense_smith(cols: list[dict[int, int]]) -> tuple[list[int], int]:
    """Diagonal entries of the Smith form of a (small) residual matrix."""
    row_ids = sorted({i for c in cols for i in c})
    if not row_ids:
        return [], 1
    pos = {r: k for k, r in enumerate(row_ids)}
    A = [[0] * len(cols) for _ in row_ids]
    for j, c in enumerate(cols):
        for i, v in c.items():
            A[pos[i]][j] = v
    m, n = len(A), len(cols)
    diag: list[int] = []
    biggest = 1
    t = 0
    while t < min(m, n):
        nz = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        A[t], A[pi] = A[pi], A[t]
        for row in A:
            row[t], row[pj] = row[pj], row[t]
        while True:
            done = True
            p = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    if q:
                        Ai, At = A[i], A[t]
                        for j in range(t, n):
                            Ai[j] -= q * At[j]
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    if q:
                        for row in A[t:]:
                            row[j] -= q * row[t]
                    if A[t][j]:
                        done = False
            if done:
                break
            # bring the smallest remaining entry of row/column t to the pivot
            cand = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
            cand += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
            _, pi, pj = min(cand)
            A[t], A[pi] = A[pi], A[t]
            for row in A:
                row[t], row[pj] = row[pj], row[t]
        biggest = max(biggest, max((abs(x) for row in A for x in row), default=1))
        diag.append(A[t][t])
        t += 1
    return diag, biggest


def _eliminate_units(cols: list[dict[int, int]]) -> tuple[int, list[dict[int, int]], int]:
    """Sparse elimination on +-1 pivots, cheapest column first.

    Each step is a unimodular column sweep along the pivot row followed by
    dropping the pivot row and column; returns (rank found, residual columns,
    largest entry seen).
    """
    cols = [dict(c) for c in cols]
    rows: dict[int, set[int]] = {}
    for j, c in enumerate(cols):
        for i in c:
            rows.setdefault(i, set()).add(j)
    alive = set(j for j, c in enumerate(cols) if c)
    heap = [(len(cols[j]), j) for j in alive]
    heapq.heapify(heap)
    rank = 0
    biggest = 1
    while heap:
        nnz, j = heapq.heappop(heap)
        if j not in alive or nnz != len(cols[j]):
            continue
        col = cols[j]
        units = [i for i, v in col.items() if v in (1, -1)]
        if not units:
            continue
        pr = min(units, key=lambda i: (len(rows[i]), i))
        u = col[pr]
        for k in sorted(rows[pr] - {j}):
            other = cols[k]
            fac = other[pr] * u
            for i, v in col.items():
                nv = other.get(i, 0) - fac * v
                if nv:
                    if i not in other:
                        rows.setdefault(i, set()).add(k)
                    other[i] = nv
                    if nv >= biggest or -nv >= biggest:
                        biggest = abs(nv)
                elif i in other:
                    del other[i]
                    rows[i].discard(k)
            if other:
                heapq.heappush(heap, (len(other), k))
            else:
                alive.discard(k)
        for i in col:
            rows[i].discard(j)
        alive.discard(j)
        cols[j] = {}
        rank += 1
    residual = [cols[j] for j in sorted(alive) if cols[j]]
    return rank, residual, biggest


def smith_normal_form(M) -> SmithForm:
    """Rank and nontrivial invariant factors of an integer matrix.

    Accepts a :class:`BoundaryMatrix` or any 2-d array-like of integers.
    Entries are Python integers throughout, so coefficient growth past a
    machine word is absorbed exactly; ``max_entry`` records how far it went.
    """
    cols, _ = _as_columns(M)
    rank, residual, biggest = _eliminate_units(cols)
    if residual:
        log.debug("dense Smith form on a %d-column residual", len(residual))
        diag, big2 = _dense_smith(residual)
        biggest = max(biggest, big2)
        rank += len(diag)
        factors = [f for f in _diagonal_to_invariant(diag) if f > 1]
    else:
        factors = []
    if biggest >= _WORD:
        log.info("Smith form entries reached %d bits; arbitrary precision in use", biggest.bit_length())
    return SmithForm(rank, tuple(sorted(factors)), biggest)


# -- rank engines with clearing --------------------------------------------


def _rank_z2(col_faces, row_index, cleared: set[int]) -> tuple[int, set[int]]:
    """Rank over Z/2 with columns packed into Python ints; returns pivot rows too."""
    pivots: dict[int, int] = {}
    for j, f in enumerate(col_faces):
        if j in cleared:
            continue
        c = 0
        g = f
        while g:
            low = g & -g
            c |= 1 << row_index[f ^ low]
            g ^= low
        while c:
            top = c.bit_length() - 1
            p = pivots.get(top)
            if p is None:
                pivots[top] = c
                break
            c ^= p
    return len(pivots), set(pivots)


def _rank_z(col_faces, row_index, cleared: set[int]) -> tuple[int, tuple[int, ...], set[int], int]:
    """Column echelon reduction over Z with gcd steps on non-unit clashes.

    Returns (rank, invariant factors > 1, rows of unit pivots, max entry).
    """
    pivots: dict[int, dict[int, int]] = {}
    biggest = 1
    nonunit = False
    for j, f in enumerate(col_faces):
        if j in cleared:
            continue
        c: dict[int, int] = {}
        g, sign = f, 1
        while g:
            low = g & -g
            c[row_index[f ^ low]] = sign
            sign = -sign
            g ^= low
        while c:
            top = max(c)
            p = pivots.get(top)
            if p is None:
                pivots[top] = c
                if c[top] not in (1, -1):
                    nonunit = True
                break
            a, x = p[top], c[top]
            if a in (1, -1):
                fac = x * a
                for i, v in p.items():
                    nv = c.get(i, 0) - fac * v
                    if nv:
                        c[i] = nv
                        if nv >= biggest or -nv >= biggest:
                            biggest = abs(nv)
                    else:
                        c.pop(i, None)
            else:
                # unimodular 2x2 column step: new pivot carries gcd(a, x)
                gg, s, t = _xgcd(a, x)
                newp: dict[int, int] = {}
                newc: dict[int, int] = {}
                ag, xg = a // gg, x // gg
                for i in set(p) | set(c):
                    pv, cv = p.get(i, 0), c.get(i, 0)
                    v1 = s * pv + t * cv
                    v2 = xg * pv - ag * cv
                    if v1:
                        newp[i] = v1
                        biggest = max(biggest, abs(v1))
                    if v2:
                        newc[i] = v2
                        biggest = max(biggest, abs(v2))
                pivots[top] = newp
                c = newc
    unit_rows = {i for i, p in pivots.items() if p[i] in (1, -1)}
    if nonunit or len(unit_rows) != len(pivots):
        snf = smith_normal_form_columns(list(pivots.values()))
        return snf.rank, snf.invariant_factors, unit_rows, max(biggest, snf.max_entry)
    return len(pivots), (), unit_rows, biggest


def smith_normal_form_columns(cols: list[dict[int, int]]) -> SmithForm:
    rank, residual, biggest = _eliminate_units(cols)
    factors: list[int] = []
    if residual:
        diag, big2 = _dense_smith(residual)
        biggest = max(biggest, big2)
        rank += len(diag)
        factors = [f for f in _diagonal_to_invariant(diag) if f > 1]
    return SmithForm(rank, tuple(sorted(factors)), biggest)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """``g, s, t`` with ``s*a + t*b == g == gcd(a, b) > 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    x, y = a, b
    while y:
        q = x // y
        x, y = y, x - q * y
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if x < 0:
        x, s0, t0 = -x, -s0, -t0
    return x, s0, t0


# -- homology summaries ------------------------------------------------------


@dataclass(frozen=True)
class HomologySummary:
    """Per-dimension homology; ``betti_z``/``torsion`` are None for Z/2-only runs."""

    betti_z2: tuple[int, ...]
    betti_z: tuple[int, ...] | None = None
    torsion: tuple[tuple[int, ...], ...] | None = None
    reduced: bool = True

    @property
    def top(self) -> int:
        return len(self.betti_z2) - 1

    def betti(self, d: int, coefficients: str = Z) -> int:
        seq = self.betti_z2 if coefficients == Z2 or self.betti_z is None else self.betti_z
        return seq[d] if 0 <= d < len(seq) else 0

    def torsion_at(self, d: int) -> tuple[int, ...]:
        if self.torsion is None or not 0 <= d < len(self.torsion):
            return ()
        return self.torsion[d]

    def nonzero_dims(self) -> list[int]:
        out = []
        for d in range(len(self.betti_z2)):
            if self.betti(d) or self.betti_z2[d] or self.torsion_at(d):
                out.append(d)
        return out

    def betti_map(self, coefficients: str = Z) -> dict[int, int]:
        return {d: self.betti(d, coefficients) for d in range(len(self.betti_z2)) if self.betti(d, coefficients)}

    def is_acyclic(self) -> bool:
        return not self.nonzero_dims()

    def rows(self) -> list[dict]:
        out = []
        for d in range(len(self.betti_z2)):
            out.append({
                "dim": d,
                "betti_z": None if self.betti_z is None else self.betti_z[d],
                "torsion": None if self.torsion is None else list(self.torsion[d]),
                "betti_z2": self.betti_z2[d],
            })
        return out

    def to_json(self) -> str:
        return json.dumps({"reduced": self.reduced, "homology": self.rows()}, sort_keys=True)


def choose_coefficients(K: SimplicialComplex, coefficients: str | None = None) -> str:
    """``z`` up to ``AUTO_Z_LIMIT`` faces, ``z2`` above, unless forced."""
    if coefficients in (Z, Z2):
        return coefficients
    if coefficients not in (None, "auto"):
        raise DomainError(f"unknown coefficients {coefficients!r}")
    return Z if K.face_count_upper_bound() <= AUTO_Z_LIMIT or K.n_faces() <= AUTO_Z_LIMIT else Z2


def _by_dim(K: SimplicialComplex, budget: int) -> list[list[int]]:
    return [K.face_masks(d, budget) for d in range(K.dim + 1)]


def _ranks_z2(levels: list[list[int]]) -> dict[int, int]:
    ranks: dict[int, int] = {}
    cleared: set[int] = set()
    for d in range(len(levels) - 1, 0, -1):
        index = {m: i for i, m in enumerate(levels[d - 1])}
        ranks[d], cleared = _rank_z2(levels[d], index, cleared)
        log.debug("z2 rank of boundary %d: %d", d, ranks[d])
    return ranks


def _ranks_z(levels: list[list[int]]) -> tuple[dict[int, int], dict[int, tuple[int, ...]]]:
    ranks: dict[int, int] = {}
    factors: dict[int, tuple[int, ...]] = {}
    cleared: set[int] = set()
    for d in range(len(levels) - 1, 0, -1):
        index = {m: i for i, m in enumerate(levels[d - 1])}
        ranks[d], factors[d], cleared, big = _rank_z(levels[d], index, cleared)
        if big >= _WORD:
            log.info("boundary %d needed entries of %d bits", d, big.bit_length())
    return ranks, factors


def reduced_homology(
    K: SimplicialComplex,
    coefficients: str | None = Z,
    budget: int = DEFAULT_FACE_BUDGET,
    reduced: bool = True,
) -> HomologySummary:
    """Homology of ``K`` (reduced by default) in every dimension ``0..dim K``.

    With Z coefficients the Z/2 Betti numbers are computed as well.
    """
    if K.is_void():
        raise DomainError("homology of the void complex is not defined here")
    coefficients = choose_coefficients(K, coefficients)
    levels = _by_dim(K, budget)
    f = [len(x) for x in levels]
    top = len(levels) - 1
    aug = 1 if reduced else 0
    r2 = _ranks_z2(levels)
    b2 = tuple(f[d] - r2.get(d, 0) - r2.get(d + 1, 0) - (aug if d == 0 else 0) for d in range(top + 1))
    if coefficients == Z2:
        return HomologySummary(b2, None, None, reduced)
    rz, fz = _ranks_z(levels)
    bz = tuple(f[d] - rz.get(d, 0) - rz.get(d + 1, 0) - (aug if d == 0 else 0) for d in range(top + 1))
    tors = tuple(fz.get(d + 1, ()) for d in range(top + 1))
    return HomologySummary(b2, bz, tors, reduced)


def betti(K: SimplicialComplex, d: int, coefficients: str | None = Z, budget: int = DEFAULT_FACE_BUDGET) -> int:
    """Reduced Betti number in one dimension, from the two boundary maps around it."""
    if K.is_void():
        raise DomainError("homology of the void complex is not defined here")
    if d < 0 or d > K.dim:
        return 0
    coefficients = choose_coefficients(K, coefficients)
    here = K.face_masks(d, budget)
    above = K.face_masks(d + 1, budget) if d < K.dim else []
    below = K.face_masks(d - 1, budget) if d > 0 else []
    here_index = {m: i for i, m in enumerate(here)}
    below_index = {m: i for i, m in enumerate(below)}
    if coefficients == Z2:
        r_up, cleared = _rank_z2(above, here_index, set())
        r_down = _rank_z2(here, below_index, cleared)[0] if d > 0 else 1
    else:
        r_up, _, cleared, _ = _rank_z(above, here_index, set())
        r_down = _rank_z(here, below_index, cleared)[0] if d > 0 else 1
    return len(here) - r_up - r_down


def check_summary(K: SimplicialComplex, h: HomologySummary) -> None:
    """Assert Euler and universal-coefficient consistency; raises AssertionError."""
    f = K.f_vector()
    chi = sum((-1) ** d * x for d, x in enumerate(f))
    shift = 1 if h.reduced else 0
    assert chi == shift + sum((-1) ** d * b for d, b in enumerate(h.betti_z2)), "Euler (Z/2)"
    if h.betti_z is not None:
        assert chi == shift + sum((-1) ** d * b for d, b in enumerate(h.betti_z)), "Euler (Z)"
        for d in range(len(h.betti_z2)):
            even = sum(1 for t in h.torsion_at(d) if t % 2 == 0)
            even_below = sum(1 for t in h.torsion_at(d - 1) if t % 2 == 0) if d else 0
            assert h.betti_z2[d] == h.betti_z[d] + even + even_below, f"UCT at {d}"
    assert all(b >= 0 for b in h.betti_z2)


def require_within_budget(K: SimplicialComplex, budget: int) -> int:
    n = K.n_faces(budget)
    if n > budget:
        raise SizeError(f"complex has {n} faces, over the budget of {budget}")
    return n
