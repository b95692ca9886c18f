"""Elementary d-collapses, exhaustive d-collapsibility search, and the
minimal-exclusion-sequence bound on the collapsibility number."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .complexes import DEFAULT_FACE_BUDGET, SimplicialComplex, mask_to_tuple, to_mask
from .errors import DomainError, FreeFaceError, SizeError
from .homology import reduced_homology

COLLAPSIBLE = "collapsible"
IMPOSSIBLE = "impossible"
UNDECIDED = "undecided"


@dataclass(frozen=True)
class CollapseStep:
    free: tuple[int, ...]
    maximal: tuple[int, ...]

    def as_dict(self) -> dict:
        return {"free": list(self.free), "maximal": list(self.maximal)}


@dataclass(frozen=True)
class CollapseSequence:
    d: int
    steps: tuple[CollapseStep, ...]

    def __len__(self):
        return len(self.steps)

    def to_json(self) -> str:
        return json.dumps([s.as_dict() for s in self.steps])

    @classmethod
    def from_json(cls, d: int, text: str) -> "CollapseSequence":
        """Accepts a list of steps, or an object holding one under ``sequence``."""
        try:
            data = json.loads(text)
            if isinstance(data, dict):
                data = data["sequence"]
            return cls(d, tuple(CollapseStep(tuple(s["free"]), tuple(s["maximal"])) for s in data))
        except (ValueError, KeyError, TypeError) as e:
            raise DomainError(f"malformed collapse sequence JSON: {e}") from None

    @classmethod
    def from_free_faces(cls, K: SimplicialComplex, d: int, free_faces: Iterable[Iterable[int]]) -> "CollapseSequence":
        """Fill in the maximal cofaces by replaying the given free faces on ``K``."""
        steps = []
        for sigma in free_faces:
            m = to_mask(sigma)
            cof = K.maximal_cofaces(m)
            if len(cof) != 1:
                raise FreeFaceError(mask_to_tuple(m), [mask_to_tuple(c) for c in cof])
            steps.append(CollapseStep(mask_to_tuple(m), mask_to_tuple(cof[0])))
            K = _collapse_masks(K, m, cof[0])
        return cls(d, tuple(steps))


def _collapse_masks(K: SimplicialComplex, sigma: int, gamma: int) -> SimplicialComplex:
    rest = [g for g in K.maximal_masks if g != gamma]
    s = sigma
    while s:
        low = s & -s
        rest.append(gamma & ~low)
        s ^= low
    return SimplicialComplex.from_masks(rest)


def elementary_collapse(K: SimplicialComplex, sigma: Iterable[int], d: int) -> SimplicialComplex:
    """Remove every face between ``sigma`` and its unique maximal coface."""
    m = to_mask(sigma)
    if not m:
        raise DomainError("the free face must be nonempty")
    if m.bit_count() > d:
        raise DomainError(f"free face {mask_to_tuple(m)} has more than d={d} vertices")
    cof = K.maximal_cofaces(m)
    if len(cof) != 1:
        raise FreeFaceError(mask_to_tuple(m), [mask_to_tuple(c) for c in cof])
    return _collapse_masks(K, m, cof[0])


@dataclass(frozen=True)
class ReplayResult:
    ok: bool
    failed_step: int | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def verify_sequence(K: SimplicialComplex, seq: CollapseSequence) -> ReplayResult:
    """Replay ``seq`` on ``K``; ok iff every step is a valid d-collapse and K ends void."""
    for k, step in enumerate(seq.steps):
        m = to_mask(step.free)
        if not m or m.bit_count() > seq.d:
            return ReplayResult(False, k, f"free face {step.free} has size {m.bit_count()} > d={seq.d}")
        cof = K.maximal_cofaces(m)
        if len(cof) != 1:
            return ReplayResult(False, k, f"{step.free} has {len(cof)} maximal cofaces")
        if step.maximal and to_mask(step.maximal) != cof[0]:
            return ReplayResult(False, k, f"recorded coface {step.maximal} is not {mask_to_tuple(cof[0])}")
        K = _collapse_masks(K, m, cof[0])
    if not K.is_void():
        return ReplayResult(False, len(seq.steps), f"{len(K.maximal_masks)} maximal faces remain")
    return ReplayResult(True)


def free_faces(K: SimplicialComplex, d: int) -> list[tuple[int, int]]:
    """All ``(sigma, gamma)`` with ``|sigma| <= d`` and ``gamma`` its only maximal coface.

    Ordered by size of ``sigma``, then lexicographically.
    """
    out = []
    masks = K.maximal_masks
    for gi, g in enumerate(masks):
        others = [h for hi, h in enumerate(masks) if hi != gi]
        verts = mask_to_tuple(g)
        for k in range(1, min(d, len(verts)) + 1):
            for sub in combinations(verts, k):
                s = to_mask(sub)
                if not any(s & ~h == 0 for h in others):
                    out.append((s, g))
    out.sort(key=lambda p: (p[0].bit_count(), mask_to_tuple(p[0])))
    return out


@dataclass(frozen=True)
class CollapseSearch:
    verdict: str
    sequence: CollapseSequence | None = None
    states: int = 0

    def __bool__(self):
        return self.verdict == COLLAPSIBLE


def is_d_collapsible(
    K: SimplicialComplex,
    d: int,
    max_states: int = 200_000,
    face_limit: int = 10_000,
) -> CollapseSearch:
    """Decide d-collapsibility by depth-first search over collapse sequences.

    Complexes already shown to fail are remembered by their maximal-face
    antichain.  Running out of ``max_states`` gives an ``undecided`` verdict,
    never a false ``impossible``.
    """
    if d < 1:
        raise DomainError("d must be at least 1 (free faces are nonempty)")
    n = K.n_faces(budget=max(face_limit, 1))
    if n > face_limit:
        raise SizeError(f"exhaustive collapsibility search limited to {face_limit} faces, complex has {n}")
    if K.is_void():
        return CollapseSearch(COLLAPSIBLE, CollapseSequence(d, ()), 0)
    dead: set[tuple[int, ...]] = set()
    path: list[CollapseStep] = []
    stack = [(K, iter(free_faces(K, d)))]
    states = 1
    while stack:
        cur, it = stack[-1]
        step = next(it, None)
        if step is None:
            dead.add(cur.maximal_masks)
            stack.pop()
            if path:
                path.pop()
            continue
        s, g = step
        nxt = _collapse_masks(cur, s, g)
        if nxt.is_void():
            path.append(CollapseStep(mask_to_tuple(s), mask_to_tuple(g)))
            return CollapseSearch(COLLAPSIBLE, CollapseSequence(d, tuple(path)), states)
        if nxt.maximal_masks in dead:
            continue
        states += 1
        if states > max_states:
            return CollapseSearch(UNDECIDED, None, states)
        path.append(CollapseStep(mask_to_tuple(s), mask_to_tuple(g)))
        stack.append((nxt, iter(free_faces(nxt, d))))
    return CollapseSearch(IMPOSSIBLE, None, states)


# -- minimal exclusion sequences ----------------------------------------------


@dataclass(frozen=True)
class MaximalOrder:
    """A linear order ``gamma_1 < gamma_2 < ...`` on the maximal faces of a complex."""

    masks: tuple[int, ...]

    @classmethod
    def from_faces(cls, K: SimplicialComplex, faces: Sequence[Iterable[int]]) -> "MaximalOrder":
        masks = tuple(to_mask(f) for f in faces)
        if sorted(masks) != sorted(K.maximal_masks) or len(set(masks)) != len(masks):
            raise DomainError("order must be a permutation of the maximal faces")
        return cls(masks)

    @classmethod
    def from_indices(cls, K: SimplicialComplex, perm: Sequence[int]) -> "MaximalOrder":
        if sorted(perm) != list(range(len(K.maximal_masks))):
            raise DomainError("not a permutation of the maximal-face indices")
        return cls(tuple(K.maximal_masks[i] for i in perm))

    @classmethod
    def lexicographic(cls, K: SimplicialComplex) -> "MaximalOrder":
        return cls(tuple(K.maximal_masks))

    @classmethod
    def random(cls, K: SimplicialComplex, rng: random.Random) -> "MaximalOrder":
        masks = list(K.maximal_masks)
        rng.shuffle(masks)
        return cls(tuple(masks))

    def indices(self, K: SimplicialComplex) -> list[int]:
        pos = {m: i for i, m in enumerate(K.maximal_masks)}
        return [pos[m] for m in self.masks]

    @property
    def faces(self) -> list[tuple[int, ...]]:
        return [mask_to_tuple(m) for m in self.masks]


def _mes_mask(order: tuple[int, ...], gamma: int) -> tuple[list[int], int] | None:
    seq: list[int] = []
    seen = 0
    for gk in order:
        if gamma & ~gk == 0:
            return seq, seen
        outside = gamma & ~gk
        hit = seen & outside
        pick = hit & -hit if hit else outside & -outside
        seq.append(pick.bit_length() - 1)
        seen |= pick
    return None


def minimal_exclusion_sequence(
    K: SimplicialComplex, order: MaximalOrder, gamma: Iterable[int]
) -> tuple[tuple[int, ...], frozenset[int]]:
    """The sequence ``mes(gamma)`` and the set ``M(gamma)`` of vertices in it.

    Vertex "min" is taken in integer order of vertex ids.  Repeats are kept
    in the sequence; ``M`` is the set of distinct entries.
    """
    g = to_mask(gamma)
    if not g or not K.contains_mask(g):
        raise DomainError(f"{tuple(gamma)} is not a face of the complex")
    res = _mes_mask(order.masks, g)
    if res is None:
        raise DomainError("order does not cover the complex")
    seq, seen = res
    return tuple(seq), frozenset(mask_to_tuple(seen))


def _m_size(masks: tuple[int, ...] | list[int], g: int) -> int:
    seen = 0
    for gk in masks:
        outside = g & ~gk
        if not outside:
            break
        hit = seen & outside
        seen |= hit & -hit if hit else outside & -outside
    return seen.bit_count()


def _all_faces(K: SimplicialComplex, budget: int) -> list[int]:
    return [g for d in range(K.dim + 1) for g in K.face_masks(d, budget)]


def d_prec(K: SimplicialComplex, order: MaximalOrder, budget: int = DEFAULT_FACE_BUDGET) -> int:
    """``max |M(gamma)|`` over every face ``gamma`` of ``K``."""
    masks = order.masks
    return max((_m_size(masks, g) for g in _all_faces(K, budget)), default=0)


def _order_score(masks, faces) -> tuple[int, int]:
    best, count = 0, 0
    for g in faces:
        c = _m_size(masks, g)
        if c > best:
            best, count = c, 1
        elif c == best:
            count += 1
    return best, count


def refine_order(
    K: SimplicialComplex,
    order: MaximalOrder,
    rng: random.Random,
    steps: int = 2000,
    target: int | None = None,
    budget: int = DEFAULT_FACE_BUDGET,
) -> tuple[MaximalOrder, int]:
    """Local search over orders by random transpositions.

    A swap is kept when it does not worsen ``(d_prec, number of faces
    attaining it)``.  Stops after ``steps`` swaps or once ``d_prec <= target``.
    Returns the best order and its ``d_prec``.
    """
    faces = _all_faces(K, budget)
    cur = list(order.masks)
    score = _order_score(cur, faces)
    if len(cur) < 2:
        return MaximalOrder(tuple(cur)), score[0]
    for _ in range(steps):
        if target is not None and score[0] <= target:
            break
        i, j = rng.sample(range(len(cur)), 2)
        cur[i], cur[j] = cur[j], cur[i]
        new = _order_score(cur, faces)
        if new <= score:
            score = new
        else:
            cur[i], cur[j] = cur[j], cur[i]
    return MaximalOrder(tuple(cur)), score[0]


@dataclass(frozen=True)
class CollapsibilityBounds:
    lower: int
    upper: int
    d_prec_samples: tuple[int, ...] = ()
    seed: int | None = None
    nonzero_dims: tuple[int, ...] = ()
    refined: int | None = None
    best_order: MaximalOrder | None = None

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    def as_dict(self, K: SimplicialComplex | None = None) -> dict:
        out = {
            "lower": self.lower,
            "upper": self.upper,
            "exact": self.exact,
            "seed": self.seed,
            "d_prec_samples": list(self.d_prec_samples),
            "nonzero_homology_dims": list(self.nonzero_dims),
            "refined_d_prec": self.refined,
        }
        if K is not None and self.best_order is not None:
            out["best_order"] = self.best_order.indices(K)
        return out


def collapsibility_bounds(
    K: SimplicialComplex,
    n_orders: int = 50,
    seed: int = 0,
    coefficients: str | None = None,
    orders: Sequence[MaximalOrder] | None = None,
    refine_steps: int = 0,
) -> CollapsibilityBounds:
    """Homological lower bound and sampled minimal-exclusion upper bound.

    A complex with nonzero homology in dimension ``i`` is not i-collapsible,
    so ``lower = 1 + max i``.  The upper bound is the least ``d_prec`` over the
    orders, and at least 1 since free faces are nonempty.  With
    ``refine_steps`` the best sampled order is further improved by
    :func:`refine_order`, stopping early once it meets the lower bound.
    """
    if K.is_void():
        return CollapsibilityBounds(0, 0, (), seed, ())
    h = reduced_homology(K, coefficients)
    nz = tuple(h.nonzero_dims())
    lower = 1 + max(nz) if nz else 0
    rng = random.Random(seed)
    if orders is None:
        orders = [MaximalOrder.random(K, rng) for _ in range(n_orders)]
    samples = tuple(d_prec(K, o) for o in orders)
    if samples:
        k = min(range(len(samples)), key=samples.__getitem__)
        best, best_val = orders[k], samples[k]
    else:
        best, best_val = MaximalOrder.lexicographic(K), d_prec(K, MaximalOrder.lexicographic(K))
    refined = None
    if refine_steps > 0 and best_val > max(lower, 1):
        best, refined = refine_order(K, best, rng, refine_steps, target=max(lower, 1))
        best_val = min(best_val, refined)
    upper = max(1, best_val)
    return CollapsibilityBounds(lower, upper, samples, seed, nz, refined, best)
