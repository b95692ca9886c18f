"""Closed-form counts for hypercube Čech complexes and the registry of known
homology for N(I_n, r)."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DomainError

POINT = "point"
WEDGE = "wedge"
BETTI = "betti"


def alpha(m_minus_1: int) -> int:
    """``(k - 1)**2`` where ``k`` is the number of set bits of ``m - 1``.

    This is the rank added to H2 when vertex ``m - 1`` joins the prefix graph.
    """
    if m_minus_1 < 1:
        raise DomainError("alpha is defined for m - 1 >= 1")
    return (m_minus_1.bit_count() - 1) ** 2


def betti2_hypercube(n: int) -> int:
    """Number of 2-spheres in the wedge N(I_n, 2)."""
    if n < 2:
        raise DomainError("betti2_hypercube needs n >= 2")
    return 2 ** (n - 2) * (n * n - 3 * n + 4) - 1


def betti1_hypercube(n: int) -> int:
    """Cycle rank of I_n: edges minus vertices plus one."""
    if n < 2:
        raise DomainError("betti1_hypercube needs n >= 2")
    return n * 2 ** (n - 1) - 2**n + 1


@dataclass(frozen=True)
class TableEntry:
    """Known reduced homology of N(I_n, r).

    ``kind`` is ``point`` (contractible), ``wedge`` (``count`` spheres of
    dimension ``sphere_dim``) or ``betti`` (explicit reduced Betti numbers;
    all unlisted dimensions are zero).
    """

    n: int
    r: int
    kind: str
    count: int = 0
    sphere_dim: int = -1
    betti: dict[int, int] = field(default_factory=dict)

    def betti_map(self) -> dict[int, int]:
        if self.kind == POINT:
            return {}
        if self.kind == WEDGE:
            return {self.sphere_dim: self.count}
        return dict(self.betti)

    def describe(self) -> str:
        if self.kind == POINT:
            return "*"
        if self.kind == WEDGE:
            sphere = f"S^{self.sphere_dim}"
            return sphere if self.count == 1 else f"v_{self.count} {sphere}"
        return "; ".join(f"b{d}={b}" for d, b in sorted(self.betti.items()))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "kind": self.kind,
            "describe": self.describe(),
            "betti": {str(d): b for d, b in sorted(self.betti_map().items())},
        }


def _wedge(n, r, count, dim):
    return TableEntry(n, r, WEDGE, count=count, sphere_dim=dim)


def _point(n, r):
    return TableEntry(n, r, POINT)


def _betti(n, r, **b):
    return TableEntry(n, r, BETTI, betti={int(k[1:]): v for k, v in b.items()})


def table_registry() -> list[TableEntry]:
    """Every populated cell of the table of known homotopy types, rows r = 0..8,
    columns n = 1..8.  Blank cells are absent."""
    cells = [
        # row r=0: disjoint points, v_{2^n - 1} S^0
        _wedge(1, 0, 1, 0),  # (r=0, n=1) S^0
        _wedge(2, 0, 3, 0),  # (r=0, n=2)
        _wedge(3, 0, 7, 0),  # (r=0, n=3)
        _wedge(4, 0, 15, 0),  # (r=0, n=4)
        _wedge(5, 0, 31, 0),  # (r=0, n=5)
        _wedge(6, 0, 63, 0),  # (r=0, n=6)
        _wedge(7, 0, 127, 0),  # (r=0, n=7)
        _wedge(8, 0, 255, 0),  # (r=0, n=8)
        # row r=1: the graph itself, a wedge of circles
        _point(1, 1),  # (r=1, n=1) *
        _wedge(2, 1, 1, 1),  # (r=1, n=2) S^1
        _wedge(3, 1, 5, 1),  # (r=1, n=3)
        _wedge(4, 1, 17, 1),  # (r=1, n=4)
        _wedge(5, 1, 49, 1),  # (r=1, n=5)
        _wedge(6, 1, 129, 1),  # (r=1, n=6)
        _wedge(7, 1, 321, 1),  # (r=1, n=7)
        _wedge(8, 1, 769, 1),  # (r=1, n=8)
        # row r=2: wedges of 2-spheres
        _point(1, 2),  # (r=2, n=1) *
        _wedge(2, 2, 1, 2),  # (r=2, n=2) S^2
        _wedge(3, 2, 7, 2),  # (r=2, n=3)
        _wedge(4, 2, 31, 2),  # (r=2, n=4)
        _wedge(5, 2, 111, 2),  # (r=2, n=5)
        _wedge(6, 2, 351, 2),  # (r=2, n=6)
        _wedge(7, 2, 1023, 2),  # (r=2, n=7)
        _wedge(8, 2, 2815, 2),  # (r=2, n=8)
        # row r=3
        _point(1, 3),  # (r=3, n=1) *
        _point(2, 3),  # (r=3, n=2) *
        _wedge(3, 3, 3, 4),  # (r=3, n=3) v_3 S^4
        _betti(4, 3, b3=1, b4=24),  # (r=3, n=4)
        _betti(5, 3, b3=9, b4=120),  # (r=3, n=5)
        # row r=4
        _point(1, 4),  # (r=4, n=1) *
        _point(2, 4),  # (r=4, n=2) *
        _wedge(3, 4, 1, 6),  # (r=4, n=3) S^6
        _betti(4, 4, b4=1, b6=10),  # (r=4, n=4)
        _betti(5, 4, b4=11, b6=60),  # (r=4, n=5)
        # row r=5
        _point(1, 5),  # (r=5, n=1) *
        _point(2, 5),  # (r=5, n=2) *
        _point(3, 5),  # (r=5, n=3) *
        _betti(4, 5, b10=7),  # (r=5, n=4)
        # row r=6
        _point(1, 6),  # (r=6, n=1) *
        _point(2, 6),  # (r=6, n=2) *
        _point(3, 6),  # (r=6, n=3) *
        _wedge(4, 6, 1, 14),  # (r=6, n=4) S^14
        # row r=7
        _point(1, 7),  # (r=7, n=1) *
        _point(2, 7),  # (r=7, n=2) *
        _point(3, 7),  # (r=7, n=3) *
        _point(4, 7),  # (r=7, n=4) *
        # row r=8
        _point(1, 8),  # (r=8, n=1) *
        _point(2, 8),  # (r=8, n=2) *
        _point(3, 8),  # (r=8, n=3) *
        _point(4, 8),  # (r=8, n=4) *
        _wedge(5, 8, 1, 30),  # (r=8, n=5) S^30
    ]
    return sorted(cells, key=lambda e: (e.n, e.r))


def registry_entry(n: int, r: int) -> TableEntry | None:
    for e in table_registry():
        if (e.n, e.r) == (n, r):
            return e
    return None


def estimated_face_count(n: int, r: int) -> int:
    """Upper bound on the number of faces of N(I_n, r): the sum over maximal
    faces of ``2**|g| - 1``, so shared faces are counted repeatedly."""
    from .complexes import cech_complex
    from .graphs import hypercube

    return cech_complex(hypercube(n), r).face_count_upper_bound()


# -- labelled predictions -----------------------------------------------------


@dataclass(frozen=True)
class Prediction:
    """A conjectured value, never an expectation."""

    n: int
    r: int
    quantity: str
    value: object
    label: str = "conjecture"

    def to_dict(self) -> dict:
        v = list(self.value) if isinstance(self.value, (tuple, frozenset, set)) else self.value
        return {"n": self.n, "r": self.r, "quantity": self.quantity, "value": v, "label": self.label}


def predicted_nonzero_dims(n: int, r: int) -> Prediction | None:
    """Conjectured dimensions of nonzero reduced homology, where the
    conjecture applies (r >= 2)."""
    if r < 2:
        return None
    k, odd = divmod(r, 2)
    if not odd and n >= k + 1:
        return Prediction(n, r, "nonzero_homology_dims", tuple(sorted({r, 2 * (2**k - 1)})))
    if odd and n >= k + 2:
        return Prediction(n, r, "nonzero_homology_dims", tuple(sorted({r, 3 * 2**k - 2})))
    return None


def predicted_collapsibility(n: int, r: int) -> Prediction | None:
    """Conjectured collapsibility number of N(I_n, r), where stated (r >= 2)."""
    if r < 2:
        return None
    k, odd = divmod(r, 2)
    if not odd and n >= k + 1:
        return Prediction(n, r, "collapsibility_number", 2 ** (k + 1) - 1)
    if odd and n >= k + 2:
        return Prediction(n, r, "collapsibility_number", 3 * 2**k - 1)
    return None
