"""Čech complexes of graphs: construction, exact homology, persistence,
collapsibility bounds and contiguity checks, with hypercubes as the main
example."""

from .collapse import (
    CollapseSequence,
    CollapseStep,
    MaximalOrder,
    collapsibility_bounds,
    d_prec,
    elementary_collapse,
    is_d_collapsible,
    minimal_exclusion_sequence,
    refine_order,
    verify_sequence,
)
from .complexes import (
    Cover,
    SimplicialComplex,
    boundary_subcomplex,
    cech_complex,
    deletion,
    euler_characteristic,
    join,
    link,
    nerve_of_cover,
    star,
)
from .errors import CechError, ConnectivityError, DomainError, FreeFaceError, SizeError
from .formulas import TableEntry, alpha, betti1_hypercube, betti2_hypercube, table_registry
from .graphs import Graph, cycle, hypercube, prefix_graph
from .homology import Z, Z2, HomologySummary, betti, reduced_homology, smith_normal_form
from .persistence import (
    Barcode,
    Filtration,
    VertexMap,
    build_filtration,
    compute_barcode,
    contiguity_chain,
    is_contiguous,
    is_simplicial,
)

__all__ = [
    "Barcode",
    "CechError",
    "CollapseSequence",
    "CollapseStep",
    "ConnectivityError",
    "Cover",
    "DomainError",
    "Filtration",
    "FreeFaceError",
    "Graph",
    "HomologySummary",
    "MaximalOrder",
    "SimplicialComplex",
    "SizeError",
    "TableEntry",
    "VertexMap",
    "Z",
    "Z2",
    "alpha",
    "betti",
    "betti1_hypercube",
    "betti2_hypercube",
    "boundary_subcomplex",
    "build_filtration",
    "cech_complex",
    "collapsibility_bounds",
    "compute_barcode",
    "contiguity_chain",
    "cycle",
    "d_prec",
    "deletion",
    "elementary_collapse",
    "euler_characteristic",
    "hypercube",
    "is_contiguous",
    "is_d_collapsible",
    "is_simplicial",
    "join",
    "link",
    "minimal_exclusion_sequence",
    "nerve_of_cover",
    "prefix_graph",
    "reduced_homology",
    "refine_order",
    "smith_normal_form",
    "star",
    "table_registry",
    "verify_sequence",
]

__version__ = "0.1.0"
