"""Tropical surfaces: regular delta-complexes with integer structure
constants, exact spectral classification, combinatorial blow-ups, sheaf
sections as balanced integer cocycles, manifold-with-fins decompositions,
orientation double covers, and windowed obstruction search."""

from .blowup import BlowupRecord, blow_up_at, robustify
from .complex_core import (
    DeltaComplex2,
    Edge,
    EdgeStar,
    Facet,
    build_complex,
    edge_degree,
    edge_star,
    parse_fixture,
    serialize,
)
from .cover import CoverResult, orientation_double_cover
from .inertia import (
    Inertia,
    SymmetricRationalMatrix,
    congruence,
    inertia,
    inertia_of_rows,
)
from .recognizer import (
    Decomposition,
    DecompositionReport,
    Subcomplex,
    find_decomposition,
    parse_decomposition,
    serialize_decomposition,
    verify_decomposition,
)
from .search import (
    Mode,
    ObstructionReport,
    SearchOutcome,
    SearchSpec,
    obstruction_report,
    search,
)
from .sheaf import (
    SectionOfD,
    SheafSummary,
    VertexPotential,
    check_all_but_one,
    class_in_H1,
    global_linear_functions,
    max_principle_probe,
    restrict_to_facet,
    sections_of_D,
)
from .topology import (
    CohomologySummary,
    LinkGraph,
    betti_numbers,
    euler_characteristic,
    is_closed_surface,
    is_connected_codim1,
    is_locally_connected_codim1,
    orientability,
    vertex_link,
)
from .tropical import (
    Classification,
    StructureConstants,
    Verdict,
    WeakTropicalSurface,
    all_ones,
    attach_constants,
    classify,
    classify_constants,
    local_matrix,
)

__version__ = "0.1.0"
