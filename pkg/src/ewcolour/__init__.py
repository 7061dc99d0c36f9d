"""Embedded-graph machinery for weighted edge-width, E1-acyclic list
colouring by reduction, and discharging verification."""

from .colouring import (
    Colouring,
    ColouringError,
    ListAssignment,
    exact_solve,
    is_e1_acyclic,
    is_proper,
    rainbow_base,
)
from .discharging import (
    ChargeLedger,
    DischargeReport,
    apply_rules,
    initial_charges,
    required_rho,
    verify_final,
)
from .edgewidth import (
    WeightedWidthResult,
    weighted_edge_width_fast,
    weighted_edge_width_oracle,
)
from .embedding import (
    CycleInEmbedding,
    Edge,
    EdgeClassing,
    EmbeddedGraph,
    EmbeddingError,
    add_cofacial_edge,
    euler_genus,
    is_contractible,
    replace_star,
    trace_faces,
)
from .generators import GeneratorSpec, generate
from .reducer import (
    ConfigKind,
    Configuration,
    ReductionError,
    ReductionStep,
    detect_configuration,
    extend_at_vertex,
    recolour_vertex,
    reduce_once,
    solve_by_reduction,
)

__all__ = [
    "ChargeLedger",
    "Colouring",
    "ColouringError",
    "ConfigKind",
    "Configuration",
    "CycleInEmbedding",
    "DischargeReport",
    "Edge",
    "EdgeClassing",
    "EmbeddedGraph",
    "EmbeddingError",
    "GeneratorSpec",
    "ListAssignment",
    "ReductionError",
    "ReductionStep",
    "WeightedWidthResult",
    "add_cofacial_edge",
    "apply_rules",
    "detect_configuration",
    "euler_genus",
    "exact_solve",
    "extend_at_vertex",
    "generate",
    "initial_charges",
    "is_contractible",
    "is_e1_acyclic",
    "is_proper",
    "rainbow_base",
    "recolour_vertex",
    "reduce_once",
    "replace_star",
    "required_rho",
    "solve_by_reduction",
    "trace_faces",
    "verify_final",
    "weighted_edge_width_fast",
    "weighted_edge_width_oracle",
]
