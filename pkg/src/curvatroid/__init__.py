"""Exact Ollivier-Ricci curvature of the basis exchange walk on matroids.

Everything is computed in exact rational arithmetic: the down-up walk kernel,
the exchange-graph metric, optimal transport between one-step distributions,
and the closed-form lower and upper bounds with their witnessing couplings.
"""

__version__ = "0.1.0"

from .errors import (
    BadRational,
    CurvatroidError,
    DegenerateGraph,
    ElementNotInBasis,
    EmptyBasisFamily,
    InvalidBasisArgument,
    InvalidRank,
    NotABasis,
    NotAdjacent,
    ParseError,
    RankMismatch,
    TooLarge,
    UnbalancedMarginals,
    UnknownElement,
    UnknownType,
    ValidationResult,
)
from .matroid import (
    ENUMERATION_LIMIT,
    ExplicitSpec,
    GraphicSpec,
    LinearSpec,
    Mask,
    Matroid,
    MatroidSpec,
    NamedSpec,
    UniformSpec,
    basis_sort_key,
    bits,
    build_matroid,
    matrix_rank,
    validate_exchange_axiom,
)
from .catalog import CATALOG_NAMES, DISTINGUISHED_PAIRS, build_named
from .walk import (
    BasisGraph,
    Distribution,
    basis_distance,
    basis_graph,
    distance_matrix,
    transition_distribution,
)
from .transport import (
    Coupling,
    TransportProblem,
    expected_distance,
    verify_coupling,
    wasserstein1,
)
from .curvature import (
    CouplingCell,
    DownstepCoupling,
    DropWitness,
    GlobalReport,
    PairFrame,
    PairReport,
    PairWitness,
    build_downstep_coupling,
    canonical_pairs,
    compute_pair_report,
    compute_pair_witness,
    downstep_coupling_table,
    downstep_lb_pair,
    downstep_lb_via_coupling,
    exact_pair_curvature,
    global_curvature,
    make_pair_frame,
    proposition_distance_check,
    resolve_workers,
    theorem_lb_global,
    theorem_ub_pair,
    theorem_ub_values,
)
from .fileio import (
    approx_decimal,
    format_rational,
    load_input,
    parse_matroid_file,
    parse_matroid_obj,
    parse_rational,
)

__all__ = [
    "__version__",
    # errors
    "BadRational", "CurvatroidError", "DegenerateGraph", "ElementNotInBasis",
    "EmptyBasisFamily", "InvalidBasisArgument", "InvalidRank", "NotABasis",
    "NotAdjacent", "ParseError", "RankMismatch", "TooLarge",
    "UnbalancedMarginals", "UnknownElement", "UnknownType", "ValidationResult",
    # matroids
    "ENUMERATION_LIMIT", "ExplicitSpec", "GraphicSpec", "LinearSpec", "Mask",
    "Matroid", "MatroidSpec", "NamedSpec", "UniformSpec", "basis_sort_key",
    "bits", "build_matroid", "matrix_rank", "validate_exchange_axiom",
    "CATALOG_NAMES", "DISTINGUISHED_PAIRS", "build_named",
    # walk
    "BasisGraph", "Distribution", "basis_distance", "basis_graph",
    "distance_matrix", "transition_distribution",
    # transport
    "Coupling", "TransportProblem", "expected_distance", "verify_coupling",
    "wasserstein1",
    # curvature
    "CouplingCell", "DownstepCoupling", "DropWitness", "GlobalReport",
    "PairFrame", "PairReport", "PairWitness", "build_downstep_coupling",
    "canonical_pairs", "compute_pair_report", "compute_pair_witness",
    "downstep_coupling_table", "downstep_lb_pair", "downstep_lb_via_coupling",
    "exact_pair_curvature", "global_curvature", "make_pair_frame",
    "proposition_distance_check", "resolve_workers", "theorem_lb_global",
    "theorem_ub_pair", "theorem_ub_values",
    # file input and serialization
    "approx_decimal", "format_rational", "load_input", "parse_matroid_file",
    "parse_matroid_obj", "parse_rational",
]
