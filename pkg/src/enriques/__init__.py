"""Weighted Enriques diagrams of plane curve singularities and adjacency of their types."""
from .adjacency import (
    AdjacencyVerdict,
    Verdict,
    adjacency_verdict,
    augmentations,
    compatibility_product,
    dominates,
    linear_adjacent,
    matrix_compatible,
    necessary_adjacency,
    semicontinuity_violation,
    sufficient_adjacency,
)
from .catalog import NamedType, arnold, enumerate_types, named_type, one_exponent, ordinary, standard, tangent_smooth
from .certificates import certificate_json, domination_json, verify_certificate
from .diagram import (
    EnriquesDiagram,
    Embedding,
    OrderedDiagram,
    Subdiagram,
    Violation,
    admissible_orderings,
    canonical_code,
    enumerate_diagrams,
    enumerate_subdiagrams,
    find_isomorphism,
    free_and_satellite,
    is_admissible,
    proximity_matrix,
    unit_lower_inverse,
    validate_diagram,
)
from .errors import (
    EnriquesError,
    InadmissibleOrderingError,
    InvalidDiagramError,
    PreconditionError,
    ResourceLimitError,
    SearchBudgetExceeded,
)
from .fileformat import ParseError, parse_diagram, serialize_diagram
from .render import render
from .weights import (
    Invariants,
    UnloadingReport,
    WeightedDiagram,
    degree,
    excesses,
    invariants,
    is_consistent,
    is_type,
    multiplicities_from_values,
    unload,
    values_from_multiplicities,
    weighted_code,
)

__version__ = "0.1.0"
