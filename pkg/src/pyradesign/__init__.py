"""Symmetric designs with the parameters of PG(r-1, 2) hyperplane complements.

The library builds these designs, finds their center blocks and lines,
splits them along center blocks and reassembles them, and constructs and
checks the abelian groups acting regularly off a center block.
"""

from __future__ import annotations

from .analysis import (
    DesignLine,
    center_blocks,
    center_points,
    design_line,
    design_lines,
    hadamard_rank,
    line_pairs,
    satisfies_pg_criterion,
)
from .blockset import (
    Block,
    Design,
    Permutation,
    ValidationReport,
    dual_design,
    is_isomorphic,
    validate_symmetric_design,
)
from .decomposition import (
    DecompositionWitness,
    check_prop_Z,
    decompose,
    delta_search,
    sum_construction,
    transfer_delta,
)
from .errors import (
    DesignError,
    DimensionError,
    DomainError,
    GeometryError,
    InvariantViolation,
    PyradesignError,
    ResourceError,
    SearchBudgetExceeded,
)
from .geometry import GeometryParams, enumerate_cliques, pg_design, pg_hyperplane_complement_design
from .pyramidal import (
    PyramidalCertificate,
    alpha_permutation,
    build_group,
    check_normality,
    extract_involution_chain,
    stabilizer_search,
    verify_certificate,
    verify_lemma1,
    verify_theorem,
)

__version__ = "0.1.0"

__all__ = [
    "Block",
    "DecompositionWitness",
    "Design",
    "DesignError",
    "DesignLine",
    "DimensionError",
    "DomainError",
    "GeometryError",
    "GeometryParams",
    "InvariantViolation",
    "Permutation",
    "PyradesignError",
    "PyramidalCertificate",
    "ResourceError",
    "SearchBudgetExceeded",
    "ValidationReport",
    "alpha_permutation",
    "build_group",
    "center_blocks",
    "center_points",
    "check_normality",
    "check_prop_Z",
    "decompose",
    "delta_search",
    "design_line",
    "design_lines",
    "dual_design",
    "enumerate_cliques",
    "extract_involution_chain",
    "hadamard_rank",
    "is_isomorphic",
    "line_pairs",
    "pg_design",
    "pg_hyperplane_complement_design",
    "satisfies_pg_criterion",
    "stabilizer_search",
    "sum_construction",
    "transfer_delta",
    "validate_symmetric_design",
    "verify_certificate",
    "verify_lemma1",
    "verify_theorem",
]
