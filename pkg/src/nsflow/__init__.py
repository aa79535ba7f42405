"""Combinatorial tools for nonsingular Smale flows on 3-manifolds.

Lyapunov graphs with their realizability checks, explicit graph families,
and the boundary of thickened templates.
"""

from .builders import (
    SurgeryError,
    build_lemma34,
    build_prop35,
    build_section5,
    random_nsf_graph,
    surgery_connect,
)
from .gf2 import (
    Gf2Matrix,
    IntMatrix,
    find_matrix_with_k,
    gf2_rank,
    is_irreducible,
    kernel_dim,
    mod2_reduce,
    ssft_k,
)
from .graph import (
    AttractorOrbit,
    Diagnostic,
    Edge,
    LyapunovGraph,
    RepellerOrbit,
    S3Report,
    Saddle,
    Singularity,
    SummandBound,
    check_s3,
    check_template_vertex,
    cycle_rank,
    has_oriented_cycle,
    nsf_balance_check,
    summand_lower_bound,
    validate_abstract,
    vertex_residual,
    vertex_stats,
)
from .template import (
    BoundaryReport,
    Strip,
    SurfaceComponent,
    Template,
    build_lorenz,
    check_lemma41,
    enumerate_small_templates,
    template_genus,
    thicken_boundary,
    validate_template,
)

__version__ = "0.1.0"

__all__ = [
    "SurgeryError",
    "build_lemma34",
    "build_prop35",
    "build_section5",
    "random_nsf_graph",
    "surgery_connect",
    "Gf2Matrix",
    "IntMatrix",
    "find_matrix_with_k",
    "gf2_rank",
    "is_irreducible",
    "kernel_dim",
    "mod2_reduce",
    "ssft_k",
    "AttractorOrbit",
    "Diagnostic",
    "Edge",
    "LyapunovGraph",
    "RepellerOrbit",
    "S3Report",
    "Saddle",
    "Singularity",
    "SummandBound",
    "check_s3",
    "check_template_vertex",
    "cycle_rank",
    "has_oriented_cycle",
    "nsf_balance_check",
    "summand_lower_bound",
    "validate_abstract",
    "vertex_residual",
    "vertex_stats",
    "BoundaryReport",
    "Strip",
    "SurfaceComponent",
    "Template",
    "build_lorenz",
    "check_lemma41",
    "enumerate_small_templates",
    "template_genus",
    "thicken_boundary",
    "validate_template",
]
