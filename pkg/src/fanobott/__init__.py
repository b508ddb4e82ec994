"""Classification calculus for Fano Bott towers.

Admissible upper triangular matrices, their signed rooted forests,
the three equivalence moves with replayable witnesses, degree-two ring
invariants, and ray-matrix diffeomorphism certificates.
"""

from fanobott.cohomology import (
    NotALeafColumnError,
    SveInventory,
    cut_rank_gf2,
    enumerate_sve,
    is_sve,
    peel_signature,
    quotient_by_leaf,
    square_reduce,
    sve_brute_force,
)
from fanobott.fan import (
    Certificate,
    CertificateError,
    MatchReport,
    RayMatrix,
    RelationCheckError,
    ShapeMismatchError,
    certify_diffeo,
    primitive_relation_degrees,
    rays,
    rows_match_up_to_sign,
)
from fanobott.forest import (
    DIFFEO,
    MODES,
    ROOTED,
    VARIETY,
    CanonicalCode,
    LabelOrderError,
    NotALeafError,
    SignedRootedForest,
    canonical_code,
    children_map,
    equivalent,
    forest_from_json,
    from_matrix,
    leaf_cut,
    leaves,
    make_forest,
    relabel,
    relabel_topological,
    render_dot,
    subtree_vertices,
    to_matrix,
)
from fanobott.matrix import (
    FanoBottError,
    FanoBottMatrix,
    InvalidMatrixError,
    InvalidPhiError,
    PhiSigma,
    RowStructure,
    count_matrices,
    direct_sum,
    enumerate_matrices,
    from_phi_sigma,
    matrix_from_json,
    phi_sigma,
    row_structure,
    to_phi_sigma,
    validate,
)
from fanobott.ops import (
    ColumnFlipStep,
    ConjugateStep,
    DimensionMismatchError,
    OpPreconditionError,
    OpSequence,
    OpStep,
    RootEdgeFlipStep,
    StepFailedError,
    bfs_closure_classes,
    conjugate,
    find_witness,
    flip_column,
    flip_root_edge,
    replay,
    witness_from_json,
)

__version__ = "0.1.0"

__all__ = [
    "CanonicalCode",
    "Certificate",
    "CertificateError",
    "ColumnFlipStep",
    "ConjugateStep",
    "DIFFEO",
    "DimensionMismatchError",
    "FanoBottError",
    "FanoBottMatrix",
    "InvalidMatrixError",
    "InvalidPhiError",
    "LabelOrderError",
    "MODES",
    "MatchReport",
    "NotALeafColumnError",
    "NotALeafError",
    "OpPreconditionError",
    "OpSequence",
    "OpStep",
    "PhiSigma",
    "ROOTED",
    "RayMatrix",
    "RelationCheckError",
    "RootEdgeFlipStep",
    "RowStructure",
    "ShapeMismatchError",
    "SignedRootedForest",
    "StepFailedError",
    "SveInventory",
    "VARIETY",
    "bfs_closure_classes",
    "canonical_code",
    "certify_diffeo",
    "children_map",
    "conjugate",
    "count_matrices",
    "cut_rank_gf2",
    "direct_sum",
    "enumerate_matrices",
    "enumerate_sve",
    "equivalent",
    "find_witness",
    "flip_column",
    "flip_root_edge",
    "forest_from_json",
    "from_matrix",
    "from_phi_sigma",
    "is_sve",
    "leaf_cut",
    "leaves",
    "make_forest",
    "matrix_from_json",
    "peel_signature",
    "phi_sigma",
    "primitive_relation_degrees",
    "quotient_by_leaf",
    "rays",
    "relabel",
    "relabel_topological",
    "render_dot",
    "replay",
    "row_structure",
    "rows_match_up_to_sign",
    "square_reduce",
    "subtree_vertices",
    "sve_brute_force",
    "to_matrix",
    "to_phi_sigma",
    "validate",
    "witness_from_json",
]
