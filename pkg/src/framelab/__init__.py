"""framelab: finite frame theory toolkit.

Frames (redundant spanning families in R^d) with their operators, bounds
and canonical duals; subfamily lower-bound scans with witness certificates;
energy localization onto seed spans; Riesz basis extraction; perturbation
certificates; and sign/subset supremum diagnostics for unconditional
convergence questions, all at finite, exactly checkable scale.
"""

from .numkernel import (
    DEFAULT_TOLERANCE,
    SymEigen,
    TolerancePolicy,
    numerical_rank,
    orthonormal_basis_of_span,
    projector_onto_span,
    spd_solve,
    sym_eigen,
)
from .frames import (
    DualFrame,
    Frame,
    FrameBounds,
    RieszBasisCheck,
    SubsetId,
    analyze,
    canonical_dual,
    excess,
    frame_bounds,
    frame_operator,
    frame_to_text,
    gram_matrix,
    is_riesz_basis,
    normalize_indices,
    parse_frame_text,
    read_frame_file,
    reconstruct,
    solve_frame_operator,
    write_frame_file,
)
from .subfamilies import (
    DEFAULT_BUDGET,
    LocalizationResult,
    RieszFrameCertificate,
    common_bound_decay,
    riesz_frame_constant,
    subfamily_lower_bound,
    tail_localization,
)
from .extraction import (
    STRATEGIES,
    DependentFamilyError,
    ExtractionResult,
    PerturbationCertificate,
    extract,
    perturbation_certificate,
    riesz_bounds_of_subset,
)
from .series import (
    EXHAUSTIVE_CAP,
    NearRieszReport,
    SeriesFamily,
    SignSupBounds,
    SignSupReport,
    duplicated_basis_family,
    family_to_text,
    near_riesz_diagnostic,
    parse_family_text,
    read_family_file,
    sign_sup,
    sign_sup_bounds,
    subset_sup,
    subset_sup_exhaustive,
    tail_decay_profile,
    write_family_file,
)
from .gallery import (
    perturbed_onb_expansion,
    perturbed_onb_family,
    perturbed_onb_subfamily,
    random_frame,
    standard_frames,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_BUDGET",
    "DEFAULT_TOLERANCE",
    "EXHAUSTIVE_CAP",
    "DependentFamilyError",
    "DualFrame",
    "ExtractionResult",
    "Frame",
    "FrameBounds",
    "LocalizationResult",
    "NearRieszReport",
    "PerturbationCertificate",
    "RieszBasisCheck",
    "RieszFrameCertificate",
    "STRATEGIES",
    "SeriesFamily",
    "SignSupBounds",
    "SignSupReport",
    "SubsetId",
    "SymEigen",
    "TolerancePolicy",
    "analyze",
    "canonical_dual",
    "common_bound_decay",
    "duplicated_basis_family",
    "excess",
    "extract",
    "family_to_text",
    "frame_bounds",
    "frame_operator",
    "frame_to_text",
    "gram_matrix",
    "is_riesz_basis",
    "near_riesz_diagnostic",
    "normalize_indices",
    "numerical_rank",
    "orthonormal_basis_of_span",
    "parse_family_text",
    "parse_frame_text",
    "perturbation_certificate",
    "perturbed_onb_expansion",
    "perturbed_onb_family",
    "perturbed_onb_subfamily",
    "projector_onto_span",
    "random_frame",
    "read_family_file",
    "read_frame_file",
    "reconstruct",
    "riesz_bounds_of_subset",
    "riesz_frame_constant",
    "sign_sup",
    "sign_sup_bounds",
    "solve_frame_operator",
    "spd_solve",
    "standard_frames",
    "subfamily_lower_bound",
    "subset_sup",
    "subset_sup_exhaustive",
    "sym_eigen",
    "tail_decay_profile",
    "tail_localization",
    "write_family_file",
    "write_frame_file",
]
