"""Parametric Yang-Baxter maps from binomial Lax pencils.

Construction by matrix re-factorization, Poisson and symplectic structure
checks, transfer dynamics on periodic lattices, and a CLI for running the
verification suites.
"""

from . import maps_2x2, maps_3x3  # noqa: F401  (register the shipped maps)
from .checks import DEFAULT_TOLERANCES, verify_map, yang_baxter_residual
from .errors import (
    BranchCut,
    ConfigError,
    DegenerateDenominator,
    DegeneratePi,
    DegenerateSimilarity,
    DomainError,
    NonCommuting,
    PoleEncountered,
    PoleError,
    SingularMatrix,
    SingularParameter,
    StepTooLarge,
    ToleranceExceeded,
    YBLaxError,
)
from .lattice import (
    StaircaseState,
    TransferReport,
    integrals_ay,
    monodromy,
    transfer_evolve,
    transfer_step,
    write_trajectory_csv,
)
from .maps_2x2 import (
    LeafPoint2,
    adler_yamilov_general,
    ay_lax,
    ay_limit_probe,
    case1_embed,
    case2_embed,
    case_lax,
    case_map,
    finite_parameter_lax,
    lax_inversion_2x2,
)
from .maps_3x3 import (
    GVVector,
    LeafPoint3,
    boussinesq_map,
    complete_matrix,
    constrained_casimirs,
    discriminant_surface,
    discriminant_surface_residual,
    extract_leaf_coords,
    gv_inverse_transform,
    gv_lax_A,
    gv_lax_B,
    gv_map,
    gv_transform,
    gv_vector_map,
    leaf_casimirs,
    leaf_constants_from_levels,
    leaf_embed_3x3,
    leaf_lax_3x3,
    map_3x3,
    minor_products,
    minors_solution,
)
from .matrix_core import (
    DIAGONAL_I,
    FAMILIES,
    JORDAN_II,
    ROTATION_III,
    ZETA_SAMPLES,
    BinomialPencil,
    CharPolyCoeffs,
    char_poly_coeffs,
    family_eval,
    matrix_from_json,
    matrix_to_json,
)
from .refactor import (
    RefactorResult,
    casimir_drift,
    commutator_gap,
    lax_product_residual,
    pi_matrices,
    refactor_2x2,
    refactor_nxn,
    similarity_check,
    triple_uniqueness_probe,
)
from .registry import MapDescriptor, get_map, map_ids
from .sklyanin import (
    Observable,
    PoissonStructure,
    bracket,
    bracket_table_3x3,
    canonical_structure,
    casimir_check,
    constant_pair_structure,
    entry_bracket_3x3,
    jacobi_residual,
    pair_structure,
    poisson_map_check,
    product_structure,
    sklyanin_2x2,
    sklyanin_3x3_identity,
)

__version__ = "0.1.0"
