"""Mirrored entanglement-witness pairs from mutually unbiased bases.

Construction and certification of the qutrit witness pair family, its
Bell-diagonal five-level extension, and the magic-simplex slice scans that
classify the states they detect.
"""

from .linops import (
    BipartiteOperator,
    Vector,
    eig_hermitian,
    load_operator,
    operator_from_json,
    operator_to_json,
    partial_transpose,
    save_operator,
    tensor,
)
from .mub import MubReport, MubSet, build_mubs, qutrit_mubs, verify_mub
from .simplex import (
    BellCoefficients,
    GridSpec,
    SliceGrid,
    SlicePoint,
    WeylOp,
    bell_decode,
    bell_encode,
    bell_projector,
    bell_vector,
    in_enclosure,
    kernel_feasibility,
    line_coefficients,
    phase_space_lines,
    scan_slice,
    slice_state,
    state_box,
    weyl,
    write_slice_csv,
)
from .witnesses import (
    TABLE1,
    CatalogError,
    CirculantParams,
    GammaSplit,
    MirrorResult,
    catalog,
    catalog_names,
    catalog_operator,
    choi,
    circulant_witness,
    dephase,
    depolarize,
    find_mirror_mu,
    flip_operator,
    mirror_partner,
    phi_gamma_apply,
    reduction_witness,
    witness_for_split,
)
from .certify import (
    BlockPositivityReport,
    CesReport,
    LocalDecomposition,
    ProductVector,
    SeesawResult,
    SpanReport,
    WitnessReport,
    block_positivity_evidence,
    ces_evidence,
    detect,
    gell_mann_basis,
    is_ppt,
    local_decomposition,
    local_unitary_u3,
    max_product_expectation,
    min_product_expectation,
    negative_eigenspace,
    product_expectation,
    product_vector,
    rotated_zero_family_d3,
    span_report,
    witness_report,
    zero_family_d3,
)

__version__ = "0.1.0"
