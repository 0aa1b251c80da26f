"""Structure decompositions and separability boundaries of bipartite quantum states."""

from .approximations import (
    BpptaDecomposition,
    BsaDecomposition,
    Crossing,
    PureNoiseBsa,
    RobustnessResult,
    boundary_sweep,
    bppta,
    bsa,
    family_line,
    horodecki_ccnr_boundary_roots,
    horodecki_ppt_boundary,
    pure_plus_noise_bsa,
    random_robustness_pure,
    robustness,
)
from .linalg import (
    EigenSystem,
    SchmidtForm,
    hermitian_eig,
    partial_transpose,
    realign,
    schmidt,
    singular_values,
    tensor_product,
    trace_norm,
)
from .separability import (
    FinerCertificate,
    Outcome,
    Ternary,
    Verdict,
    ccnr_norm,
    common_witness_exists,
    finer_decomposition,
    min_separable_weight,
    ppt_min_eig,
    product_basis_certificate,
    verdict,
)
from .states import (
    BipartiteDims,
    DensityMatrix,
    FamilyLine,
    PureState,
    bell_basis,
    horodecki_family,
    horodecki_omega,
    horodecki_sigma,
    horodecki_sigma_minus,
    horodecki_sigma_plus,
    load_state,
    max_entangled,
    max_mixed,
    rho_m,
    save_state,
    varrho,
    varrho_family,
    varrho_q_plus,
    werner,
)
from .structure import (
    EigenEnsemble,
    EigenGroup,
    StructureDecomposition,
    consume_pair,
    eigen_split,
    purely_decompose,
)
from .product_vectors import product_vectors_in_subspace

__version__ = "0.1.0"
