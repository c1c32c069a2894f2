"""Schmidt-rank-constrained norms and positivity tools for bipartite operators."""

__version__ = "0.1.0"

from .linalg import (
    BipartiteOperator,
    Frame,
    PureState,
    SchmidtDecomposition,
    dagger,
    is_hermitian,
    min_eig_hermitian,
    numerical_radius,
    operator_norm,
    schmidt_decompose,
    schmidt_rank,
    tensor,
    trace_norm,
    truncate_schmidt,
)
from .rand import RandomConfig
from .optim import SeeSawConfig
from .norms import (
    NormEstimate,
    Witness,
    block_positive_decomposition,
    compress,
    dec_norm_value,
    max_order_norm_upper,
    maxk_space_norm_bounds,
    min_order_norm,
    omin_norm,
    sk_norm,
)
from .cones import (
    BlockPositivityVerdict,
    SchmidtEnsemble,
    WitnessCertificate,
    k_block_positivity,
    random_schmidt_ensemble,
    reduction_witness,
    sn_upper_verify,
    witness_check,
)
from .maps import (
    ContractionTestResult,
    MapNormEstimate,
    MapRepr,
    depolarizing_map,
    detection_map,
    hermitian_trace_norm,
    identity_map,
    idk_apply,
    idk_op_norm,
    k_peb_certify,
    k_peb_refute,
    k_positivity,
    reduction_map,
    sn_contraction_test,
    transpose_map,
)
from .oracle import (
    OracleConfig,
    brute_block_min,
    brute_idk_norm,
    brute_min_order,
    brute_omin,
    brute_sk_norm,
)

__all__ = [
    "BipartiteOperator",
    "BlockPositivityVerdict",
    "ContractionTestResult",
    "Frame",
    "MapNormEstimate",
    "MapRepr",
    "NormEstimate",
    "OracleConfig",
    "PureState",
    "RandomConfig",
    "SchmidtDecomposition",
    "SchmidtEnsemble",
    "SeeSawConfig",
    "Witness",
    "WitnessCertificate",
    "block_positive_decomposition",
    "brute_block_min",
    "brute_idk_norm",
    "brute_min_order",
    "brute_omin",
    "brute_sk_norm",
    "compress",
    "dagger",
    "dec_norm_value",
    "depolarizing_map",
    "detection_map",
    "hermitian_trace_norm",
    "identity_map",
    "idk_apply",
    "idk_op_norm",
    "is_hermitian",
    "k_block_positivity",
    "k_peb_certify",
    "k_peb_refute",
    "k_positivity",
    "max_order_norm_upper",
    "maxk_space_norm_bounds",
    "min_eig_hermitian",
    "min_order_norm",
    "numerical_radius",
    "omin_norm",
    "operator_norm",
    "random_schmidt_ensemble",
    "reduction_map",
    "reduction_witness",
    "schmidt_decompose",
    "schmidt_rank",
    "sk_norm",
    "sn_contraction_test",
    "sn_upper_verify",
    "tensor",
    "transpose_map",
    "trace_norm",
    "truncate_schmidt",
    "witness_check",
]
