"""Tubal tensor algebra and the recovery algorithms built on it.

Tensors multiply through circular convolution of their tubes, which turns
into per-slice matrix products in the spectral domain.  On top of that
algebra the package provides the tubal singular value factorization with its
rank measures and nuclear norm, three truncation compression schemes,
nuclear-norm-penalized completion from sampled entries, robust separation of
low-rank and tube-sparse parts, matrix flattening baselines, a binary tensor
file format, and a CLI binding them together.
"""

from .compression import (
    CompressionReport,
    compress_matrix_svd,
    compress_tsvd,
    compress_tsvd_tubal,
    rse_db,
    svd_ratio,
    sweep,
    tsvd_ratio,
    tsvd_tubal_ratio,
)
from .completion import (
    SamplingMask,
    SolveTrace,
    SolverConfig,
    complete_tnn,
    project_onto_observations,
    sample_mask,
    shrink_slicewise,
    svt,
    synth_low_tubal_rank,
    tubal_shrink,
)
from .core import (
    dft_mode3,
    fold_trailing_modes,
    frobenius_norm,
    identity_tensor,
    idft_mode3,
    is_orthogonal,
    t_product,
    t_transpose,
    tube_circ_conv,
    unfold_trailing_modes,
)
from .decomposition import (
    MultiRank,
    TSvdFactors,
    blkdiag,
    multi_rank,
    reconstruct,
    shifted_frames,
    tnn,
    truncate_tubal,
    tsvd,
    tubal_rank,
)
from .errors import DimensionError, FormatError, NumericalError, SymmetryError
from .rpca import (
    RpcaResult,
    RpcaTrace,
    complete_matrix_baseline,
    default_lambda,
    l112_norm,
    rpca_matrix_baseline,
    rpca_tensor,
    synth_tube_sparse,
    tube_shrink_l112,
)
from .tenfile import read_tensor, write_tensor

__version__ = "0.1.0"

__all__ = [
    "CompressionReport",
    "DimensionError",
    "FormatError",
    "MultiRank",
    "NumericalError",
    "RpcaResult",
    "RpcaTrace",
    "SamplingMask",
    "SolveTrace",
    "SolverConfig",
    "SymmetryError",
    "TSvdFactors",
    "blkdiag",
    "complete_matrix_baseline",
    "complete_tnn",
    "compress_matrix_svd",
    "compress_tsvd",
    "compress_tsvd_tubal",
    "default_lambda",
    "dft_mode3",
    "fold_trailing_modes",
    "frobenius_norm",
    "identity_tensor",
    "idft_mode3",
    "is_orthogonal",
    "l112_norm",
    "multi_rank",
    "project_onto_observations",
    "read_tensor",
    "reconstruct",
    "rpca_matrix_baseline",
    "rpca_tensor",
    "rse_db",
    "sample_mask",
    "shifted_frames",
    "shrink_slicewise",
    "svd_ratio",
    "svt",
    "sweep",
    "synth_low_tubal_rank",
    "synth_tube_sparse",
    "t_product",
    "t_transpose",
    "tnn",
    "truncate_tubal",
    "tsvd",
    "tsvd_ratio",
    "tsvd_tubal_ratio",
    "tubal_rank",
    "tubal_shrink",
    "tube_circ_conv",
    "tube_shrink_l112",
    "unfold_trailing_modes",
    "write_tensor",
]
