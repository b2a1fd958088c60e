"""Multiplierless DCT approximations from Chen's factorization, their
16/32-point extensions, figures of merit and a block image codec."""

from .catalog import TRANSFORM_NAMES, get_transform
from .codec import ImagePlane, compress_plane, corpus_sweep, psnr, ssim, zigzag_order
from .jam import jam_compose, jam_inverse, jam_scaled, jam_transform
from .linalg import Dyadic, DyadicMatrix
from .metrics import MarkovModel, coding_gain_sweep, total_error_energy, unified_coding_gain
from .orthogonalization import ScaledApproximation, polar_diag_scaling, scaled_approximation
from .transforms import (
    ChenParams,
    FactoredTransform,
    OpCount,
    TransformKind,
    apply_fast,
    build_t8,
    chen_stages,
    dct_ii_matrix,
    op_count,
)

__all__ = [
    "TRANSFORM_NAMES",
    "ChenParams",
    "Dyadic",
    "DyadicMatrix",
    "FactoredTransform",
    "ImagePlane",
    "MarkovModel",
    "OpCount",
    "ScaledApproximation",
    "TransformKind",
    "apply_fast",
    "build_t8",
    "chen_stages",
    "coding_gain_sweep",
    "compress_plane",
    "corpus_sweep",
    "dct_ii_matrix",
    "get_transform",
    "jam_compose",
    "jam_inverse",
    "jam_scaled",
    "jam_transform",
    "op_count",
    "polar_diag_scaling",
    "psnr",
    "scaled_approximation",
    "ssim",
    "total_error_energy",
    "unified_coding_gain",
    "zigzag_order",
]
