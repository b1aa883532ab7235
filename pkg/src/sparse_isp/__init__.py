"""Sparse multipolar source reconstruction from sub-sampled far-field data.

Stage one completes the missing far-field spectrum by low-rank wrap-around
Hankel completion (:mod:`sparse_isp.aloha`); stage two recovers Fourier
coefficients and images the source (:mod:`sparse_isp.fourier`).
"""
from .aloha import AlohaParams, AlohaResult, reconstruct_from_sparse, solve
from .forward import (
    NoiseSpec,
    add_awgn,
    apply_mask,
    draw_mask,
    far_field,
    far_field_oracle,
    synthesize,
)
from .fourier import coeffs_from_farfield, overlap_integral, reconstruct_image, zero_mode_coeff
from .l1cs import L1Params, solve_l1
from .metrics import psnr, ssim, timed
from .model import (
    ImageGrid,
    MultipolarSource,
    ObservationMask,
    SamplingLattice,
    SourceComponent,
    SpectrumVector,
    build_lattice,
    validate_source,
)

__version__ = "0.1.0"
