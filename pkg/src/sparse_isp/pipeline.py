"""Simulate, mask, add noise, reconstruct and score: the shared experiment path."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameterError
from .aloha import AlohaParams, complete_farfield
from .forward import NoiseSpec, add_awgn, apply_mask, draw_mask, synthesize
from .fourier import DEFAULT_RESOLUTION, coeffs_from_farfield, reconstruct_image, zero_mode_correction
from .l1cs import L1Params, solve_l1
from .metrics import psnr, ssim, timed
from .model import (
    ImageGrid,
    MultipolarSource,
    ObservationMask,
    SamplingLattice,
    SpectrumVector,
    validate_source,
)

METHODS = ("none", "l1cs", "aloha")


@dataclass(frozen=True)
class Experiment:
    source: MultipolarSource
    lattice: SamplingLattice
    resolution: int = DEFAULT_RESOLUTION
    aloha: AlohaParams = field(default_factory=AlohaParams)
    l1: L1Params = field(default_factory=L1Params)
    completion_domain: str = "fourier_coeff"

    def __post_init__(self):
        validate_source(self.source, self.lattice)
        if self.resolution < self.lattice.side:
            raise InvalidParameterError(
                f"resolution {self.resolution} below 2N+1 = {self.lattice.side}"
            )
        if self.completion_domain not in ("fourier_coeff", "far_field"):
            raise InvalidParameterError(f"unknown completion domain {self.completion_domain!r}")


@dataclass(frozen=True)
class Outcome:
    method: str
    rate: float
    snr_db: float
    seed: int
    image: ImageGrid
    psnr_db: float
    ssim: float
    wall_seconds: float
    iterations: int


def image_from_farfield(spec: SpectrumVector, exp: Experiment) -> ImageGrid:
    """Fourier inversion image; ``meta["zero_mode_correction"]`` holds the
    magnitude of the overlap sum folded into the zero mode, a truncation
    diagnostic."""
    coeffs = coeffs_from_farfield(spec, exp.lattice)
    img = reconstruct_image(coeffs, exp.lattice, exp.resolution)
    img.meta["zero_mode_correction"] = abs(zero_mode_correction(coeffs.values, exp.lattice))
    return img


def reference_image(exp: Experiment) -> ImageGrid:
    """Full-data, noise-free Fourier inversion image."""
    return image_from_farfield(synthesize(exp.source, exp.lattice), exp)


def cell_seeds(seed: int) -> tuple[int, int]:
    """Independent (mask, noise) seeds derived from one cell seed."""
    ss = np.random.SeedSequence(seed)
    a, b = ss.spawn(2)
    return int(a.generate_state(1, np.uint64)[0]), int(b.generate_state(1, np.uint64)[0])


def measurements(exp: Experiment, rate: float, snr_db: float, seed: int):
    """Noisy far-field data and its observation mask for one experiment cell."""
    mask_seed, noise_seed = cell_seeds(seed)
    clean = synthesize(exp.source, exp.lattice)
    noisy = add_awgn(clean, NoiseSpec(snr_db, noise_seed))
    mask = draw_mask(exp.lattice.M, rate, mask_seed, exp.lattice.zero_pos)
    return noisy, mask


def reconstruct(method: str, data: SpectrumVector, mask: ObservationMask, exp: Experiment):
    """Return ``(image, iterations)`` for one method on masked far-field data."""
    lat = exp.lattice
    if method == "none":
        return image_from_farfield(apply_mask(data, mask), exp), 0
    if method == "aloha":
        res = complete_farfield(data, mask, exp.aloha, lat, exp.completion_domain)
        img = image_from_farfield(res.completed, exp)
        img.meta["trace"] = res.trace_rows()
        return img, res.iterations_used
    if method == "l1cs":
        res = solve_l1(data, mask, exp.l1, lat)
        return reconstruct_image(res.completed, lat, exp.resolution), res.iterations
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")


def run_cell(
    exp: Experiment,
    method: str,
    rate: float,
    snr_db: float = math.inf,
    seed: int = 0,
    reference: ImageGrid | None = None,
) -> Outcome:
    reference = reference if reference is not None else reference_image(exp)
    data, mask = measurements(exp, rate, snr_db, seed)
    (image, iters), seconds = timed(lambda: reconstruct(method, data, mask, exp))
    return Outcome(
        method, rate, snr_db, seed, image,
        psnr(reference, image), ssim(reference, image), seconds, iters,
    )
