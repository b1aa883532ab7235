"""Pixel-sparse L1 compressed-sensing baseline.

Solves

    minimize  lam * ||s||_1 + 1/2 * ||P_obs(F s) - P_obs(b)||_2^2

over a complex ``(2N+1) x (2N+1)`` pixel array ``s``, where ``F`` is the
unitary map from pixel values to Fourier modes ``-N..N`` on the same box.
Iterations are monotone FISTA (Beck & Teboulle 2009) with unit step, which
is valid because ``F`` is unitary and the mask is a projection.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InvalidParameterError
from .fourier import coeffs_from_farfield
from .forward import apply_mask
from .model import ImageGrid, ObservationMask, SamplingLattice, SpectrumVector


@dataclass(frozen=True)
class L1Params:
    """``lambda_reg=None`` selects ``1e-3 * max |data|``."""

    lambda_reg: Optional[float] = None
    max_iters: int = 2000
    tol: float = 1e-8

    def __post_init__(self):
        if self.lambda_reg is not None and self.lambda_reg <= 0:
            raise InvalidParameterError("lambda_reg must be positive")
        if self.max_iters < 1:
            raise InvalidParameterError("max_iters must be >= 1")


@dataclass(eq=False)
class L1Result:
    image: ImageGrid
    completed: SpectrumVector
    iterations: int
    converged: bool
    objective_trace: list = field(default_factory=list)


def soft_threshold(x: np.ndarray, thresh: float) -> np.ndarray:
    """Complex soft thresholding: shrink magnitudes by ``thresh``, keep phases."""
    mag = np.abs(x)
    scale = np.maximum(mag - thresh, 0.0) / np.where(mag > 0, mag, 1.0)
    return x * scale


def mode_matrix(lattice: SamplingLattice) -> np.ndarray:
    """Unitary 1-D factor ``F1[ell, i] = exp(-2 pi i ell x_i / a) / sqrt(P)``."""
    P, a = lattice.side, lattice.a
    x = -a / 2 + (np.arange(P) + 0.5) * a / P
    ell = np.arange(-lattice.N, lattice.N + 1)
    return np.exp(-2j * np.pi / a * np.outer(ell, x)) / np.sqrt(P)


def solve_l1(
    data: SpectrumVector,
    mask: ObservationMask,
    params: L1Params,
    lattice: SamplingLattice,
) -> L1Result:
    """Sparse pixel reconstruction consistent with the observed modes.

    ``data`` may be far-field values (converted through the zero-filled
    coefficient map) or Fourier coefficients.  The returned image holds the
    real part of the series sampled at the ``2N+1`` pixel centres;
    ``completed`` is ``F s`` for the minimizer ``s``.
    """
    data.check_against(lattice)
    if data.kind == "far_field":
        data = coeffs_from_farfield(apply_mask(data, mask), lattice)
    n = lattice.side
    obs = mask.as_bool().reshape(n, n)
    b = np.where(obs, data.values.reshape(n, n), 0.0)
    lam = params.lambda_reg
    if lam is None:
        lam = 1e-3 * float(np.max(np.abs(b)))

    F1 = mode_matrix(lattice)
    F1h, F1c = F1.conj().T, F1.conj()

    def fwd(s):
        return F1 @ s @ F1.T

    def adj(c):
        return F1h @ c @ F1c

    def objective(s):
        r = np.where(obs, fwd(s) - b, 0.0)
        return lam * float(np.sum(np.abs(s))) + 0.5 * float(np.vdot(r, r).real)

    x = adj(b)
    fx = objective(x)
    y, t = x.copy(), 1.0
    trace = [fx]
    converged = False
    it = 0
    for it in range(1, params.max_iters + 1):
        grad = adj(np.where(obs, fwd(y) - b, 0.0))
        z = soft_threshold(y - grad, lam)
        gap = np.linalg.norm(z - y)
        fz = objective(z)
        x_prev = x
        # Monotone variant: keep the old iterate when the prox step is worse.
        if fz <= fx:
            x, fx = z, fz
        t_next = 0.5 * (1 + np.sqrt(1 + 4 * t * t))
        y = x + (t / t_next) * (z - x) + ((t - 1) / t_next) * (x - x_prev)
        t = t_next
        trace.append(fx)
        if gap <= params.tol * max(np.linalg.norm(z), np.finfo(float).tiny):
            converged = True
            break

    # F is unitary with 1/P normalization per axis pair, so the series
    # sampled at the pixel centres is P * s.
    samples = n * x
    image = ImageGrid(lattice.a, samples.real, "real_part", float(np.max(np.abs(samples.imag))))
    image.meta.update(iterations=it, converged=converged, lambda_reg=lam)
    return L1Result(image, SpectrumVector(fwd(x).ravel(), "fourier_coeff"), it, converged, trace)
