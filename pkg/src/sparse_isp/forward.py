"""Far-field synthesis, its quadrature cross-check, masking and noise."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    InvalidRateError,
    LengthMismatchError,
    NonpositiveWavenumberError,
    QuadratureUnderresolvedError,
)
from .model import MultipolarSource, ObservationMask, SamplingLattice, SpectrumVector

POINTS_PER_SIGMA = 8


def gamma2(k):
    """Two-dimensional far-field constant ``exp(i pi/4) / sqrt(8 pi k)``."""
    k = np.asarray(k, dtype=float)
    return np.exp(1j * np.pi / 4) / np.sqrt(8 * np.pi * k)


def _far_field_many(src: MultipolarSource, dirs: np.ndarray, k: np.ndarray) -> np.ndarray:
    dirs = np.atleast_2d(np.asarray(dirs, dtype=float))
    k = np.atleast_1d(np.asarray(k, dtype=float))
    if np.any(k <= 0):
        raise NonpositiveWavenumberError("wavenumbers must be positive")
    out = np.zeros(k.shape, dtype=complex)
    if not len(src):
        return out
    z, lam, psi = src.positions, src.monopoles, src.dipoles
    phase = np.exp(-1j * k[:, None] * (dirs @ z.T))
    amp = lam[None, :] + 1j * k[:, None] * (dirs @ psi.T)
    out = -gamma2(k) * np.sum(amp * phase, axis=1)
    return out


def far_field(src: MultipolarSource, direction, k: float) -> complex:
    """Closed-form far field of a multipolar source at one (direction, k).

    Monopoles contribute ``lam``, dipoles ``i k (direction . psi)``, each
    carried by the plane-wave phase ``exp(-i k direction . z)``.
    """
    return complex(_far_field_many(src, np.asarray(direction, float)[None], np.array([k]))[0])


def _gauss_1d(t, sigma):
    return np.exp(-0.5 * (t / sigma) ** 2) / (math.sqrt(2 * math.pi) * sigma)


def _mollified_integral(src, direction, k, a, sigma, n):
    # Midpoint tensor rule on the box; every mollified term is a product of
    # 1-D factors, so the 2-D sum factorizes exactly.
    h = a / n
    y = -a / 2 + (np.arange(n) + 0.5) * h
    total = 0j
    for c in src.components:
        fac = []
        for axis in range(2):
            t = y - c.z[axis]
            g = _gauss_1d(t, sigma)
            wave = np.exp(-1j * k * direction[axis] * y)
            fac.append((h * np.sum(g * wave), h * np.sum(-t / sigma**2 * g * wave)))
        (g1, dg1), (g2, dg2) = fac
        total += c.lam * g1 * g2 + c.psi[0] * dg1 * g2 + c.psi[1] * g1 * dg2
    return -complex(gamma2(k)) * total


def far_field_oracle(
    src: MultipolarSource,
    direction,
    k: float,
    a: float,
    sigma: float | None = None,
    quad_n: int | None = None,
    levels: int = 3,
) -> complex:
    """Far field by quadrature of Gaussian-mollified point sources.

    Each Dirac (and Dirac gradient) is replaced by a Gaussian of width
    ``sigma`` and the radiation integral is evaluated numerically over the
    box.  The mollifier bias is even in ``sigma``; ``levels`` extra widths
    ``sigma / 2**j`` are combined by Richardson extrapolation in ``sigma**2``
    (``levels=0`` returns the raw mollified value).

    Parameters
    ----------
    sigma : float, optional
        Mollifier width, default ``1e-2 * a``.
    quad_n : int, optional
        Quadrature points per box side.  Must give at least
        ``POINTS_PER_SIGMA`` points per finest width; chosen automatically
        when omitted.
    """
    if k <= 0:
        raise NonpositiveWavenumberError(f"k must be positive, got {k}")
    sigma = 1e-2 * a if sigma is None else float(sigma)
    direction = np.asarray(direction, dtype=float)
    finest = sigma / 2**levels
    needed = math.ceil(POINTS_PER_SIGMA * a / finest)
    if quad_n is None:
        quad_n = needed
    elif quad_n < needed:
        raise QuadratureUnderresolvedError(
            f"quad_n={quad_n} gives fewer than {POINTS_PER_SIGMA} points per sigma={finest:g}"
        )
    if not len(src):
        return 0j

    table = [_mollified_integral(src, direction, k, a, sigma / 2**j, quad_n)
             for j in range(levels + 1)]
    for m in range(1, levels + 1):
        f = 4.0**m
        table = [table[j] + (table[j] - table[j - 1]) / (f - 1) for j in range(1, len(table))]
    return complex(table[-1])


def synthesize(src: MultipolarSource, lattice: SamplingLattice) -> SpectrumVector:
    return SpectrumVector(_far_field_many(src, lattice.dirs, lattice.k), "far_field")


@dataclass(frozen=True)
class NoiseSpec:
    snr_db: float = math.inf
    seed: int = 0


def add_awgn(spec: SpectrumVector, noise: NoiseSpec) -> SpectrumVector:
    """Add circular complex white noise at a global signal-to-noise ratio.

    The per-sample variance is ``||x||^2 / M / 10**(snr_db/10)``, split
    evenly between real and imaginary parts.
    """
    if math.isinf(noise.snr_db) and noise.snr_db > 0:
        return spec
    x = spec.values
    var = np.vdot(x, x).real / x.size / 10 ** (noise.snr_db / 10)
    rng = np.random.default_rng(noise.seed)
    w = rng.standard_normal((2, x.size))
    return SpectrumVector(x + math.sqrt(var / 2) * (w[0] + 1j * w[1]), spec.kind)


def mask_size(M: int, rate: float) -> int:
    return max(1, int(math.floor(rate * M + 0.5)))


def draw_mask(M: int, rate: float, seed: int, zero_pos: int) -> ObservationMask:
    """Uniform random subset of ``round(rate*M)`` positions, always keeping ``zero_pos``."""
    if not 0 < rate <= 1:
        raise InvalidRateError(f"rate must lie in (0, 1], got {rate}")
    size = mask_size(M, rate)
    rng = np.random.default_rng(seed)
    others = np.delete(np.arange(M), zero_pos)
    picked = rng.choice(others, size=size - 1, replace=False)
    return ObservationMask(np.sort(np.append(picked, zero_pos)), M, rate)


def apply_mask(spec: SpectrumVector, mask: ObservationMask) -> SpectrumVector:
    if len(spec) != mask.M:
        raise LengthMismatchError(f"spectrum length {len(spec)} != mask length {mask.M}")
    out = np.zeros(len(spec), dtype=complex)
    out[mask.observed] = spec.values[mask.observed]
    return SpectrumVector(out, spec.kind)
