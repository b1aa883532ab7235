"""Far field to Fourier coefficients, and Fourier-series imaging on the box."""
from __future__ import annotations

import numpy as np

from .errors import InvalidParameterError
from .forward import gamma2
from .model import ImageGrid, SamplingLattice, SpectrumVector

DEFAULT_RESOLUTION = 128


def overlap_integral(ell, eps: float, a: float):
    """``int_A phi_ell(y) conj(phi_ell0(y)) dy`` with ``ell0 = (eps, 0)``.

    Accepts a single pair or an ``(n, 2)`` array of pairs.
    """
    ell = np.asarray(ell)
    l1, l2 = ell[..., 0], ell[..., 1]
    # np.sinc(x) = sin(pi x) / (pi x)
    out = np.where(l2 == 0, a, 0.0) * a * np.sinc(l1 - eps)
    return out.astype(complex) if out.ndim else complex(out)


def zero_mode_prefactor(lattice: SamplingLattice) -> float:
    """``eps*pi / (a^2 sin(eps*pi))``, the reciprocal box average of ``conj(phi_ell0)``."""
    e = lattice.eps
    return e * np.pi / (lattice.a**2 * np.sin(e * np.pi))


def farfield_to_coeff_factors(lattice: SamplingLattice) -> np.ndarray:
    """Per-entry factors mapping far-field values to coefficient estimates.

    Off the zero entry this is exact: ``-1 / (a^2 gamma2(k_ell))``.  At the zero
    entry it is the leading term of the zero-mode estimate only; the overlap
    correction is added by :func:`zero_mode_coeff`.
    """
    f = -1.0 / (lattice.a**2 * gamma2(lattice.k))
    z = lattice.zero_pos
    f[z] = -zero_mode_prefactor(lattice) / gamma2(lattice.k[z])
    return f


def zero_mode_correction(coeffs: np.ndarray, lattice: SamplingLattice) -> complex:
    """``sum_{ell != 0} s_ell * overlap_integral(ell)`` over the lattice."""
    mask = np.ones(lattice.M, dtype=bool)
    mask[lattice.zero_pos] = False
    ov = overlap_integral(lattice.ell[mask], lattice.eps, lattice.a)
    return complex(np.sum(np.asarray(coeffs)[mask] * ov))


def zero_mode_coeff(u0: complex, other_coeffs, lattice: SamplingLattice) -> complex:
    """Zeroth Fourier coefficient from the near-static far-field sample.

    Integrating the Fourier series against ``conj(phi_ell0)`` gives
    ``-u0/gamma = s_0 * a^2 sin(eps pi)/(eps pi) + sum_{ell != 0} s_ell I(ell)``,
    truncated here to ``|ell|_inf <= N``.
    """
    coeffs = other_coeffs.values if isinstance(other_coeffs, SpectrumVector) else other_coeffs
    g0 = complex(gamma2(lattice.k[lattice.zero_pos]))
    corr = zero_mode_correction(coeffs, lattice)
    return zero_mode_prefactor(lattice) * (-complex(u0) / g0 - corr)


def coeffs_from_farfield(spec: SpectrumVector, lattice: SamplingLattice) -> SpectrumVector:
    spec.check_against(lattice)
    s = -spec.values / (lattice.a**2 * gamma2(lattice.k))
    z = lattice.zero_pos
    s[z] = 0.0
    s[z] = zero_mode_coeff(spec.values[z], s, lattice)
    return SpectrumVector(s, "fourier_coeff")


def farfield_from_coeffs(coeffs: SpectrumVector, lattice: SamplingLattice, u0: complex) -> SpectrumVector:
    """Inverse of :func:`coeffs_from_farfield` off the zero entry; ``u0`` fills the zero entry."""
    coeffs.check_against(lattice)
    u = -coeffs.values * lattice.a**2 * gamma2(lattice.k)
    u[lattice.zero_pos] = u0
    return SpectrumVector(u, "far_field")


def reconstruct_image(
    coeffs: SpectrumVector,
    lattice: SamplingLattice,
    resolution: int = DEFAULT_RESOLUTION,
    value_kind: str = "real_part",
) -> ImageGrid:
    """Evaluate the truncated series ``sum_ell g_ell exp(2 pi i ell.x / a)`` at
    the pixel centres.

    The zero entry holds the estimate of the mean ``s_0`` and multiplies the
    constant mode.
    """
    coeffs.check_against(lattice)
    if resolution < lattice.side:
        raise InvalidParameterError(
            f"resolution {resolution} below 2N+1 = {lattice.side}"
        )
    a, n = lattice.a, lattice.side
    x = -a / 2 + (np.arange(resolution) + 0.5) * a / resolution
    E = np.exp(2j * np.pi / a * np.outer(x, np.arange(-lattice.N, lattice.N + 1)))
    # pixels[i, j] = sum_{l1, l2} C[l1, l2] E[i, l1] E[j, l2]
    field = E @ coeffs.values.reshape(n, n) @ E.T

    if value_kind == "real_part":
        pixels = field.real
    elif value_kind == "magnitude":
        pixels = np.abs(field)
    else:
        raise InvalidParameterError(f"unknown value_kind {value_kind!r}")
    return ImageGrid(a, pixels, value_kind, float(np.max(np.abs(field.imag))))
