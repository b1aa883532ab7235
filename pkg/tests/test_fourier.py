import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.ndimage import maximum_filter

from sparse_isp.errors import InvalidParameterError
from sparse_isp.forward import synthesize
from sparse_isp.fourier import (
    coeffs_from_farfield,
    farfield_from_coeffs,
    overlap_integral,
    reconstruct_image,
    zero_mode_coeff,
    zero_mode_prefactor,
)
from sparse_isp.model import MultipolarSource, SourceComponent, SpectrumVector, build_lattice

A = 12.0


def analytic_coeffs(src, lattice):
    """Direct Fourier coefficients (1/a^2) int S conj(phi_ell) of a point source."""
    kv = 2 * np.pi / lattice.a * lattice.ell
    out = np.zeros(lattice.M, dtype=complex)
    for c in src.components:
        amp = c.lam + 1j * (kv @ np.array(c.psi))
        out += amp * np.exp(-1j * (kv @ np.array(c.z)))
    return out / lattice.a**2


def gl_overlap(ell, eps, a, n=200):
    """Tensor Gauss-Legendre quadrature of phi_ell * conj(phi_ell0) over the box."""
    x, w = np.polynomial.legendre.leggauss(n)
    y, w = a / 2 * x, a / 2 * w
    f1 = np.sum(w * np.exp(2j * np.pi / a * (ell[0] - eps) * y))
    f2 = np.sum(w * np.exp(2j * np.pi / a * ell[1] * y))
    return f1 * f2


def test_zero_spectrum(lattice):
    out = coeffs_from_farfield(SpectrumVector(np.zeros(lattice.M), "far_field"), lattice)
    assert out.kind == "fourier_coeff"
    assert not np.any(out.values)


def test_centred_unit_monopole_has_flat_spectrum(lattice):
    src = MultipolarSource([SourceComponent.monopole(0, 0, 1)])
    s = coeffs_from_farfield(synthesize(src, lattice), lattice).values
    nz = np.arange(lattice.M) != lattice.zero_pos
    np.testing.assert_allclose(s[nz], 1 / A**2, rtol=1e-13)


def test_four_pole_first_mode(source, lattice):
    s = coeffs_from_farfield(synthesize(source, lattice), lattice)
    k = 2 * np.pi / A
    direct = sum(
        (c.lam + 1j * k * c.psi[0]) * np.exp(-1j * k * c.z[0]) for c in source.components
    ) / A**2
    assert s.values[lattice.index_of(1, 0)] == pytest.approx(direct, rel=1e-12)


def test_round_trip_all_nonzero_modes(source, lattice):
    s = coeffs_from_farfield(synthesize(source, lattice), lattice).values
    ref = analytic_coeffs(source, lattice)
    nz = np.arange(lattice.M) != lattice.zero_pos
    rel = np.abs(s[nz] - ref[nz]) / np.abs(ref[nz])
    assert rel.max() < 1e-10


def test_zero_mode_trivial(lattice):
    assert zero_mode_coeff(0, np.zeros(lattice.M), lattice) == 0


def test_zero_mode_prefactor_limit():
    for eps in (1e-2, 1e-4, 1e-6):
        lat = build_lattice(A, 1, eps)
        assert zero_mode_prefactor(lat) * A**2 == pytest.approx(1.0, abs=2 * eps**2)


def test_zero_mode_four_pole(source, lattice):
    s = coeffs_from_farfield(synthesize(source, lattice), lattice)
    truth = 17 / 144
    assert abs(s.values[lattice.zero_pos] - truth) < 1e-3 * truth


def test_zero_mode_correction_improves_leading_term(source, lattice):
    u = synthesize(source, lattice).values
    truth = 17 / 144
    others = coeffs_from_farfield(synthesize(source, lattice), lattice).values.copy()
    others[lattice.zero_pos] = 0
    with_corr = zero_mode_coeff(u[lattice.zero_pos], others, lattice)
    leading = zero_mode_coeff(u[lattice.zero_pos], np.zeros(lattice.M), lattice)
    assert abs(with_corr - truth) < abs(leading - truth) / 10


def test_overlap_examples():
    assert overlap_integral((1, 1), 1e-3, A) == 0
    assert abs(overlap_integral((1, 0), 0.0, A)) < 1e-14
    expected = 144 * np.sin(np.pi * (1 - 1e-3)) / (np.pi * (1 - 1e-3))
    val = overlap_integral((1, 0), 1e-3, A)
    assert val == pytest.approx(expected, rel=1e-13)
    assert abs(val - gl_overlap((1, 0), 1e-3, A)) < 1e-10


def test_overlap_matches_quadrature():
    ells = [(i, j) for i in range(-5, 6) for j in range(-5, 6) if (i, j) != (0, 0)]
    closed = overlap_integral(np.array(ells), 1e-3, A)
    for e, v in zip(ells, closed):
        assert abs(v - gl_overlap(e, 1e-3, A)) < 1e-10


def test_farfield_from_coeffs_inverts(source, lattice):
    u = synthesize(source, lattice)
    back = farfield_from_coeffs(coeffs_from_farfield(u, lattice), lattice, u.values[lattice.zero_pos])
    np.testing.assert_allclose(back.values, u.values, rtol=1e-13)


def test_image_of_zero_coefficients(small_lattice):
    img = reconstruct_image(SpectrumVector(np.zeros(small_lattice.M), "fourier_coeff"), small_lattice, 16)
    assert img.resolution == 16
    assert not np.any(img.pixels)


def test_image_of_constant_mode(small_lattice):
    c = np.zeros(small_lattice.M, dtype=complex)
    c[small_lattice.zero_pos] = 0.25
    img = reconstruct_image(SpectrumVector(c, "fourier_coeff"), small_lattice, 16)
    np.testing.assert_allclose(img.pixels, 0.25, rtol=1e-12)


def test_resolution_too_small(small_lattice):
    with pytest.raises(InvalidParameterError):
        reconstruct_image(SpectrumVector(np.zeros(small_lattice.M), "fourier_coeff"), small_lattice, 6)


def test_magnitude_mode(small_lattice):
    rng = np.random.default_rng(0)
    c = SpectrumVector(rng.standard_normal(small_lattice.M) + 1j * rng.standard_normal(small_lattice.M),
                       "fourier_coeff")
    re = reconstruct_image(c, small_lattice, 16)
    mag = reconstruct_image(c, small_lattice, 16, "magnitude")
    assert np.all(mag.pixels >= np.abs(re.pixels) - 1e-12)


def _random_coeffs(lat, seed):
    rng = np.random.default_rng(seed)
    return rng.standard_normal(lat.M) + 1j * rng.standard_normal(lat.M)


@settings(max_examples=25)
@given(st.integers(0, 2**31), st.floats(-3, 3), st.floats(-3, 3))
def test_image_is_linear(seed, alpha, beta):
    lat = build_lattice(A, 3, 1e-3)
    c1, c2 = _random_coeffs(lat, seed), _random_coeffs(lat, seed + 1)
    img = lambda c: reconstruct_image(SpectrumVector(c, "fourier_coeff"), lat, 16).pixels
    np.testing.assert_allclose(img(alpha * c1 + beta * c2), alpha * img(c1) + beta * img(c2),
                               atol=1e-10)


@settings(max_examples=25)
@given(st.integers(0, 2**31))
def test_conjugate_symmetric_coefficients_give_real_image(seed):
    lat = build_lattice(A, 4, 1e-3)
    c = _random_coeffs(lat, seed)
    c = 0.5 * (c + np.conj(c[::-1]))  # lexicographic reversal maps ell -> -ell
    img = reconstruct_image(SpectrumVector(c, "fourier_coeff"), lat, 20)
    assert img.imag_residue < 1e-10


def test_full_data_image_peaks(reference):
    """Monopoles are local maxima on their own pixel, lambda order preserved."""
    px = reference.pixels
    is_max = px == maximum_filter(px, size=3)
    peaks = []
    for z in [(5, 4), (-4, -4)]:
        i, j = reference.pixel_of(*z)
        win = np.argwhere(is_max[i - 1:i + 2, j - 1:j + 2])
        assert len(win), f"no local maximum within one pixel of {z}"
        peaks.append(px[i - 1:i + 2, j - 1:j + 2].max())
    assert peaks[0] > peaks[1]


def test_full_data_imag_residue_small(reference):
    assert reference.imag_residue < 1e-3 * np.abs(reference.pixels).max()
