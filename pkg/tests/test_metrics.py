import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from skimage.metrics import structural_similarity

from sparse_isp.errors import DimensionMismatchError, ImageTooSmallError
from sparse_isp.metrics import PSNR_CAP_DB, psnr, ssim, timed


def _img(seed, shape=(32, 32)):
    return np.random.default_rng(seed).standard_normal(shape)


def test_psnr_identical_is_capped():
    x = _img(0)
    assert psnr(x, x) == PSNR_CAP_DB


def test_psnr_example():
    x = np.zeros((4, 4))
    x[0, 0] = 1.0
    y = x + 0.1
    assert psnr(x, y) == pytest.approx(20.0, abs=1e-12)


def test_psnr_decreases_with_noise():
    x = _img(1)
    w = _img(2)
    vals = [psnr(x, x + s * w) for s in (0.01, 0.1, 1.0)]
    assert vals[0] > vals[1] > vals[2]


def test_shape_mismatch():
    with pytest.raises(DimensionMismatchError):
        psnr(np.zeros((4, 4)), np.zeros((4, 5)))
    with pytest.raises(DimensionMismatchError):
        ssim(np.zeros((12, 12)), np.zeros((13, 12)))


def test_ssim_identity_and_too_small():
    x = _img(3)
    assert ssim(x, x) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ImageTooSmallError):
        ssim(np.zeros((10, 40)), np.zeros((10, 40)))


def test_ssim_penalizes_affine_change():
    x = _img(4)
    assert ssim(x, 0.5 * x + 1.0) < 1.0


@settings(max_examples=30)
@given(st.integers(0, 2**31), st.floats(0.01, 3))
def test_ssim_symmetric_and_bounded(seed, s):
    x = _img(seed, (16, 16))
    y = x + s * _img(seed + 1, (16, 16))
    L = 10.0
    v = ssim(x, y, data_range=L)
    assert v == pytest.approx(ssim(y, x, data_range=L), abs=1e-12)
    assert -1.0 <= v <= 1.0


@pytest.mark.parametrize("seed", range(5))
def test_ssim_matches_independent_implementation(seed):
    x = _img(seed, (40, 37))
    y = x + 0.5 * _img(seed + 10, (40, 37))
    ref = structural_similarity(x, y, gaussian_weights=True, sigma=1.5,
                                use_sample_covariance=False, data_range=float(x.max() - x.min()))
    assert ssim(x, y) == pytest.approx(ref, abs=1e-6)


def test_scores_are_permutation_invariant_in_psnr():
    x, y = _img(5), _img(6)
    perm = np.random.default_rng(0).permutation(x.size)
    px, py = x.ravel()[perm].reshape(x.shape), y.ravel()[perm].reshape(y.shape)
    assert psnr(px, py) == pytest.approx(psnr(x, y), rel=1e-12)


def test_timed():
    out, secs = timed(lambda: sum(range(1000)))
    assert out == 499500 and secs >= 0
