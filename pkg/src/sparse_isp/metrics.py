"""Image quality scores against the full-data reference, and wall-clock timing."""
from __future__ import annotations

import time
from typing import Callable, TypeVar

import numpy as np
from scipy.signal import convolve2d

from .errors import DimensionMismatchError, ImageTooSmallError
from .model import ImageGrid

T = TypeVar("T")

PSNR_CAP_DB = 100.0
SSIM_WIN = 11
SSIM_SIGMA = 1.5
SSIM_K1, SSIM_K2 = 0.01, 0.03


def _pixels(img) -> np.ndarray:
    return img.pixels if isinstance(img, ImageGrid) else np.asarray(img, dtype=float)


def _pair(reference, test):
    x, y = _pixels(reference), _pixels(test)
    if x.shape != y.shape:
        raise DimensionMismatchError(f"image shapes differ: {x.shape} vs {y.shape}")
    return x, y


def psnr(reference, test) -> float:
    """PSNR in dB with peak ``max |reference|``, capped at ``PSNR_CAP_DB``."""
    x, y = _pair(reference, test)
    peak2 = float(np.max(np.abs(x))) ** 2
    mse = float(np.mean((x - y) ** 2))
    if mse <= peak2 * 1e-10:
        return PSNR_CAP_DB
    return float(10 * np.log10(peak2 / mse))


def gaussian_window(size: int = SSIM_WIN, sigma: float = SSIM_SIGMA) -> np.ndarray:
    t = np.arange(size) - (size - 1) / 2
    g = np.exp(-(t**2) / (2 * sigma**2))
    w = np.outer(g, g)
    return w / w.sum()


def ssim(reference, test, data_range: float | None = None) -> float:
    """Mean SSIM over all fully covered 11x11 Gaussian windows.

    Stabilizers use ``data_range``, by default the dynamic range
    ``max - min`` of the reference.  With a fixed ``data_range`` the score is
    symmetric in its arguments.
    """
    x, y = _pair(reference, test)
    if min(x.shape) < SSIM_WIN:
        raise ImageTooSmallError(f"SSIM needs sides >= {SSIM_WIN}, got {x.shape}")
    L = float(x.max() - x.min()) if data_range is None else float(data_range)
    if L == 0:
        L = float(np.max(np.abs(x))) or 1.0
    c1, c2 = (SSIM_K1 * L) ** 2, (SSIM_K2 * L) ** 2
    w = gaussian_window()

    def filt(im):
        return convolve2d(im, w, mode="valid")

    mx, my = filt(x), filt(y)
    sxx = filt(x * x) - mx * mx
    syy = filt(y * y) - my * my
    sxy = filt(x * y) - mx * my
    num = (2 * mx * my + c1) * (2 * sxy + c2)
    den = (mx * mx + my * my + c1) * (sxx + syy + c2)
    return float(np.mean(num / den))


def timed(work: Callable[[], T]) -> tuple[T, float]:
    """Run ``work()`` and return its result with elapsed monotonic seconds."""
    t0 = time.perf_counter()
    out = work()
    return out, time.perf_counter() - t0
