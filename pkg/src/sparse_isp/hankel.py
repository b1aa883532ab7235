"""Wrap-around Hankel lifting of a length-M vector.

``lift(g, p)[i, j] = g[(i + j) % M]``.  The lifted matrix is ``p`` columns of
a circulant, so every index occurs exactly ``p`` times; this makes the
adjoint a p-fold accumulation and the left inverse a plain average.
"""
from __future__ import annotations

import numpy as np

from .errors import FilterTooLongError, InvalidPencilError, InvalidParameterError

DEFAULT_RANK_TOL = 1e-8


def default_pencil(M: int) -> int:
    return max(1, min(M - 1, -(-M // 4)))


def hankel_index(M: int, p: int) -> np.ndarray:
    if not 1 <= p < M:
        raise InvalidPencilError(f"pencil size must satisfy 1 <= p < M={M}, got {p}")
    return (np.arange(M)[:, None] + np.arange(p)[None, :]) % M


def lift(g, p: int) -> np.ndarray:
    g = np.asarray(g)
    return g[hankel_index(g.shape[0], p)]


def adjoint(X) -> np.ndarray:
    """Sum every entry of ``X`` into slot ``(i + j) % M``."""
    X = np.asarray(X)
    M, p = X.shape
    # Column j contributes X[:, j] rolled forward by j.
    out = np.zeros(M, dtype=np.result_type(X.dtype, np.float64))
    for j in range(p):
        out += np.roll(X[:, j], j)
    return out


def pinv_lift(X) -> np.ndarray:
    X = np.asarray(X)
    return adjoint(X) / X.shape[1]


def numeric_rank(X, rel_tol: float = DEFAULT_RANK_TOL) -> int:
    if not 0 < rel_tol < 1:
        raise InvalidParameterError(f"rel_tol must lie in (0, 1), got {rel_tol}")
    sv = np.linalg.svd(np.asarray(X), compute_uv=False)
    if sv.size == 0 or sv[0] == 0:
        return 0
    return int(np.sum(sv > rel_tol * sv[0]))


def circular_convolve(h, g) -> np.ndarray:
    """``(h * g)[k] = sum_i h[i] g[(k - i) % M]``."""
    h = np.asarray(h)
    g = np.asarray(g)
    M = g.shape[0]
    out = np.zeros(M, dtype=np.result_type(h.dtype, g.dtype, np.float64))
    for i, hi in enumerate(h):
        out += hi * np.roll(g, i)
    return out


def annihilation_residual(g, h) -> float:
    """Normalized residual ``||h * g|| / (||h|| ||g||)`` of circular convolution.

    Zero exactly when ``h`` annihilates ``g``; returns 0 for ``g = 0``.
    """
    g = np.asarray(g)
    h = np.asarray(h)
    if h.shape[0] > g.shape[0]:
        raise FilterTooLongError(f"filter length {h.shape[0]} exceeds signal length {g.shape[0]}")
    ng, nh = np.linalg.norm(g), np.linalg.norm(h)
    if ng == 0:
        return 0.0
    if nh == 0:
        raise InvalidParameterError("filter must be nonzero")
    return float(np.linalg.norm(circular_convolve(h, g)) / (nh * ng))
