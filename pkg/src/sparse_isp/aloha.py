"""Low-rank wrap-around Hankel completion (ALOHA) by factorized ADMM.

The completion problem

    minimize ||H_p(g)||_*  subject to  g[obs] = data[obs]

is solved in the factorized form ``H_p(g) = U V^H`` with the nuclear norm
replaced by ``(||U||_F^2 + ||V||_F^2) / 2``.  Each sweep updates ``U`` and
``V`` by ridge-type least squares against ``H_p(g) + Lam``, projects
``U V^H - Lam`` back onto Hankel space, re-imposes the observed entries and
takes a dual ascent step on ``Lam``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import hankel
from .errors import DivergedError, InvalidParameterError, LengthMismatchError, RankTooLargeError
from .fourier import (
    DEFAULT_RESOLUTION,
    coeffs_from_farfield,
    farfield_to_coeff_factors,
    reconstruct_image,
)
from .model import ImageGrid, ObservationMask, SamplingLattice, SpectrumVector

log = logging.getLogger(__name__)

DIVERGENCE_WINDOW = 50


@dataclass(frozen=True)
class AlohaParams:
    """Solver settings.

    ``rank`` is the factor width (the number of annihilating filters kept);
    ``pencil=None`` selects ``ceil(M / 4)`` columns.
    """

    rank: int = 15
    pencil: Optional[int] = None
    mu: float = 1.0
    max_iters: int = 500
    tol: float = 1e-7
    seed: int = 0
    init_iters: int = 8

    def __post_init__(self):
        if self.rank < 1:
            raise InvalidParameterError(f"rank must be >= 1, got {self.rank}")
        if self.mu <= 0:
            raise InvalidParameterError(f"mu must be positive, got {self.mu}")
        if self.max_iters < 1:
            raise InvalidParameterError("max_iters must be >= 1")
        if self.tol < 0:
            raise InvalidParameterError("tol must be non-negative")


@dataclass(eq=False)
class AlohaResult:
    completed: SpectrumVector
    iterations_used: int
    final_residual: float
    objective_trace: list = field(default_factory=list)
    residual_trace: list = field(default_factory=list)
    converged: bool = False
    U: Optional[np.ndarray] = field(default=None, repr=False)
    V: Optional[np.ndarray] = field(default=None, repr=False)

    def trace_rows(self):
        """``(iter, residual, objective)`` rows for CSV export."""
        return [
            (i + 1, r, o)
            for i, (r, o) in enumerate(zip(self.residual_trace, self.objective_trace))
        ]


def _init_factors(H, r, seed, n_iter):
    # Randomized subspace iteration for the top-r right subspace; only an
    # M x r SVD is taken, never one of H itself.
    rng = np.random.default_rng(seed)
    p = H.shape[1]
    Q = rng.standard_normal((p, r)) + 1j * rng.standard_normal((p, r))
    Q, _ = np.linalg.qr(Q)
    for _ in range(n_iter):
        Q, _ = np.linalg.qr(H.conj().T @ (H @ Q))
    Ub, s, Wh = np.linalg.svd(H @ Q, full_matrices=False)
    root = np.sqrt(s)
    return Ub * root, (Q @ Wh.conj().T) * root


def solve(
    data: SpectrumVector,
    mask: ObservationMask,
    params: AlohaParams = AlohaParams(),
    callback: Optional[Callable[[int, np.ndarray], None]] = None,
) -> AlohaResult:
    """Complete the unobserved entries of ``data``.

    Parameters
    ----------
    data : SpectrumVector
        Values on the observed positions; other entries are ignored.
    mask : ObservationMask
    params : AlohaParams
    callback : callable, optional
        Called as ``callback(iteration, g)`` after every sweep with the
        current estimate (observed entries restored exactly).

    Raises
    ------
    RankTooLargeError
        If ``params.rank`` exceeds ``min(M, p)``.
    DivergedError
        If the factorization residual grows for ``DIVERGENCE_WINDOW``
        consecutive sweeps.
    """
    M = len(data)
    if mask.M != M:
        raise LengthMismatchError(f"mask length {mask.M} != data length {M}")
    p = params.pencil if params.pencil is not None else hankel.default_pencil(M)
    idx = hankel.hankel_index(M, p)
    r = params.rank
    if r > min(M, p):
        raise RankTooLargeError(f"rank {r} exceeds min(M, p) = {min(M, p)}")

    obs = mask.observed
    observed = data.values[obs]
    scale = float(np.max(np.abs(observed))) if observed.size else 0.0
    if scale == 0.0:
        out = np.zeros(M, dtype=complex)
        return AlohaResult(SpectrumVector(out, data.kind), 0, 0.0, [0.0], [0.0], True)

    # Work on unit-peak data so the fixed penalty mu is scale free.
    d = observed / scale
    g = np.zeros(M, dtype=complex)
    g[obs] = d
    Hg = g[idx]
    U, V = _init_factors(Hg, r, params.seed, params.init_iters)
    Lam = np.zeros_like(Hg)
    eye = np.eye(r)
    mu = params.mu

    objective, residuals = [], []
    converged = False
    growth = 0
    it = 0
    for it in range(1, params.max_iters + 1):
        T = Hg + Lam
        U = mu * (T @ V) @ np.linalg.inv(eye + mu * (V.conj().T @ V))
        V = mu * (T.conj().T @ U) @ np.linalg.inv(eye + mu * (U.conj().T @ U))
        UV = U @ V.conj().T

        g_new = hankel.pinv_lift(UV - Lam)
        g_new[obs] = d
        change = np.linalg.norm(g_new - g) / max(np.linalg.norm(g_new), np.finfo(float).tiny)
        g = g_new
        Hg = g[idx]
        R = Hg - UV
        Lam += R

        res = float(np.linalg.norm(R) / max(np.linalg.norm(Hg), np.finfo(float).tiny))
        objective.append(0.5 * scale * float(np.vdot(U, U).real + np.vdot(V, V).real))
        if residuals and res > residuals[-1]:
            growth += 1
        else:
            growth = 0
        residuals.append(res)
        if not np.isfinite(res) or growth >= DIVERGENCE_WINDOW:
            raise DivergedError(f"factorization residual grew for {growth} sweeps (iter {it})")

        if callback is not None:
            cur = g * scale
            cur[obs] = data.values[obs]
            callback(it, cur)
        if change < params.tol:
            converged = True
            break

    log.debug("aloha: %d sweeps, residual %.3e, converged=%s", it, residuals[-1], converged)
    out = g * scale
    out[obs] = observed
    s = np.sqrt(scale)
    return AlohaResult(
        SpectrumVector(out, data.kind),
        it,
        residuals[-1],
        objective,
        residuals,
        converged,
        U * s,
        V * s,
    )


def complete_farfield(
    data: SpectrumVector,
    mask: ObservationMask,
    params: AlohaParams,
    lattice: SamplingLattice,
    domain: str = "fourier_coeff",
) -> AlohaResult:
    """Complete far-field data, working either on the raw far-field values or
    on their per-entry Fourier-coefficient images.

    The coefficient map is a per-entry scale (exact off the zero entry), so
    the completed coefficients are mapped straight back; the zero-mode
    overlap correction is applied later by ``coeffs_from_farfield``.
    Observed far-field entries of the returned spectrum are the input values,
    bit for bit.
    """
    data.check_against(lattice)
    if domain == "far_field":
        return solve(data, mask, params)
    if domain != "fourier_coeff":
        raise InvalidParameterError(f"unknown completion domain {domain!r}")

    factors = farfield_to_coeff_factors(lattice)
    res = solve(SpectrumVector(data.values * factors, "fourier_coeff"), mask, params)
    u = res.completed.values / factors
    u[mask.observed] = data.values[mask.observed]
    res.completed = SpectrumVector(u, "far_field")
    return res


def reconstruct_from_sparse(
    data: SpectrumVector,
    mask: ObservationMask,
    params: AlohaParams,
    lattice: SamplingLattice,
    resolution: int = DEFAULT_RESOLUTION,
    domain: str = "fourier_coeff",
) -> ImageGrid:
    """Complete the far-field spectrum, then image it by Fourier inversion."""
    res = complete_farfield(data, mask, params, lattice, domain)
    img = reconstruct_image(coeffs_from_farfield(res.completed, lattice), lattice, resolution)
    img.meta.update(
        iterations=res.iterations_used,
        final_residual=res.final_residual,
        converged=res.converged,
    )
    return img
