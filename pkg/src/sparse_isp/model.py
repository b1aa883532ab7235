"""Domain types: multipolar sources, the sampling lattice, spectra, masks, images.

All containers are frozen dataclasses; array fields are marked read-only on
construction so instances can be shared freely.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from .errors import (
    InvalidParameterError,
    LengthMismatchError,
    MixedComponentError,
    OutOfBoxError,
    ZeroComponentError,
)

SpectrumKind = Literal["far_field", "fourier_coeff"]
ValueKind = Literal["real_part", "magnitude"]

MIXED_TOL = 1e-12


def _frozen(arr, dtype=None) -> np.ndarray:
    out = np.array(arr, dtype=dtype, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class SourceComponent:
    """A point monopole (``lam``) or dipole (``psi``) located at ``z``."""

    z: tuple[float, float]
    lam: float = 0.0
    psi: tuple[float, float] = (0.0, 0.0)

    @classmethod
    def monopole(cls, x: float, y: float, lam: float) -> "SourceComponent":
        return cls((float(x), float(y)), float(lam), (0.0, 0.0))

    @classmethod
    def dipole(cls, x: float, y: float, px: float, py: float) -> "SourceComponent":
        return cls((float(x), float(y)), 0.0, (float(px), float(py)))


@dataclass(frozen=True)
class MultipolarSource:
    components: tuple[SourceComponent, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))

    def __len__(self):
        return len(self.components)

    def __add__(self, other: "MultipolarSource") -> "MultipolarSource":
        return MultipolarSource(self.components + other.components)

    @property
    def positions(self) -> np.ndarray:
        return np.array([c.z for c in self.components], dtype=float).reshape(-1, 2)

    @property
    def monopoles(self) -> np.ndarray:
        return np.array([c.lam for c in self.components], dtype=float)

    @property
    def dipoles(self) -> np.ndarray:
        return np.array([c.psi for c in self.components], dtype=float).reshape(-1, 2)


@dataclass(frozen=True, eq=False)
class SamplingLattice:
    """Observation directions and wavenumbers indexed by ``ell`` in ``[-N, N]^2``.

    Entries are stored in lexicographic ``(ell1, ell2)`` order; position ``m``
    holds ``ell = (m // (2N+1) - N, m % (2N+1) - N)``.  The ``ell = 0`` entry
    uses direction ``(1, 0)`` and wavenumber ``2*pi*eps/a``.
    """

    a: float
    N: int
    eps: float
    ell: np.ndarray
    dirs: np.ndarray
    k: np.ndarray

    @property
    def M(self) -> int:
        return self.ell.shape[0]

    @property
    def side(self) -> int:
        return 2 * self.N + 1

    @property
    def zero_pos(self) -> int:
        return self.M // 2

    def index_of(self, ell1: int, ell2: int) -> int:
        if max(abs(ell1), abs(ell2)) > self.N:
            raise IndexError(f"ell=({ell1}, {ell2}) outside |ell|_inf <= {self.N}")
        return (ell1 + self.N) * self.side + (ell2 + self.N)

    def ell_of(self, m: int) -> tuple[int, int]:
        if not 0 <= m < self.M:
            raise IndexError(m)
        return m // self.side - self.N, m % self.side - self.N

    @property
    def wavevectors(self) -> np.ndarray:
        """``k_m * dir_m``; equals ``2*pi*ell/a`` off the zero entry."""
        return self.k[:, None] * self.dirs


def build_lattice(a: float, N: int, eps: float) -> SamplingLattice:
    if not a > 0:
        raise InvalidParameterError(f"box side must be positive, got {a}")
    if int(N) != N or N < 1:
        raise InvalidParameterError(f"truncation order must be an integer >= 1, got {N}")
    if not 0 < eps < 1:
        raise InvalidParameterError(f"eps must lie in (0, 1), got {eps}")
    N = int(N)
    r = np.arange(-N, N + 1)
    l1, l2 = np.meshgrid(r, r, indexing="ij")
    ell = np.stack([l1.ravel(), l2.ravel()], axis=1)
    norm = np.hypot(ell[:, 0], ell[:, 1])
    nonzero = norm > 0
    dirs = np.empty((ell.shape[0], 2))
    dirs[nonzero] = ell[nonzero] / norm[nonzero, None]
    dirs[~nonzero] = (1.0, 0.0)
    k = 2.0 * np.pi / a * np.where(nonzero, norm, eps)
    return SamplingLattice(
        float(a), N, float(eps), _frozen(ell, np.int64), _frozen(dirs), _frozen(k)
    )


def validate_source(src: MultipolarSource, lattice: SamplingLattice | float) -> None:
    """Raise if ``src`` violates the point-source intensity or placement rules.

    ``lattice`` may also be given as the bare box side ``a``.
    """
    a = lattice.a if isinstance(lattice, SamplingLattice) else float(lattice)
    half = a / 2.0
    for j, c in enumerate(src.components):
        lam = float(c.lam)
        psi_norm = float(np.hypot(*c.psi))
        if abs(lam) + psi_norm == 0:
            raise ZeroComponentError(f"component {j} has zero intensity")
        if abs(lam) * psi_norm > MIXED_TOL:
            raise MixedComponentError(
                f"component {j} mixes monopole {lam} and dipole {c.psi}"
            )
        if not all(-half < float(x) < half for x in c.z):
            raise OutOfBoxError(f"component {j} at {c.z} outside (-{half}, {half})^2")


@dataclass(frozen=True, eq=False)
class SpectrumVector:
    values: np.ndarray
    kind: SpectrumKind

    def __post_init__(self):
        if self.kind not in ("far_field", "fourier_coeff"):
            raise ValueError(f"unknown spectrum kind {self.kind!r}")
        object.__setattr__(self, "values", _frozen(self.values, complex).ravel())

    def __len__(self):
        return self.values.shape[0]

    def check_against(self, lattice: SamplingLattice) -> None:
        if len(self) != lattice.M:
            raise LengthMismatchError(f"spectrum has {len(self)} entries, lattice {lattice.M}")


@dataclass(frozen=True, eq=False)
class ObservationMask:
    observed: np.ndarray
    M: int
    rate: float

    def __post_init__(self):
        obs = np.unique(np.asarray(self.observed, dtype=np.int64))
        if obs.size != np.asarray(self.observed).size:
            raise InvalidParameterError("mask positions must be unique")
        if obs.size and (obs[0] < 0 or obs[-1] >= self.M):
            raise InvalidParameterError(f"mask positions must lie in [0, {self.M})")
        if not 0 < self.rate <= 1:
            raise InvalidParameterError(f"rate must lie in (0, 1], got {self.rate}")
        object.__setattr__(self, "observed", _frozen(obs))

    def __len__(self):
        return self.observed.size

    def as_bool(self) -> np.ndarray:
        out = np.zeros(self.M, dtype=bool)
        out[self.observed] = True
        return out

    @classmethod
    def full(cls, M: int) -> "ObservationMask":
        return cls(np.arange(M), M, 1.0)


@dataclass(frozen=True, eq=False)
class ImageGrid:
    """Real pixel raster over the box ``(-a/2, a/2)^2``.

    ``pixels[i, j]`` sits at ``x = (-a/2 + (i+1/2) a/P, -a/2 + (j+1/2) a/P)``.
    ``imag_residue`` records the largest discarded imaginary part.
    """

    a: float
    pixels: np.ndarray
    value_kind: ValueKind = "real_part"
    imag_residue: float = 0.0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        px = np.asarray(self.pixels, dtype=float)
        if px.ndim != 2 or px.shape[0] != px.shape[1]:
            raise ValueError(f"image must be square, got shape {px.shape}")
        object.__setattr__(self, "pixels", _frozen(px))

    @property
    def resolution(self) -> int:
        return self.pixels.shape[0]

    @property
    def centers(self) -> np.ndarray:
        P = self.resolution
        return -self.a / 2 + (np.arange(P) + 0.5) * self.a / P

    def pixel_of(self, x: float, y: float) -> tuple[int, int]:
        P = self.resolution
        i = int(np.floor((x + self.a / 2) * P / self.a))
        j = int(np.floor((y + self.a / 2) * P / self.a))
        return min(max(i, 0), P - 1), min(max(j, 0), P - 1)
