"""Flat ``key = value`` experiment files.

Keys (``source.*`` may repeat; everything else at most once)::

    box.a              = 12
    lattice.N          = 20
    lattice.eps        = 1e-3
    source.monopole    = "x y lambda"
    source.dipole      = "x y psi_x psi_y"
    image.resolution   = 128
    aloha.rank         = 15
    aloha.pencil       = auto          # or an integer
    aloha.mu           = 1
    aloha.iters        = 500
    aloha.tol          = 1e-7
    aloha.domain       = fourier_coeff  # or far_field
    l1.lambda          = auto          # or a positive number
    l1.iters           = 2000
    l1.tol             = 1e-8

Blank lines and ``#`` comments are ignored; values may be double-quoted.
"""
from __future__ import annotations

import shlex
from pathlib import Path

from .aloha import AlohaParams
from .errors import ConfigError, SparseISPError
from .fourier import DEFAULT_RESOLUTION
from .l1cs import L1Params
from .model import MultipolarSource, SourceComponent, build_lattice
from .pipeline import Experiment

DEFAULT_CONFIG = """\
# Two monopoles and two dipoles in a 12 x 12 box, N = 20 lattice.
box.a = 12
lattice.N = 20
lattice.eps = 1e-3
source.monopole = "5 4 9"
source.monopole = "-4 -4 8"
source.dipole = "-4 5 1 -1"
source.dipole = "4 -4 -1 1"
image.resolution = 128
aloha.rank = 15
aloha.pencil = auto
aloha.mu = 1
aloha.iters = 500
aloha.tol = 1e-7
aloha.domain = fourier_coeff
l1.lambda = auto
l1.iters = 2000
l1.tol = 1e-8
"""

_SCALAR_KEYS = {
    "box.a", "lattice.N", "lattice.eps", "image.resolution",
    "aloha.rank", "aloha.pencil", "aloha.mu", "aloha.iters", "aloha.tol", "aloha.domain",
    "l1.lambda", "l1.iters", "l1.tol",
}
_REPEATED_KEYS = {"source.monopole", "source.dipole"}


def parse_text(text: str) -> tuple[dict, list]:
    """Split config text into scalar settings and an ordered source list."""
    scalars: dict[str, str] = {}
    sources: list[tuple[str, str, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        try:
            value = " ".join(shlex.split(value))
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: {exc}") from None
        if key in _REPEATED_KEYS:
            sources.append((key, value, lineno))
        elif key in _SCALAR_KEYS:
            if key in scalars:
                raise ConfigError(f"line {lineno}: duplicate key {key}")
            scalars[key] = value
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
    return scalars, sources


def _num(scalars, key, default, cast=float):
    if key not in scalars:
        return default
    try:
        return cast(scalars[key])
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {scalars[key]!r}") from None


def _component(key, value, lineno) -> SourceComponent:
    try:
        nums = [float(t) for t in value.split()]
    except ValueError:
        raise ConfigError(f"line {lineno}: non-numeric source {value!r}") from None
    if key == "source.monopole":
        if len(nums) != 3:
            raise ConfigError(f"line {lineno}: monopole needs 'x y lambda'")
        return SourceComponent.monopole(*nums)
    if len(nums) != 4:
        raise ConfigError(f"line {lineno}: dipole needs 'x y psi_x psi_y'")
    return SourceComponent.dipole(*nums)


def experiment_from_text(text: str) -> Experiment:
    scalars, sources = parse_text(text)
    if not sources:
        raise ConfigError("no source.monopole or source.dipole entries")
    src = MultipolarSource(tuple(_component(*s) for s in sources))

    pencil = scalars.get("aloha.pencil", "auto")
    lam = scalars.get("l1.lambda", "auto")
    domain = scalars.get("aloha.domain", "fourier_coeff")
    if domain not in ("fourier_coeff", "far_field"):
        raise ConfigError(f"aloha.domain: unknown domain {domain!r}")
    try:
        lattice = build_lattice(
            _num(scalars, "box.a", 12.0),
            _num(scalars, "lattice.N", 20, int),
            _num(scalars, "lattice.eps", 1e-3),
        )
        aloha = AlohaParams(
            rank=_num(scalars, "aloha.rank", 15, int),
            pencil=None if pencil == "auto" else _num(scalars, "aloha.pencil", None, int),
            mu=_num(scalars, "aloha.mu", 1.0),
            max_iters=_num(scalars, "aloha.iters", 500, int),
            tol=_num(scalars, "aloha.tol", 1e-7),
        )
        l1 = L1Params(
            lambda_reg=None if lam == "auto" else _num(scalars, "l1.lambda", None),
            max_iters=_num(scalars, "l1.iters", 2000, int),
            tol=_num(scalars, "l1.tol", 1e-8),
        )
        return Experiment(
            src, lattice, _num(scalars, "image.resolution", DEFAULT_RESOLUTION, int),
            aloha, l1, domain,
        )
    except ConfigError:
        raise
    except SparseISPError as exc:
        raise ConfigError(str(exc)) from exc


def load_experiment(path: str | Path | None) -> Experiment:
    if path is None:
        return experiment_from_text(DEFAULT_CONFIG)
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return experiment_from_text(text)


def default_experiment() -> Experiment:
    return experiment_from_text(DEFAULT_CONFIG)
