"""CSV and PGM writers.  Every float is written with ``FLOAT_FMT`` so reruns
produce identical bytes."""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .model import ImageGrid, SamplingLattice, SpectrumVector

FLOAT_FMT = "{:.17g}"
METRICS_SCHEMA = "# sparse-isp metrics v1"
METRICS_COLUMNS = (
    "method", "rate", "snr_db", "seed", "psnr_db", "ssim", "wall_seconds", "iterations",
)
FARFIELD_COLUMNS = ("ell1", "ell2", "k", "dir_x", "dir_y", "re", "im")
TRACE_COLUMNS = ("iter", "residual", "objective")


def fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return FLOAT_FMT.format(float(x))


def write_farfield_csv(path: Path, spec: SpectrumVector, lattice: SamplingLattice) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(FARFIELD_COLUMNS)
        for m in range(lattice.M):
            l1, l2 = lattice.ell[m]
            v = spec.values[m]
            w.writerow([fmt(l1), fmt(l2), fmt(lattice.k[m]), fmt(lattice.dirs[m, 0]),
                        fmt(lattice.dirs[m, 1]), fmt(v.real), fmt(v.imag)])


def read_farfield_csv(path: Path) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(ell, values)`` from a file written by :func:`write_farfield_csv`."""
    with open(path, newline="") as f:
        rows = list(csv.DictReader(f))
    ell = np.array([(int(r["ell1"]), int(r["ell2"])) for r in rows])
    vals = np.array([complex(float(r["re"]), float(r["im"])) for r in rows])
    return ell, vals


def write_image_csv(path: Path, image: ImageGrid) -> None:
    """Row ``i`` holds pixels ``(i, 0..P-1)``: fixed x, increasing y."""
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        for row in image.pixels:
            w.writerow([fmt(v) for v in row])


def write_pgm(path: Path, image: ImageGrid) -> None:
    """8-bit binary graymap, min-max normalized, y pointing up.

    The normalization constants go to ``<path>.txt``.
    """
    px = image.pixels
    lo, hi = float(px.min()), float(px.max())
    span = hi - lo if hi > lo else 1.0
    gray = np.round((px - lo) / span * 255).astype(np.uint8)
    raster = gray.T[::-1]  # rows top-to-bottom in y, columns left-to-right in x
    P = image.resolution
    with open(path, "wb") as f:
        f.write(f"P5\n{P} {P}\n255\n".encode("ascii"))
        f.write(raster.tobytes())
    Path(str(path) + ".txt").write_text(
        f"min {fmt(lo)}\nmax {fmt(hi)}\nvalue_kind {image.value_kind}\n"
        f"imag_residue {fmt(image.imag_residue)}\n"
    )


def read_pgm(path: Path) -> np.ndarray:
    data = Path(path).read_bytes()
    parts = data.split(b"\n", 3)
    if parts[0] != b"P5":
        raise ValueError(f"{path}: not a binary PGM")
    w, h = (int(t) for t in parts[1].split())
    return np.frombuffer(parts[3], dtype=np.uint8).reshape(h, w)


def write_image(out_dir: Path, stem: str, image: ImageGrid) -> None:
    write_pgm(out_dir / f"{stem}.pgm", image)
    write_image_csv(out_dir / f"{stem}.csv", image)


def append_metrics(path: Path, row: dict) -> None:
    fresh = not path.exists() or path.stat().st_size == 0
    with open(path, "a", newline="") as f:
        if fresh:
            f.write(METRICS_SCHEMA + "\n")
            f.write(",".join(METRICS_COLUMNS) + "\n")
        w = csv.writer(f, lineterminator="\n")
        w.writerow([fmt(row[c]) for c in METRICS_COLUMNS])


def write_table(path: Path, columns, rows) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([fmt(r[c]) for c in columns])


def write_trace(path: Path, rows) -> None:
    """Solver convergence trace, one ``(iter, residual, objective)`` row per sweep."""
    write_table(path, TRACE_COLUMNS, [dict(zip(TRACE_COLUMNS, r)) for r in rows])
