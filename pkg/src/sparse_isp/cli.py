"""``sparse-isp`` command line: simulate, reconstruct, sweep.

Exit codes: 0 success, 2 configuration error, 3 solver failure.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import io
from .config import load_experiment
from .errors import ConfigError, SparseISPError
from .forward import NoiseSpec, add_awgn, mask_size, synthesize
from .pipeline import METHODS, Experiment, reference_image, run_cell

log = logging.getLogger("sparse_isp")

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER = 0, 2, 3

SWEEP_COLUMNS = (
    "method", "rate", "measurements", "snr_db", "trials",
    "psnr_mean", "psnr_std", "ssim_mean", "ssim_std",
    "seconds_mean", "seconds_std", "iterations_mean",
)


def parse_snr(text: str) -> float:
    if text.strip().lower() in ("inf", "+inf", "infinity", "none"):
        return math.inf
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number or 'inf': {text!r}") from None


def parse_rate(text: str) -> float:
    r = float(text)
    if not 0 < r <= 1:
        raise argparse.ArgumentTypeError(f"rate must lie in (0, 1], got {r}")
    return r


def parse_rates(text: str) -> list[float]:
    return [parse_rate(t) for t in text.replace(",", " ").split()]


def rate_tag(rate: float) -> str:
    return f"{rate:g}"


def sweep_seed(base: int, rate_index: int, trial: int) -> int:
    """Per-cell seed, a pure function of (base seed, rate index, trial index)."""
    ss = np.random.SeedSequence([base, rate_index, trial])
    return int(ss.generate_state(1, np.uint64)[0])


def _metrics_row(outcome, timing: bool) -> dict:
    return {
        "method": outcome.method,
        "rate": outcome.rate,
        "snr_db": outcome.snr_db,
        "seed": outcome.seed,
        "psnr_db": outcome.psnr_db,
        "ssim": outcome.ssim,
        "wall_seconds": outcome.wall_seconds if timing else math.nan,
        "iterations": outcome.iterations,
    }


def cmd_simulate(exp: Experiment, out_dir: Path, snr_db: float = math.inf, seed: int = 0) -> None:
    spec = add_awgn(synthesize(exp.source, exp.lattice), NoiseSpec(snr_db, seed))
    io.write_farfield_csv(out_dir / "farfield.csv", spec, exp.lattice)
    io.write_image(out_dir, "reference", reference_image(exp))


def cmd_reconstruct(
    exp: Experiment,
    out_dir: Path,
    rate: float,
    snr_db: float,
    method: str,
    seed: int,
    timing: bool = True,
):
    out = run_cell(exp, method, rate, snr_db, seed)
    stem = f"{method}_{rate_tag(rate)}"
    io.write_image(out_dir, f"recon_{stem}", out.image)
    if "trace" in out.image.meta:
        io.write_trace(out_dir / f"trace_{stem}.csv", out.image.meta["trace"])
    io.append_metrics(out_dir / "metrics.csv", _metrics_row(out, timing))
    return out


def _sweep_cell(args):
    exp, method, rate, snr_db, seed, reference = args
    out = run_cell(exp, method, rate, snr_db, seed, reference)
    # Images stay in the worker; only scores cross the process boundary.
    return (out.method, out.rate, out.snr_db, out.seed, out.psnr_db, out.ssim,
            out.wall_seconds, out.iterations)


def cmd_sweep(
    exp: Experiment,
    out_dir: Path,
    rates: list[float],
    snr_db: float,
    trials: int,
    seed: int = 0,
    methods=METHODS,
    workers: int = 1,
    timing: bool = True,
) -> list[dict]:
    if not rates:
        raise ConfigError("sweep needs at least one rate")
    if trials < 1:
        raise ConfigError("trials must be >= 1")
    reference = reference_image(exp)
    cells = [
        (exp, method, rate, snr_db, sweep_seed(seed, ri, t), reference)
        for ri, rate in enumerate(rates)
        for t in range(trials)
        for method in methods
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_cell, cells))
    else:
        results = [_sweep_cell(c) for c in cells]

    keys = ("method", "rate", "snr_db", "seed", "psnr_db", "ssim", "wall_seconds", "iterations")
    per_cell = [dict(zip(keys, r)) for r in results]
    if not timing:
        for row in per_cell:
            row["wall_seconds"] = math.nan
    io.write_table(out_dir / "sweep_cells.csv", io.METRICS_COLUMNS, per_cell)

    summary = []
    for rate in rates:
        for method in methods:
            rows = [r for r in per_cell if r["method"] == method and r["rate"] == rate]
            ps = np.array([r["psnr_db"] for r in rows])
            ss = np.array([r["ssim"] for r in rows])
            ts = np.array([r["wall_seconds"] for r in rows])
            its = np.array([r["iterations"] for r in rows], dtype=float)
            summary.append({
                "method": method,
                "rate": rate,
                "measurements": mask_size(exp.lattice.M, rate),
                "snr_db": snr_db,
                "trials": trials,
                "psnr_mean": ps.mean(), "psnr_std": ps.std(),
                "ssim_mean": ss.mean(), "ssim_std": ss.std(),
                "seconds_mean": ts.mean(), "seconds_std": ts.std(),
                "iterations_mean": its.mean(),
            })
    io.write_table(out_dir / "sweep.csv", SWEEP_COLUMNS, summary)
    return summary


def apply_overrides(exp: Experiment, args) -> Experiment:
    """Fold ``--rank`` / ``--l1-lambda`` into the experiment."""
    try:
        if getattr(args, "rank", None) is not None:
            exp = replace(exp, aloha=replace(exp.aloha, rank=args.rank))
        if getattr(args, "l1_lambda", None) is not None:
            exp = replace(exp, l1=replace(exp.l1, lambda_reg=args.l1_lambda))
    except SparseISPError as exc:
        raise ConfigError(str(exc)) from exc
    return exp


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sparse-isp",
        description="Multipolar source reconstruction from sub-sampled far-field data.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", type=Path, default=None,
                       help="experiment file (default: built-in two-monopole/two-dipole setup)")
        p.add_argument("--out-dir", type=Path, default=Path("."))
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--snr-db", type=parse_snr, default=math.inf)

    def solver_knobs(p):
        p.add_argument("--rank", type=int, default=None, help="ALOHA factor rank (overrides config)")
        p.add_argument("--l1-lambda", type=float, default=None,
                       help="L1 regularization weight (overrides config)")

    p = sub.add_parser("simulate", help="write far-field data and the full-data reference image")
    common(p)

    p = sub.add_parser("reconstruct", help="reconstruct from a random sub-sample and score it")
    common(p)
    p.add_argument("--rate", type=parse_rate, default=0.15)
    p.add_argument("--method", choices=METHODS, default="aloha")
    solver_knobs(p)
    p.add_argument("--timing", action=argparse.BooleanOptionalAction, default=True,
                   help="record wall time (disable for byte-reproducible metrics)")

    p = sub.add_parser("sweep", help="run every method over a list of rates and trials")
    common(p)
    p.add_argument("--rates", type=parse_rates, default=[0.05, 0.1, 0.15, 0.3])
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--methods", type=lambda s: s.replace(",", " ").split(), default=list(METHODS))
    p.add_argument("--workers", type=int, default=1)
    solver_knobs(p)
    p.add_argument("--timing", action=argparse.BooleanOptionalAction, default=True)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        exp = apply_overrides(load_experiment(args.config), args)
        args.out_dir.mkdir(parents=True, exist_ok=True)
        if args.command == "simulate":
            cmd_simulate(exp, args.out_dir, args.snr_db, args.seed)
        elif args.command == "reconstruct":
            out = cmd_reconstruct(exp, args.out_dir, args.rate, args.snr_db, args.method,
                                  args.seed, args.timing)
            print(f"{out.method} rate={out.rate:g} psnr={out.psnr_db:.4f} dB "
                  f"ssim={out.ssim:.4f} iters={out.iterations}")
        else:
            bad = [m for m in args.methods if m not in METHODS]
            if bad:
                raise ConfigError(f"unknown methods {bad}")
            cmd_sweep(exp, args.out_dir, args.rates, args.snr_db, args.trials, args.seed,
                      tuple(args.methods), args.workers, args.timing)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SparseISPError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
