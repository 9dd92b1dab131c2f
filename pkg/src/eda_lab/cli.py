"""Command line interface.

Subcommands: `run` executes runs of a single configuration, `sweep` executes
a preset or custom sweep and writes runs.csv plus cells.csv (and optionally
figures), `oracle` prints the exact one-step quantities for a frequency
vector, `grid` prints the experiment grid of population sizes, and `report`
renders figures from an existing cells CSV.

Exit codes: 0 on success, 2 on usage errors, 3 on I/O failures.  The
environment variable EDA_LAB_SEED, when set, overrides --seed for run and
sweep.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys

from . import harness, oracle, report
from .benchmarks import BENCHMARK_TOKENS
from .core import DEFAULT_ITERATION_CAP
from .instrumentation import DEFAULT_BETA

USAGE_EXIT = 2
IO_EXIT = 3


def _add_pbar_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument(
        "--pbar-one-over-n",
        action="store_true",
        help="clamp frequencies into [1/n, 1 - 1/n] (the default)",
    )
    group.add_argument("--pbar", type=float, default=None, help="explicit clamping margin")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eda-lab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one configuration repeatedly")
    p_run.add_argument("--benchmark", choices=BENCHMARK_TOKENS, default="dynbv")
    p_run.add_argument("--n", type=int, default=300)
    p_run.add_argument("--k", type=float, required=True)
    p_run.add_argument("--runs", type=int, default=1)
    p_run.add_argument("--seed", type=int, default=42)
    p_run.add_argument("--cap", type=int, default=DEFAULT_ITERATION_CAP)
    p_run.add_argument("--beta", type=float, default=DEFAULT_BETA)
    _add_pbar_flags(p_run)
    p_run.add_argument("--out", default="runs.csv", help="per-run CSV output path")

    p_sweep = sub.add_parser("sweep", help="run a preset or custom sweep")
    source = p_sweep.add_mutually_exclusive_group(required=True)
    source.add_argument("--preset", choices=harness.PRESET_NAMES)
    source.add_argument("--spec", help="key=value file describing a custom sweep")
    p_sweep.add_argument("--out-dir", default="results")
    p_sweep.add_argument("--parallelism", type=int, default=1)
    p_sweep.add_argument("--seed", type=int, default=42)
    p_sweep.add_argument(
        "--figures", action="store_true", help="also render figures into the output directory"
    )

    p_oracle = sub.add_parser("oracle", help="exact one-step quantities for given frequencies")
    p_oracle.add_argument("--freqs", required=True, help="text file of frequencies")
    p_oracle.add_argument("--bit", type=int, required=True, help="designated bit, 0-based")
    p_oracle.add_argument("--k", type=float, required=True)

    p_grid = sub.add_parser("grid", help="print the experiment grid of population sizes")
    p_grid.add_argument("--min", type=float, required=True)
    p_grid.add_argument("--max", type=float, required=True)

    p_report = sub.add_parser("report", help="render figures from a cells CSV")
    p_report.add_argument("--cells", required=True)
    p_report.add_argument("--out-dir", default=".")
    p_report.add_argument("--cap", type=float, default=None, help="draw the iteration cap line")

    return parser


def _seed_override(seed: int) -> int:
    raw = os.environ.get("EDA_LAB_SEED")
    if raw is None or raw == "":
        return seed
    try:
        return int(raw)
    except ValueError as exc:
        raise ValueError(f"EDA_LAB_SEED must be an integer, got {raw!r}") from exc


def _parse_spec_file(path: str) -> harness.SweepSpec:
    """Build a SweepSpec from a key=value file (# starts a comment)."""
    fields: dict = {}
    with open(path) as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if key == "n":
                fields["n"] = int(value)
            elif key == "k_values":
                fields["k_values"] = tuple(float(v) for v in value.split(","))
            elif key == "runs":
                fields["runs_per_cell"] = int(value)
            elif key == "benchmark":
                fields["benchmark"] = value
            elif key == "cap":
                fields["iteration_cap"] = int(value)
            elif key == "beta":
                fields["beta"] = float(value)
            elif key == "pbar":
                fields["pbar"] = None if value in ("1/n", "one-over-n") else float(value)
            elif key == "seed":
                fields["master_seed"] = int(value)
            elif key == "parallelism":
                fields["parallelism"] = int(value)
            else:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
    missing = {"n", "k_values", "runs_per_cell"} - fields.keys()
    if missing:
        raise ValueError(f"{path}: missing required keys: {sorted(missing)}")
    return harness.SweepSpec(**fields)


def _cmd_run(args) -> int:
    spec = harness.SweepSpec(
        n=args.n,
        k_values=(args.k,),
        runs_per_cell=args.runs,
        benchmark=args.benchmark,
        pbar=args.pbar,
        beta=args.beta,
        iteration_cap=args.cap,
        master_seed=_seed_override(args.seed),
    )
    rows, cells = harness.run_sweep(spec)
    harness.write_runs_csv(rows, args.out)
    for cell in cells:
        print(
            f"k={cell.K:g} runs={cell.runs} median_iterations={cell.median_iterations} "
            f"frac_hit_cap={cell.frac_hit_cap:g} "
            f"median_lower_boundary_bits={cell.median_lower_boundary_bits} "
            f"median_bits_below_beta={cell.median_bits_below_beta}"
        )
    return 0


def _cmd_sweep(args) -> int:
    if args.preset:
        spec = harness.replicate(
            args.preset, master_seed=_seed_override(args.seed), parallelism=args.parallelism
        )
    else:
        spec = _parse_spec_file(args.spec)
        spec = dataclasses.replace(
            spec, master_seed=_seed_override(spec.master_seed), parallelism=args.parallelism
        )
    os.makedirs(args.out_dir, exist_ok=True)
    rows, cells = harness.run_sweep(spec)
    runs_path = os.path.join(args.out_dir, "runs.csv")
    cells_path = os.path.join(args.out_dir, "cells.csv")
    harness.write_runs_csv(rows, runs_path)
    harness.write_cells_csv(cells, cells_path)
    written = [runs_path, cells_path]
    if args.figures:
        written += report.render_all(cells_path, args.out_dir, cap=spec.iteration_cap)
    for path in written:
        print(path)
    return 0


def _read_freqs(path: str):
    with open(path) as handle:
        text = handle.read()
    tokens = text.replace(",", " ").split()
    if not tokens:
        raise ValueError(f"{path}: no frequencies found")
    return [float(t) for t in tokens]


def _cmd_oracle(args) -> int:
    freqs = _read_freqs(args.freqs)
    signal = oracle.signal_probability(freqs, args.bit)
    kernel = oracle.transition_kernel(freqs, args.bit, args.k)
    drift = oracle.expected_drift(freqs, args.bit, args.k)
    print(f"signal_probability={signal!r}")
    others = [p for j, p in enumerate(freqs) if j != args.bit]
    if any(0.0 < p < 1.0 for p in others):
        lower, upper = oracle.signal_probability_bounds(freqs, args.bit)
        print(f"lower_bound={lower!r}")
        print(f"upper_bound={upper!r}")
    print(f"p_up={kernel.p_up!r}")
    print(f"p_down={kernel.p_down!r}")
    print(f"p_stay={kernel.p_stay!r}")
    print(f"expected_drift={drift!r}")
    return 0


def _cmd_grid(args) -> int:
    for k in harness.experiment_k_grid(args.min, args.max):
        print(f"{k:g}")
    return 0


def _cmd_report(args) -> int:
    os.makedirs(args.out_dir, exist_ok=True)
    for path in report.render_all(args.cells, args.out_dir, cap=args.cap):
        print(path)
    return 0


_COMMANDS = {
    "run": _cmd_run,
    "sweep": _cmd_sweep,
    "oracle": _cmd_oracle,
    "grid": _cmd_grid,
    "report": _cmd_report,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ValueError as exc:
        print(f"eda-lab: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except OSError as exc:
        print(f"eda-lab: {exc}", file=sys.stderr)
        return IO_EXIT


if __name__ == "__main__":
    sys.exit(main())
