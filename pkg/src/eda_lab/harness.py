"""Reproducible experiment sweeps over the population size k.

A sweep executes runs_per_cell independent runs for every k in a grid and
reports one row per run plus one summary per cell.  Each run draws its own
Philox stream keyed by (master_seed, k, run_index), so results are
independent of worker count and scheduling; rows are sorted by (k, run_id)
before emission and the CSV encoders below are deterministic, making sweep
output byte-stable.

Medians and quartiles use explicit order statistics: the lower-middle value
for the median (ceil(m/2)-th of m sorted values) and the ceil(f*m)-th value
for quantile f.  Capped runs enter these statistics with the cap value, so a
cell where most runs hit the cap reports the cap itself as its median.
"""

from __future__ import annotations

import concurrent.futures
import csv
import math
from dataclasses import dataclass, replace

from .benchmarks import BENCHMARK_TOKENS, benchmark_mode
from .core import DEFAULT_ITERATION_CAP, CgaConfig, run
from .instrumentation import DEFAULT_BETA
from .seeding import derive_seed

PRESET_NAMES = ("fig1", "fig1_right", "fig3", "fig1_lite", "fig3_lite", "drift_thm")


@dataclass(frozen=True)
class SweepSpec:
    """Full description of one sweep; picklable so workers can receive it."""

    n: int
    k_values: tuple[float, ...]
    runs_per_cell: int
    benchmark: str = "dynbv"
    pbar: float | None = None  # None resolves to 1/n per run
    beta: float = DEFAULT_BETA
    iteration_cap: int = DEFAULT_ITERATION_CAP
    master_seed: int = 42
    parallelism: int = 1


@dataclass(frozen=True)
class RunRow:
    """One run's CSV row; field order matches the emitted schema."""

    benchmark: str
    mode: str
    n: int
    K: float
    pbar: float
    run_id: int
    seed: int
    iterations_used: int
    optimum_found: bool
    hit_cap: bool
    lower_boundary_bits: int
    bits_below_beta: int
    final_variance: float


@dataclass(frozen=True)
class CellSummary:
    """Aggregates over the runs of one k cell."""

    K: float
    runs: int
    median_iterations: int
    q25: int
    q75: int
    frac_hit_cap: float
    median_lower_boundary_bits: int
    median_bits_below_beta: int


RUNS_HEADER = (
    "benchmark,mode,n,K,pbar,run_id,seed,iterations_used,optimum_found,hit_cap,"
    "lower_boundary_bits,bits_below_beta,final_variance"
).split(",")

CELLS_HEADER = (
    "K,runs,median_iterations,q25,q75,frac_hit_cap,"
    "median_lower_boundary_bits,median_bits_below_beta"
).split(",")


def experiment_k_grid(k_min: float, k_max: float) -> tuple[float, ...]:
    """Population-size grid with coarsening strides.

    Unit steps up to 420, multiples of 5 to 1000, multiples of 20 to 6000
    and multiples of 500 to 10000; nothing beyond 10000 exists.  Returns the
    grid values inside [k_min, k_max].
    """
    if k_min < 1 or k_max < k_min:
        raise ValueError(f"need 1 <= k_min <= k_max, got [{k_min}, {k_max}]")
    full = list(range(1, 421))
    full += list(range(425, 1001, 5))
    full += list(range(1020, 6001, 20))
    full += list(range(6500, 10001, 500))
    values = tuple(float(k) for k in full if k_min <= k <= k_max)
    if not values:
        raise ValueError(f"no grid values inside [{k_min}, {k_max}]")
    return values


_PRESETS: dict[str, SweepSpec] = {
    "fig1": SweepSpec(n=300, k_values=experiment_k_grid(6, 10000), runs_per_cell=50),
    "fig1_right": SweepSpec(n=300, k_values=experiment_k_grid(18, 90), runs_per_cell=50),
    "fig3": SweepSpec(n=300, k_values=experiment_k_grid(5, 800), runs_per_cell=20),
    "fig1_lite": SweepSpec(
        n=300,
        k_values=(6, 7, 10, 15, 20, 30, 45, 60, 90, 150, 300, 600, 1000, 2000),
        runs_per_cell=20,
    ),
    # Subsample of the fig3 grid spanning both sides of the boundary-visit
    # drop-off, dense enough to locate it at a glance.
    "fig3_lite": SweepSpec(
        n=300,
        k_values=(5, 10, 20, 30, 50, 100, 150, 200, 300, 400, 500, 600, 700, 800),
        runs_per_cell=20,
    ),
    "drift_thm": SweepSpec(n=300, k_values=(50, 100, 200, 300), runs_per_cell=50),
}


def replicate(preset: str, master_seed: int = 42, parallelism: int = 1) -> SweepSpec:
    """SweepSpec for a named experiment preset."""
    if preset not in _PRESETS:
        raise ValueError(f"unknown preset {preset!r}, expected one of {PRESET_NAMES}")
    return replace(_PRESETS[preset], master_seed=master_seed, parallelism=parallelism)


def order_statistic(values, fraction: float) -> float:
    """ceil(fraction * m)-th smallest of m values (1-based), no interpolation."""
    ordered = sorted(values)
    rank = max(1, math.ceil(fraction * len(ordered)))
    return ordered[rank - 1]


def lower_median(values) -> float:
    return order_statistic(values, 0.5)


def execute_run(spec: SweepSpec, k: float, run_id: int) -> RunRow:
    """Run one cell member with its derived seed and package the row."""
    seed = derive_seed(spec.master_seed, k, run_id)
    config = CgaConfig(
        n=spec.n, k=k, pbar=spec.pbar, iteration_cap=spec.iteration_cap, seed=seed
    )
    result = run(config, spec.benchmark, beta=spec.beta)
    bench, mode = benchmark_mode(spec.benchmark)
    return RunRow(
        benchmark=bench,
        mode=mode,
        n=spec.n,
        K=float(k),
        pbar=config.margin,
        run_id=run_id,
        seed=seed,
        iterations_used=result.iterations_used,
        optimum_found=result.optimum_found,
        hit_cap=result.hit_cap,
        lower_boundary_bits=result.lower_boundary_bits,
        bits_below_beta=result.bits_below_beta,
        final_variance=result.final_variance,
    )


def _task(args: tuple[SweepSpec, float, int]) -> RunRow:
    return execute_run(*args)


def run_sweep(spec: SweepSpec) -> tuple[list[RunRow], list[CellSummary]]:
    """Execute all cells, returning per-run rows and per-cell summaries.

    Output is sorted by (K, run_id) and does not depend on parallelism.
    """
    if spec.benchmark not in BENCHMARK_TOKENS:
        raise ValueError(f"unknown benchmark {spec.benchmark!r}")
    tasks = [(spec, k, run_id) for k in spec.k_values for run_id in range(spec.runs_per_cell)]
    if spec.parallelism <= 1:
        rows = [_task(t) for t in tasks]
    else:
        chunk = max(1, len(tasks) // (spec.parallelism * 4))
        with concurrent.futures.ProcessPoolExecutor(max_workers=spec.parallelism) as pool:
            rows = list(pool.map(_task, tasks, chunksize=chunk))
    rows.sort(key=lambda r: (r.K, r.run_id))
    return rows, summarize_cells(rows)


def summarize_cells(rows: list[RunRow]) -> list[CellSummary]:
    cells = []
    for k in sorted({row.K for row in rows}):
        members = [row for row in rows if row.K == k]
        iters = [row.iterations_used for row in members]
        cells.append(
            CellSummary(
                K=k,
                runs=len(members),
                median_iterations=int(lower_median(iters)),
                q25=int(order_statistic(iters, 0.25)),
                q75=int(order_statistic(iters, 0.75)),
                frac_hit_cap=sum(row.hit_cap for row in members) / len(members),
                median_lower_boundary_bits=int(
                    lower_median([row.lower_boundary_bits for row in members])
                ),
                median_bits_below_beta=int(
                    lower_median([row.bits_below_beta for row in members])
                ),
            )
        )
    return cells


def _format_k(k: float) -> str:
    return str(int(k)) if float(k).is_integer() else repr(float(k))


def _format_float(x: float) -> str:
    # repr round-trips exactly and is platform-stable for float64.
    return repr(float(x))


def write_runs_csv(rows: list[RunRow], path) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(RUNS_HEADER)
        for r in rows:
            writer.writerow(
                [
                    r.benchmark,
                    r.mode,
                    str(r.n),
                    _format_k(r.K),
                    _format_float(r.pbar),
                    str(r.run_id),
                    str(r.seed),
                    str(r.iterations_used),
                    str(int(r.optimum_found)),
                    str(int(r.hit_cap)),
                    str(r.lower_boundary_bits),
                    str(r.bits_below_beta),
                    _format_float(r.final_variance),
                ]
            )


def write_cells_csv(cells: list[CellSummary], path) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(CELLS_HEADER)
        for c in cells:
            writer.writerow(
                [
                    _format_k(c.K),
                    str(c.runs),
                    str(c.median_iterations),
                    str(c.q25),
                    str(c.q75),
                    _format_float(c.frac_hit_cap),
                    str(c.median_lower_boundary_bits),
                    str(c.median_bits_below_beta),
                ]
            )
