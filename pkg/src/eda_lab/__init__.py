"""Compact genetic algorithm on dynamic pseudo-Boolean benchmarks.

Engine, exact one-step oracles, and a reproducible experiment harness with
CSV output and figure rendering.
"""

from .benchmarks import (
    BENCHMARK_TOKENS,
    Comparator,
    ComparisonOutcome,
    Relation,
    compare_dynbv_exact,
    compare_dynbv_fast,
    compare_onemax,
    compare_static_binval,
    make_comparator,
)
from .core import (
    DEFAULT_ITERATION_CAP,
    CgaConfig,
    CgaState,
    ConfigurationError,
    RunResult,
    StepRecord,
    init,
    run,
    sample_offspring,
    step,
)
from .harness import (
    CellSummary,
    RunRow,
    SweepSpec,
    experiment_k_grid,
    replicate,
    run_sweep,
    write_cells_csv,
    write_runs_csv,
)
from .instrumentation import (
    BOUNDARY_TOL,
    DEFAULT_BETA,
    MetricsState,
    StepKind,
    classify_steps,
    drift_summary,
    init_metrics,
    sampling_variance,
    update_metrics,
)
from .oracle import (
    PoissonBinomial,
    TransitionKernel,
    expected_drift,
    poisson_binomial_pmf,
    signal_probability,
    signal_probability_bounds,
    transition_kernel,
)
from .seeding import derive_seed, make_generator

__all__ = [
    "BENCHMARK_TOKENS",
    "Comparator",
    "ComparisonOutcome",
    "Relation",
    "compare_dynbv_exact",
    "compare_dynbv_fast",
    "compare_onemax",
    "compare_static_binval",
    "make_comparator",
    "DEFAULT_ITERATION_CAP",
    "CgaConfig",
    "CgaState",
    "ConfigurationError",
    "RunResult",
    "StepRecord",
    "init",
    "run",
    "sample_offspring",
    "step",
    "CellSummary",
    "RunRow",
    "SweepSpec",
    "experiment_k_grid",
    "replicate",
    "run_sweep",
    "write_cells_csv",
    "write_runs_csv",
    "BOUNDARY_TOL",
    "DEFAULT_BETA",
    "MetricsState",
    "StepKind",
    "classify_steps",
    "drift_summary",
    "init_metrics",
    "sampling_variance",
    "update_metrics",
    "PoissonBinomial",
    "TransitionKernel",
    "expected_drift",
    "poisson_binomial_pmf",
    "signal_probability",
    "signal_probability_bounds",
    "transition_kernel",
    "derive_seed",
    "make_generator",
]
