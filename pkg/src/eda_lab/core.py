"""Compact genetic algorithm engine.

One run keeps a frequency vector, initially all 1/2, and repeats: sample two
offspring bitwise independently, compare them on the benchmark, and if there
is a strict winner shift every disagreeing frequency by 1/k towards the
winner's bit value, clamping into [pbar, 1 - pbar].  Ties, including
value-ties of distinct strings, change nothing but still consume an
iteration.  A run ends when the all-ones string appears as either offspring
or when the iteration cap is reached.

All randomness of a run flows through a single Philox stream keyed by the
config seed: each offspring consumes n uniforms, and the comparator draws
whatever its mode documents.  Replays with equal config and benchmark are
therefore bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .benchmarks import BitString, Comparator, ComparisonOutcome, Relation, make_comparator
from .instrumentation import (
    BOUNDARY_TOL,
    DEFAULT_BETA,
    MetricsState,
    classify_steps,
    init_metrics,
    update_metrics,
)
from .seeding import make_generator

DEFAULT_ITERATION_CAP = 200_000


class ConfigurationError(ValueError):
    """Raised for parameter combinations the model does not define."""


@dataclass(frozen=True)
class CgaConfig:
    """Parameters of one run.

    k is the hypothetical population size; the update step is literally
    1/k and k may be any real >= 1.  pbar is the clamping margin keeping
    frequencies inside [pbar, 1 - pbar]; None selects the standard 1/n,
    which requires n >= 3 to stay below 1/2.
    """

    n: int
    k: float
    pbar: float | None = None
    iteration_cap: int = DEFAULT_ITERATION_CAP
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ConfigurationError(f"n must be >= 1, got {self.n}")
        if not self.k >= 1.0:
            raise ConfigurationError(f"k must be >= 1, got {self.k}")
        if self.iteration_cap < 1:
            raise ConfigurationError(f"iteration cap must be >= 1, got {self.iteration_cap}")
        if not 0 <= self.seed < 2**64:
            raise ConfigurationError("seed must be an unsigned 64-bit integer")
        margin = self.margin
        if not 0.0 < margin < 0.5:
            raise ConfigurationError(
                f"pbar must lie in (0, 1/2), got {margin} "
                "(the default 1/n needs n >= 3; pass pbar explicitly)"
            )

    @property
    def margin(self) -> float:
        """Effective clamping margin, resolving the 1/n default."""
        return 1.0 / self.n if self.pbar is None else float(self.pbar)


@dataclass
class CgaState:
    """Mutable run state: the frequency vector, iteration count and stream."""

    config: CgaConfig
    freqs: np.ndarray
    iteration: int
    rng: np.random.Generator


@dataclass
class StepRecord:
    """Everything observable about one executed iteration."""

    iteration: int
    x: BitString
    y: BitString
    outcome: ComparisonOutcome
    optimum_sampled: bool
    _kinds: np.ndarray | None = field(default=None, init=False, repr=False, compare=False)

    @property
    def step_kind(self) -> np.ndarray:
        """Per-bit StepKind tags, computed lazily and cached."""
        if self._kinds is None:
            self._kinds = classify_steps(self)
        return self._kinds


@dataclass(frozen=True)
class RunResult:
    """Summary of a finished run; optimum_found and hit_cap are exclusive."""

    iterations_used: int
    optimum_found: bool
    hit_cap: bool
    lower_boundary_bits: int
    bits_below_beta: int
    final_variance: float


def init(config: CgaConfig) -> CgaState:
    """Fresh state: all frequencies at 1/2, stream keyed by the config seed."""
    freqs = np.full(config.n, 0.5)
    return CgaState(config=config, freqs=freqs, iteration=0, rng=make_generator(config.seed))


def sample_offspring(state: CgaState) -> BitString:
    """One bitwise-independent draw from the current frequencies (n uniforms)."""
    return state.rng.random(state.config.n) < state.freqs


def step(state: CgaState, comparator: Comparator) -> StepRecord:
    """Execute one iteration, mutating frequencies and iteration count.

    The optimum flag reports whether either offspring sampled all-ones this
    iteration; the frequency update is applied regardless, callers decide
    whether to stop.
    """
    if comparator.n != state.config.n:
        raise ValueError(
            f"comparator is bound to n={comparator.n}, state has n={state.config.n}"
        )
    x = sample_offspring(state)
    y = sample_offspring(state)
    outcome = comparator.compare(x, y, state.rng)
    optimum = bool(x.all()) or bool(y.all())
    if outcome.relation is not Relation.TIE:
        winner = x if outcome.relation is Relation.X_WINS else y
        changed = np.flatnonzero(x != y)
        stride = 1.0 / state.config.k
        margin = state.config.margin
        moved = state.freqs[changed] + np.where(winner[changed], stride, -stride)
        np.clip(moved, margin, 1.0 - margin, out=moved)
        state.freqs[changed] = moved
    state.iteration += 1
    return StepRecord(
        iteration=state.iteration, x=x, y=y, outcome=outcome, optimum_sampled=optimum
    )


def run(
    config: CgaConfig,
    benchmark: str | Comparator = "dynbv",
    beta: float = DEFAULT_BETA,
    return_metrics: bool = False,
) -> RunResult | tuple[RunResult, MetricsState]:
    """Run to optimum or cap, collecting drift metrics along the way.

    The default path is a fused loop tracking only what RunResult needs
    (running per-bit minima); with return_metrics=True the run goes through
    step() and update_metrics() and additionally returns the full
    MetricsState.  Both paths consume the random stream identically and
    return the same RunResult.
    """
    comparator = (
        make_comparator(benchmark, config.n) if isinstance(benchmark, str) else benchmark
    )
    if comparator.n != config.n:
        raise ValueError(
            f"comparator is bound to n={comparator.n}, config has n={config.n}"
        )
    if return_metrics:
        return _run_instrumented(config, comparator, beta)
    return _run_fast(config, comparator, beta)


def _result_from(
    config: CgaConfig, iterations: int, found: bool, freqs: np.ndarray, min_freq: np.ndarray,
    beta: float,
) -> RunResult:
    return RunResult(
        iterations_used=iterations,
        optimum_found=found,
        hit_cap=not found,
        lower_boundary_bits=int(np.count_nonzero(min_freq <= config.margin + BOUNDARY_TOL)),
        bits_below_beta=int(np.count_nonzero(min_freq < beta)),
        final_variance=float(np.sum(freqs * (1.0 - freqs))),
    )


def _run_instrumented(
    config: CgaConfig, comparator: Comparator, beta: float
) -> tuple[RunResult, MetricsState]:
    state = init(config)
    metrics = init_metrics(state.freqs, config.margin, beta)
    found = False
    while state.iteration < config.iteration_cap:
        record = step(state, comparator)
        update_metrics(metrics, record, state.freqs)
        if record.optimum_sampled:
            found = True
            break
    result = _result_from(
        config, state.iteration, found, state.freqs, metrics.min_freq, beta
    )
    return result, metrics


def _run_fast(config: CgaConfig, comparator: Comparator, beta: float) -> RunResult:
    """Single fused loop; equivalent to stepping but with fewer array passes."""
    n = config.n
    cap = config.iteration_cap
    kind = comparator.kind
    stride = 1.0 / config.k
    lo = config.margin
    hi = 1.0 - lo
    rng = make_generator(config.seed)
    uniform = rng.random
    pick = rng.integers
    permute = rng.permutation
    freqs = np.full(n, 0.5)
    min_freq = freqs.copy()
    ranks = np.empty(n, dtype=np.intp)
    rank_values = np.arange(n, dtype=np.intp)
    exact = kind == "dynbv-exact"
    onemax = kind == "onemax"
    iterations = 0
    found = False
    while iterations < cap:
        x = uniform(n) < freqs
        y = uniform(n) < freqs
        iterations += 1
        if exact:
            order = permute(n)  # consumed even on ties, matching the comparator
        found = bool(x.all()) or bool(y.all())
        changed = (x != y).nonzero()[0]
        m = changed.size
        if m == 0:
            if found:
                break
            continue
        if onemax:
            count_x = int(np.count_nonzero(x))
            count_y = int(np.count_nonzero(y))
            if count_x == count_y:
                if found:
                    break
                continue
            winner_is_x = count_x > count_y
        elif exact:
            ranks[order] = rank_values
            decisive = changed[np.argmin(ranks[changed])]
            winner_is_x = bool(x[decisive])
        elif kind == "dynbv":
            decisive = changed[pick(m)]
            winner_is_x = bool(x[decisive])
        else:  # static binval: lowest index is the most significant
            winner_is_x = bool(x[changed[0]])
        winner_values = x[changed] if winner_is_x else y[changed]
        moved = freqs[changed] + np.where(winner_values, stride, -stride)
        np.maximum(moved, lo, out=moved)
        np.minimum(moved, hi, out=moved)
        freqs[changed] = moved
        min_freq[changed] = np.minimum(min_freq[changed], moved)
        if found:
            break
    return _result_from(config, iterations, found, freqs, min_freq, beta)
