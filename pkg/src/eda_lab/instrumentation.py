"""Per-run measurement of frequency dynamics.

Tracks the quantities the experiments report on: the sampling variance of
the frequency vector, per-bit minima, latched boundary visits, and per-bit
counts of signal versus random steps.  Updates are incremental over the bits
that changed in an iteration, so instrumenting a run costs O(changed bits)
per iteration rather than O(n).

Step taxonomy for a non-tie iteration: the decisive bit of a positional
comparison takes a signal step (always towards 1); every other disagreeing
bit moves up or down according to the winner's value there, a random step.
Tie iterations move nothing and are tagged none.  For the value-based
benchmark there is no ranked decisive position; a single disagreeing bit is
still forced (it alone decided the comparison), otherwise all disagreeing
bits are tagged random.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .benchmarks import Relation

if TYPE_CHECKING:  # pragma: no cover
    from .core import StepRecord

#: Absolute slack when latching boundary visits, absorbing accumulated
#: floating-point error; clamped values are written exactly, so this is
#: belt and braces.
BOUNDARY_TOL = 1e-9

DEFAULT_BETA = 1.0 / 3.0


class StepKind(enum.IntEnum):
    NONE = 0
    RANDOM_UP = 1
    RANDOM_DOWN = 2
    SIGNAL = 3


@dataclass
class MetricsState:
    """Running metrics over one run; arrays are indexed by bit."""

    variance: float
    min_freq: np.ndarray
    lower_boundary_hit: np.ndarray
    upper_boundary_hit: np.ndarray
    signal_steps: np.ndarray
    random_steps: np.ndarray
    beta: float
    pbar: float
    freqs: np.ndarray  # snapshot mirroring the engine's vector


def sampling_variance(freqs) -> float:
    """Sum of per-bit Bernoulli variances p_i * (1 - p_i)."""
    p = np.asarray(freqs, dtype=np.float64)
    return float(np.sum(p * (1.0 - p)))


def init_metrics(freqs: np.ndarray, pbar: float, beta: float = DEFAULT_BETA) -> MetricsState:
    n = freqs.size
    return MetricsState(
        variance=sampling_variance(freqs),
        min_freq=freqs.copy(),
        lower_boundary_hit=freqs <= pbar + BOUNDARY_TOL,
        upper_boundary_hit=freqs >= 1.0 - pbar - BOUNDARY_TOL,
        signal_steps=np.zeros(n, dtype=np.int64),
        random_steps=np.zeros(n, dtype=np.int64),
        beta=beta,
        pbar=pbar,
        freqs=freqs.copy(),
    )


def _decisive_bit(record: "StepRecord", changed: np.ndarray) -> int | None:
    decisive = record.outcome.decisive_index
    if decisive is None and changed.size == 1:
        decisive = int(changed[0])
    return decisive


def classify_steps(record: "StepRecord") -> np.ndarray:
    """Tag every bit of one iteration with a StepKind value."""
    kinds = np.zeros(record.x.size, dtype=np.int8)
    if record.outcome.relation is Relation.TIE:
        return kinds
    changed = np.flatnonzero(record.x != record.y)
    winner = record.x if record.outcome.relation is Relation.X_WINS else record.y
    kinds[changed] = np.where(winner[changed], StepKind.RANDOM_UP, StepKind.RANDOM_DOWN)
    decisive = _decisive_bit(record, changed)
    if decisive is not None:
        kinds[decisive] = StepKind.SIGNAL
    return kinds


def update_metrics(metrics: MetricsState, record: "StepRecord", freqs: np.ndarray) -> None:
    """Fold one executed iteration into the running metrics.

    `freqs` is the engine's vector after the iteration's update; the changed
    positions are recovered from the offspring pair, so the cost is
    proportional to the number of disagreeing bits.
    """
    if record.outcome.relation is Relation.TIE:
        return
    changed = np.flatnonzero(record.x != record.y)
    old = metrics.freqs[changed]
    new = freqs[changed]
    metrics.variance += float(np.sum(new * (1.0 - new) - old * (1.0 - old)))
    metrics.min_freq[changed] = np.minimum(metrics.min_freq[changed], new)
    metrics.lower_boundary_hit[changed] |= new <= metrics.pbar + BOUNDARY_TOL
    metrics.upper_boundary_hit[changed] |= new >= 1.0 - metrics.pbar - BOUNDARY_TOL
    metrics.random_steps[changed] += 1
    decisive = _decisive_bit(record, changed)
    if decisive is not None:
        metrics.random_steps[decisive] -= 1
        metrics.signal_steps[decisive] += 1
    metrics.freqs[changed] = new


def drift_summary(metrics: MetricsState) -> tuple[int, int]:
    """(bits that ever sat at the lower boundary, bits that ever fell below beta)."""
    lower_bits = int(np.count_nonzero(metrics.lower_boundary_hit))
    below_beta = int(np.count_nonzero(metrics.min_freq < metrics.beta))
    return lower_bits, below_beta
