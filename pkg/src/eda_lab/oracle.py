"""Exact one-step analysis of the engine's frequency update under dynamic
binary value.

A designated bit i receives the selection signal in an iteration when every
bit ranked more significant than i by the fresh permutation agrees in the two
offspring.  Conditioned on d other bits disagreeing, position i is ranked
ahead of all of them with probability 1/(d+1); the number of disagreeing
other bits is Poisson-binomial with per-bit success 2*p_j*(1-p_j).  Summing
the conditional law gives the exact signal probability, from which the full
pre-clamp transition kernel of p_i and its expected drift follow in closed
form.  Everything here is analytic; no simulation is involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

FrequencyVector = np.ndarray


@dataclass(frozen=True)
class PoissonBinomial:
    """Distribution of a sum of independent Bernoulli variables."""

    params: tuple[float, ...]
    pmf: np.ndarray


@dataclass(frozen=True)
class TransitionKernel:
    """Pre-clamp one-step law of a single frequency: up 1/k, down 1/k, stay."""

    p_up: float
    p_down: float
    p_stay: float


def _validate_probs(values: np.ndarray, what: str) -> None:
    if values.ndim != 1:
        raise ValueError(f"{what} must be one-dimensional")
    if values.size and (values.min() < 0.0 or values.max() > 1.0):
        raise ValueError(f"{what} must lie in [0, 1]")


def poisson_binomial_pmf(success_probs) -> PoissonBinomial:
    """Exact pmf of the number of successes among independent Bernoullis.

    Computed by iterated convolution of two-point kernels, O(m^2) total for
    m parameters.  Floating-point cancellation can leave entries a hair
    below zero; those are clamped to 0.  The empty product is the point
    mass at zero successes.
    """
    probs = np.asarray(success_probs, dtype=np.float64)
    _validate_probs(probs, "success probabilities")
    pmf = np.array([1.0])
    for q in probs:
        pmf = np.convolve(pmf, [1.0 - q, q])
    np.clip(pmf, 0.0, None, out=pmf)
    return PoissonBinomial(params=tuple(float(q) for q in probs), pmf=pmf)


def _disagreement_probs(freqs: np.ndarray, bit: int) -> np.ndarray:
    # Offspring disagree at j with probability 2*p_j*(1-p_j), independently.
    others = np.delete(freqs, bit)
    return 2.0 * others * (1.0 - others)


def signal_probability(freqs, bit: int) -> float:
    """Exact probability that `bit` outranks every disagreeing other bit."""
    p = np.asarray(freqs, dtype=np.float64)
    _validate_probs(p, "frequencies")
    if not 0 <= bit < p.size:
        raise ValueError(f"bit index {bit} out of range for n={p.size}")
    pmf = poisson_binomial_pmf(_disagreement_probs(p, bit)).pmf
    weights = 1.0 / np.arange(1.0, pmf.size + 1.0)
    return float(pmf @ weights)


def signal_probability_bounds(freqs, bit: int) -> tuple[float, float]:
    """Closed-form sandwich for the signal probability.

    With v the sampling variance over the other bits, returns
    (1/(3v))*(1-exp(-v/6)) and 1/v + exp(-v/4).  The sandwich is guaranteed
    for v >= 1; below that the upper expression exceeds 1 and is vacuous.
    """
    p = np.asarray(freqs, dtype=np.float64)
    _validate_probs(p, "frequencies")
    if not 0 <= bit < p.size:
        raise ValueError(f"bit index {bit} out of range for n={p.size}")
    others = np.delete(p, bit)
    v = float(np.sum(others * (1.0 - others)))
    if v <= 0.0:
        raise ValueError("bounds require positive variance over other bits")
    lower = (1.0 / (3.0 * v)) * (1.0 - math.exp(-v / 6.0))
    upper = 1.0 / v + math.exp(-v / 4.0)
    return lower, upper


def transition_kernel(freqs, bit: int, k: float) -> TransitionKernel:
    """Exact pre-clamp one-step law of p_bit for update step 1/k.

    The frequency moves only when the offspring disagree at `bit`
    (probability 2*q with q = p*(1-p)).  Given a disagreement, the move is
    up when the bit receives the signal (the winner holds the 1 there) and
    otherwise up or down with equal probability, which folds to
    p_up = q*(1+s), p_down = q*(1-s), p_stay = 1-2q.
    """
    if k <= 0:
        raise ValueError("population size k must be positive")
    p = np.asarray(freqs, dtype=np.float64)
    s = signal_probability(p, bit)
    q = float(p[bit] * (1.0 - p[bit]))
    return TransitionKernel(p_up=q * (1.0 + s), p_down=q * (1.0 - s), p_stay=1.0 - 2.0 * q)


def expected_drift(freqs, bit: int, k: float) -> float:
    """Expected pre-clamp change of p_bit in one iteration: 2*q*s/k."""
    kernel = transition_kernel(freqs, bit, k)
    return (kernel.p_up - kernel.p_down) / k
