"""Pairwise fitness comparators for pseudo-Boolean benchmarks.

The engine never needs fitness values, only which offspring wins, so every
benchmark is exposed as a comparator returning a ComparisonOutcome.  For the
positional benchmarks (dynamic and static binary value) the outcome also
carries the decisive bit: the highest-weighted position where the offspring
disagree.  Weights for n bits are 2**(n-1) down to 2**0, which is why the
winner is simply the string holding a 1 at the decisive position; no power
sums are ever evaluated, so any n is safe from overflow.

Dynamic binary value draws a fresh uniform significance permutation every
comparison.  Two interchangeable modes are provided:

* exact: samples the full permutation (rank -> bit) and scans it.
* fast:  exploits that the decisive bit of a uniform permutation is a
  uniform draw from the disagreement set, and samples that directly.

Both induce the same joint distribution of (relation, decisive bit).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

BitString = np.ndarray

#: CLI/CSV tokens accepted by make_comparator.
BENCHMARK_TOKENS = ("dynbv", "dynbv-exact", "onemax", "binval")


class Relation(enum.Enum):
    """Outcome of one pairwise comparison; ties carry no winner."""

    X_WINS = "x"
    Y_WINS = "y"
    TIE = "tie"


@dataclass(frozen=True)
class ComparisonOutcome:
    """Relation plus, for positional non-ties, the decisive bit index."""

    relation: Relation
    decisive_index: int | None = None

    def __post_init__(self) -> None:
        if self.relation is Relation.TIE and self.decisive_index is not None:
            raise ValueError("tie outcomes carry no decisive index")


_TIE = ComparisonOutcome(Relation.TIE)


def _positional_outcome(x: BitString, decisive: int) -> ComparisonOutcome:
    winner = Relation.X_WINS if bool(x[decisive]) else Relation.Y_WINS
    return ComparisonOutcome(winner, int(decisive))


def _check_lengths(x: BitString, y: BitString) -> None:
    if x.shape != y.shape:
        raise ValueError(f"offspring lengths differ: {x.shape} vs {y.shape}")


def compare_onemax(x: BitString, y: BitString) -> ComparisonOutcome:
    """Compare by number of ones; a tie even when the strings differ."""
    _check_lengths(x, y)
    cx = int(np.count_nonzero(x))
    cy = int(np.count_nonzero(y))
    if cx == cy:
        return _TIE
    return ComparisonOutcome(Relation.X_WINS if cx > cy else Relation.Y_WINS)


def compare_static_binval(x: BitString, y: BitString) -> ComparisonOutcome:
    """Binary value under the identity permutation: index 0 weighs most."""
    _check_lengths(x, y)
    diff = np.flatnonzero(x != y)
    if diff.size == 0:
        return _TIE
    return _positional_outcome(x, diff[0])


def compare_dynbv_exact(x: BitString, y: BitString, rng: np.random.Generator) -> ComparisonOutcome:
    """Dynamic binary value via a full fresh significance permutation.

    order[r] is the bit occupying rank r, rank 0 being the most significant.
    The permutation is drawn before the tie check, so this mode consumes one
    permutation per call even for identical offspring.
    """
    _check_lengths(x, y)
    order = rng.permutation(x.size)
    diff = x != y
    if not diff.any():
        return _TIE
    decisive = order[np.flatnonzero(diff[order])[0]]
    return _positional_outcome(x, decisive)


def compare_dynbv_fast(x: BitString, y: BitString, rng: np.random.Generator) -> ComparisonOutcome:
    """Dynamic binary value via direct sampling of the decisive bit.

    Consumes a single uniform index when the strings differ and nothing on
    ties, unlike the exact mode; streams are per-mode reproducible only.
    """
    _check_lengths(x, y)
    diff = np.flatnonzero(x != y)
    if diff.size == 0:
        return _TIE
    decisive = diff[rng.integers(diff.size)]
    return _positional_outcome(x, decisive)


@dataclass(frozen=True)
class Comparator:
    """Callable benchmark comparator bound to a problem size."""

    kind: str
    n: int

    def compare(self, x: BitString, y: BitString, rng: np.random.Generator) -> ComparisonOutcome:
        if self.kind == "dynbv":
            return compare_dynbv_fast(x, y, rng)
        if self.kind == "dynbv-exact":
            return compare_dynbv_exact(x, y, rng)
        if self.kind == "onemax":
            return compare_onemax(x, y)
        return compare_static_binval(x, y)

    @property
    def positional(self) -> bool:
        """Whether outcomes carry a decisive index on non-ties."""
        return self.kind != "onemax"


def make_comparator(token: str, n: int) -> Comparator:
    if token not in BENCHMARK_TOKENS:
        raise ValueError(f"unknown benchmark {token!r}, expected one of {BENCHMARK_TOKENS}")
    return Comparator(kind=token, n=n)


def benchmark_mode(token: str) -> tuple[str, str]:
    """Split a CLI token into (benchmark, mode) columns for result rows."""
    if token == "dynbv":
        return "dynbv", "fast"
    if token == "dynbv-exact":
        return "dynbv", "exact"
    return token, "exact"
