"""Shared test helpers: bit-string literals and a brute-force signal oracle.

The brute-force oracle below is deliberately independent of the library's
Poisson-binomial computation: it enumerates every offspring pair weighted by
its sampling probability and every significance permutation, and checks the
signal condition (no disagreeing other bit outranks the designated one) by
scanning each permutation.  Only feasible for n <= 4 or so.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

#: One [PASS]/[FAIL] line per end-to-end criterion, filled by the acceptance
#: module and echoed after the run, outside pytest's output capture.
VERDICT_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if VERDICT_LINES:
        terminalreporter.section("acceptance verdicts")
        for line in VERDICT_LINES:
            terminalreporter.write_line(line)


def bits(text: str) -> np.ndarray:
    """'1100' -> bool array, index 0 first."""
    return np.array([c == "1" for c in text], dtype=bool)


@lru_cache(maxsize=None)
def _precedes_all(n: int, bit: int, others: frozenset) -> float:
    """Probability a uniform rank order places `bit` before every bit in others."""
    good = 0
    perms = list(itertools.permutations(range(n)))
    for perm in perms:
        for b in perm:
            if b == bit:
                good += 1
                break
            if b in others:
                break
    return good / len(perms)


def brute_force_signal_probability(freqs, bit: int) -> float:
    """Exhaustive Pr[no disagreeing other bit outranks `bit`]."""
    freqs = list(freqs)
    n = len(freqs)
    total = 0.0
    for x in itertools.product((0, 1), repeat=n):
        px = 1.0
        for p, b in zip(freqs, x):
            px *= p if b else 1.0 - p
        for y in itertools.product((0, 1), repeat=n):
            py = 1.0
            for p, b in zip(freqs, y):
                py *= p if b else 1.0 - p
            others = frozenset(j for j in range(n) if x[j] != y[j] and j != bit)
            total += px * py * _precedes_all(n, bit, others)
    return total
