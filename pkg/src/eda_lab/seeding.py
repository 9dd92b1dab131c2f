"""Deterministic seed derivation for independent per-run random streams.

Every simulation run owns a counter-based Philox stream keyed by a 64-bit
seed derived from (master_seed, population size, run index).  Derivation is
a fixed integer mix, so the same coordinates always yield the same stream
regardless of scheduling or worker count.
"""

from __future__ import annotations

import struct

import numpy as np

_MASK64 = (1 << 64) - 1


def mix64(z: int) -> int:
    """One round of the splitmix64 output mix (64-bit avalanche)."""
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def _float_token(value: float) -> int:
    # IEEE-754 bit pattern, so e.g. k=30 and k=30.5 hash differently.
    return struct.unpack("<Q", struct.pack("<d", float(value)))[0]


def derive_seed(master_seed: int, k: float, run_index: int) -> int:
    """64-bit stream key for one run, stable in (master_seed, k, run_index)."""
    state = mix64(master_seed & _MASK64)
    state = mix64(state ^ _float_token(k))
    state = mix64(state ^ (run_index & _MASK64))
    return state


def make_generator(seed: int) -> np.random.Generator:
    """Philox generator keyed directly by a 64-bit seed."""
    return np.random.Generator(np.random.Philox(key=seed & _MASK64))
