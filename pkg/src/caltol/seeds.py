"""Deterministic seed derivation for reproducible (optionally parallel) runs.

Every stochastic task derives its own seed as a hash of the master seed and
its task indices, so results are bit-identical regardless of execution order
or worker count.
"""

from __future__ import annotations

import numpy as np

_MASK64 = 0xFFFFFFFFFFFFFFFF
_GOLDEN = 0x9E3779B97F4A7C15


def _mix64(z: int) -> int:
    """splitmix64 finalizer; full-period bijection on 64-bit ints."""
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def derive_seed(master: int, *indices: int) -> int:
    """Hash (master, i0, i1, ...) into a 64-bit seed.

    Distinct index tuples give independent streams; the same tuple always
    gives the same seed.
    """
    state = _mix64((int(master) & _MASK64) ^ _GOLDEN)
    for ix in indices:
        state = _mix64((state + _GOLDEN + (int(ix) & _MASK64)) & _MASK64)
    return state


def kernel_seed(master: int, *indices: int) -> int:
    """Derived seed reduced to the 32-bit range accepted by the MCMC kernels."""
    return derive_seed(master, *indices) & 0xFFFFFFFF


def rng_from(master: int, *indices: int) -> np.random.Generator:
    """PCG64 generator keyed by the derived seed."""
    return np.random.default_rng(derive_seed(master, *indices))
