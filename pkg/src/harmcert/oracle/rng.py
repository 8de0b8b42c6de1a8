"""Counter-based uniform variates.

Each walker owns a stream keyed by (seed, walker index); the k-th draw of a
stream is a pure function of (key, k).  Nothing depends on how walkers are
grouped into batches or distributed over threads.
"""

from __future__ import annotations

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30, _S27, _S31, _S11 = np.uint64(30), np.uint64(27), np.uint64(31), np.uint64(11)
_TWO_M53 = 2.0**-53


def _mix(z: np.ndarray) -> np.ndarray:
    """SplitMix64 finaliser (bijective on 64-bit words)."""
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


def walker_keys(seed: int, walker_index) -> np.ndarray:
    idx = np.atleast_1d(np.asarray(walker_index, dtype=np.uint64))
    s = np.full(idx.shape, np.uint64(int(seed) & 0xFFFFFFFFFFFFFFFF), dtype=np.uint64)
    return _mix(_mix(s) ^ _mix(idx * _GOLDEN + _GOLDEN))


def uniforms(keys: np.ndarray, counter: int) -> np.ndarray:
    """Draw number ``counter`` of each stream, uniform on [0, 1)."""
    offset = np.uint64(((int(counter) + 1) * 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF)
    z = _mix(keys + offset)
    return (z >> _S11).astype(np.float64) * _TWO_M53
