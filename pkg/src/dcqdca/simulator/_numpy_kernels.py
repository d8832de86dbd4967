"""Pure-numpy fallback with the same signatures as the numba kernels."""

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=512)
def _pair_indices(dim: int, target: int, control_mask: int) -> np.ndarray:
    idx = np.arange(dim, dtype=np.int64)
    return idx[(idx & ((1 << target) | control_mask)) == 0]


def partial_mixer(amps, target, control_mask, c, s):
    i = _pair_indices(amps.size, target, control_mask)
    j = i | (1 << target)
    a0 = amps[i]
    a1 = amps[j]
    amps[i] = c * a0 - 1j * s * a1
    amps[j] = c * a1 - 1j * s * a0


def phase_separator(amps, weights, angle):
    phases = np.exp(-1j * angle * np.arange(int(weights.max(initial=0)) + 1))
    amps *= phases[weights]


def expectation(amps, weights):
    return float(np.dot(amps.real**2 + amps.imag**2, weights))
