"""JIT-compiled statevector kernels. All operate in place on complex128 arrays."""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def partial_mixer(amps, target, control_mask, c, s):
    tbit = 1 << target
    low = tbit - 1
    half = amps.size >> 1
    for k in range(half):
        i = ((k & ~low) << 1) | (k & low)
        if i & control_mask:
            continue
        j = i | tbit
        a0 = amps[i]
        a1 = amps[j]
        amps[i] = c * a0 - 1j * s * a1
        amps[j] = c * a1 - 1j * s * a0


@njit(cache=True, nogil=True)
def phase_separator(amps, weights, angle):
    top = weights.max() if weights.size else 0
    phases = np.empty(top + 1, dtype=np.complex128)
    for w in range(top + 1):
        phases[w] = np.exp(-1j * angle * w)
    for i in range(amps.size):
        amps[i] *= phases[weights[i]]


@njit(cache=True, nogil=True)
def expectation(amps, weights):
    total = 0.0
    for i in range(amps.size):
        a = amps[i]
        total += (a.real * a.real + a.imag * a.imag) * weights[i]
    return total
