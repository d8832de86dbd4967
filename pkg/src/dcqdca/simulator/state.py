"""Dense statevector simulation of deferred-constraint mixer circuits.

Wire ``w`` is bit ``w`` of the basis index. Bitstrings are written wire 0
first. Mixers are open-controlled: ``(1 + Z)/2`` projects onto ``|0>``, so a
mixer fires only when every control wire reads 0.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from dcqdca.ansatz import MixerSchedule
from dcqdca.simulator import kernels

MAX_QUBITS = 24


class SimulationError(ValueError):
    pass


@dataclass
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray
    qubit_map: tuple[int, ...]

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amplitudes.copy(), self.qubit_map)

    def norm(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def probabilities(self) -> np.ndarray:
        a = self.amplitudes
        return a.real**2 + a.imag**2

    def support(self, atol: float = 1e-12) -> list[str]:
        """Bitstrings (wire order) carrying probability above ``atol``."""
        return [index_to_bits(i, self.n_qubits) for i in np.flatnonzero(self.probabilities() > atol)]

    def top(self, m: int = 10) -> list[dict]:
        p = self.probabilities()
        order = np.argsort(-p, kind="stable")[:m]
        return [
            {
                "bits": index_to_bits(int(i), self.n_qubits),
                "re": float(self.amplitudes[i].real),
                "im": float(self.amplitudes[i].imag),
                "prob": float(p[i]),
            }
            for i in order
        ]


def index_to_bits(index: int, n: int) -> str:
    return "".join("1" if index >> w & 1 else "0" for w in range(n))


def bits_to_index(bits: Sequence[int] | str) -> int:
    return sum(1 << w for w, b in enumerate(bits) if int(b))


@lru_cache(maxsize=32)
def hamming_table(n: int) -> np.ndarray:
    w = np.zeros(1 << n, dtype=np.uint8)
    for q in range(n):
        w[1 << q : 1 << (q + 1)] = w[: 1 << q] + 1
    w.flags.writeable = False
    return w


def _check_size(n: int, cap: int | None) -> None:
    cap = MAX_QUBITS if cap is None else cap
    if n > cap:
        raise SimulationError(f"{n} qubits exceeds the simulator cap of {cap}")


def initial_state(
    n: int,
    warm: Sequence[int] | str | None = None,
    qubit_map: Sequence[int] | None = None,
    max_qubits: int | None = None,
) -> StateVector:
    """Basis state ``|warm>``, all zeros (the empty set) by default."""
    _check_size(n, max_qubits)
    amps = np.zeros(1 << n, dtype=np.complex128)
    if warm is None:
        amps[0] = 1.0
    else:
        if len(warm) != n:
            raise SimulationError(f"warm start has {len(warm)} bits, expected {n}")
        amps[bits_to_index(warm)] = 1.0
    qmap = tuple(qubit_map) if qubit_map is not None else tuple(range(n))
    if len(qmap) != n:
        raise SimulationError("qubit_map length must equal n")
    return StateVector(n, amps, qmap)


def _mask(wires, n: int) -> int:
    mask = 0
    for w in wires:
        if not 0 <= w < n:
            raise SimulationError(f"wire {w} out of range for {n} qubits")
        mask |= 1 << w
    return mask


def apply_partial_mixer(
    state: StateVector, target: int, controls: Sequence[int], angle: float
) -> StateVector:
    """``exp(-i angle X_t prod_c (1+Z_c)/2)``: rotate ``target`` when all controls read 0."""
    if not 0 <= target < state.n_qubits:
        raise SimulationError(f"target wire {target} out of range")
    if target in controls:
        raise SimulationError("target cannot also be a control")
    out = state.copy()
    kernels.partial_mixer(
        out.amplitudes, target, _mask(controls, state.n_qubits), math.cos(angle), math.sin(angle)
    )
    return out


def apply_phase_separator(state: StateVector, angle: float) -> StateVector:
    out = state.copy()
    kernels.phase_separator(out.amplitudes, hamming_table(state.n_qubits), float(angle))
    return out


def expectation_hamming(state: StateVector) -> float:
    return float(kernels.expectation(state.amplitudes, hamming_table(state.n_qubits)))


def compile_schedule(schedule: MixerSchedule) -> list[list[tuple[int, int]]]:
    """Per layer, the (target wire, control mask) of each active slot."""
    wire = {v: i for i, v in enumerate(schedule.qubits)}
    layers = []
    for layer in range(schedule.layers):
        gates = []
        for slot in schedule.active_slots:
            ctrl = schedule.controls_for_layer(slot, layer)
            gates.append((wire[slot.vertex], sum(1 << wire[c] for c in ctrl)))
        layers.append(gates)
    return layers


def simulate(
    schedule: MixerSchedule,
    params: Sequence[float],
    initial: StateVector | None = None,
    compiled: list[list[tuple[int, int]]] | None = None,
) -> StateVector:
    """Run the layered circuit: every active mixer in slot order, then one phase separator.

    Parameters per layer are ``[phase, mixer_1, ..., mixer_a]``.
    """
    params = np.asarray(params, dtype=np.float64)
    if params.size != schedule.num_params:
        raise SimulationError(f"expected {schedule.num_params} parameters, got {params.size}")
    if initial is None:
        initial = initial_state(schedule.n_qubits, qubit_map=schedule.qubits)
    elif initial.n_qubits != schedule.n_qubits:
        raise SimulationError("initial state does not match the schedule's qubit count")
    if compiled is None:
        compiled = compile_schedule(schedule)
    out = initial.copy()
    out.qubit_map = schedule.qubits
    amps = out.amplitudes
    weights = hamming_table(out.n_qubits)
    per_layer = len(compiled[0]) + 1 if compiled else 1
    for layer, gates in enumerate(compiled):
        theta = params[layer * per_layer : (layer + 1) * per_layer]
        for (t, cmask), a in zip(gates, theta[1:]):
            kernels.partial_mixer(amps, t, cmask, math.cos(a), math.sin(a))
        kernels.phase_separator(amps, weights, float(theta[0]))
    return out


def sample(state: StateVector, shots: int, seed: int) -> Counter:
    """Draw ``shots`` basis states; returns bitstring (wire order) -> count."""
    if shots < 1:
        raise SimulationError("shots must be >= 1")
    p = state.probabilities()
    p = p / p.sum()
    rng = np.random.default_rng(seed)
    draws = rng.choice(p.size, size=shots, p=p)
    idx, counts = np.unique(draws, return_counts=True)
    return Counter({index_to_bits(int(i), state.n_qubits): int(c) for i, c in zip(idx, counts)})
