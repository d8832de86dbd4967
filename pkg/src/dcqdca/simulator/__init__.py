from dcqdca.simulator.kernels import BACKEND
from dcqdca.simulator.state import (
    MAX_QUBITS,
    SimulationError,
    StateVector,
    apply_partial_mixer,
    apply_phase_separator,
    bits_to_index,
    compile_schedule,
    expectation_hamming,
    index_to_bits,
    initial_state,
    sample,
    simulate,
)

__all__ = [
    "BACKEND",
    "MAX_QUBITS",
    "SimulationError",
    "StateVector",
    "apply_partial_mixer",
    "apply_phase_separator",
    "bits_to_index",
    "compile_schedule",
    "expectation_hamming",
    "index_to_bits",
    "initial_state",
    "sample",
    "simulate",
]
