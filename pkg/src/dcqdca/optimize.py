"""Classical outer loop: loss evaluation and Nelder-Mead with restarts."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from dcqdca.ansatz import MixerSchedule
from dcqdca.simulator import StateVector, compile_schedule, expectation_hamming, simulate


class OptimizationError(ValueError):
    pass


@dataclass(frozen=True)
class OptimizerConfig:
    max_evals: int = 500
    init_policy: str = "uniform-random"
    init_scale: float = math.pi / 4
    seed: int = 0
    restarts: int = 3
    convergence_tol: float = 1e-4

    def __post_init__(self):
        if self.max_evals < 1:
            raise OptimizationError("max_evals must be >= 1")
        if not 0 < self.init_scale <= math.pi:
            raise OptimizationError("init_scale must lie in (0, pi]")
        if self.init_policy not in ("uniform-random", "zeros-perturbed"):
            raise OptimizationError(f"unknown init policy {self.init_policy!r}")
        if self.restarts < 0:
            raise OptimizationError("restarts must be >= 0")


@dataclass
class OptimizeResult:
    params: np.ndarray
    loss: float
    # (eval_index, loss, restart_id), eval_index counts across restarts
    trace: list[tuple[int, float, int]] = field(default_factory=list)

    @property
    def evals(self) -> int:
        return len(self.trace)


def loss(
    schedule: MixerSchedule,
    params: Sequence[float],
    initial: StateVector | None = None,
    compiled=None,
) -> float:
    """Negative expected Hamming weight of the circuit output."""
    return -expectation_hamming(simulate(schedule, params, initial, compiled))


def initial_point(cfg: OptimizerConfig, size: int, rng: np.random.Generator) -> np.ndarray:
    # all-zero angles are stationary (the output stays the empty set)
    hi = cfg.init_scale if cfg.init_policy == "uniform-random" else 0.05 * cfg.init_scale
    return hi - rng.uniform(0.0, hi, size)  # (0, hi]


class _BudgetSpent(Exception):
    pass


def optimize(
    schedule: MixerSchedule, cfg: OptimizerConfig, initial: StateVector | None = None
) -> OptimizeResult:
    """Minimize :func:`loss` with Nelder-Mead under a total budget of ``cfg.max_evals``.

    After a run converges, a fresh uniformly-random start is tried with the
    remaining budget, at most ``cfg.restarts`` times.
    """
    if not schedule.active_slots:
        raise OptimizationError("schedule has no active mixers")
    compiled = compile_schedule(schedule)
    rng = np.random.default_rng(cfg.seed)
    trace: list[tuple[int, float, int]] = []
    best_x: np.ndarray | None = None
    best_f = math.inf

    for restart in range(cfg.restarts + 1):
        budget = cfg.max_evals - len(trace)
        if budget <= 0:
            break
        x0 = initial_point(cfg, schedule.num_params, rng)
        used = 0

        def f(x: np.ndarray) -> float:
            nonlocal used, best_x, best_f
            if used >= budget:
                raise _BudgetSpent
            used += 1
            val = loss(schedule, x, initial, compiled)
            trace.append((len(trace), val, restart))
            if val < best_f:
                best_f, best_x = val, np.array(x, dtype=np.float64)
            return val

        simplex = np.vstack([x0, x0 + cfg.init_scale * np.eye(x0.size)])
        try:
            minimize(
                f,
                x0,
                method="Nelder-Mead",
                options={
                    "maxfev": budget,
                    "initial_simplex": simplex,
                    "xatol": 1e-3,
                    "fatol": cfg.convergence_tol,
                },
            )
        except _BudgetSpent:
            break
    assert best_x is not None
    return OptimizeResult(best_x, best_f, trace)
