"""Time the numba kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--qubits 10 14 18 20] [--repeat 5]
"""

import argparse
import math
import time

import numpy as np

from dcqdca.simulator import _numba_kernels as nb
from dcqdca.simulator import _numpy_kernels as npk
from dcqdca.simulator.state import hamming_table


def random_state(n, rng):
    a = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return a / np.linalg.norm(a)


def layer(mod, amps, weights, gates, angle):
    c, s = math.cos(angle), math.sin(angle)
    for t, mask in gates:
        mod.partial_mixer(amps, t, mask, c, s)
    mod.phase_separator(amps, weights, angle)
    return mod.expectation(amps, weights)


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--qubits", type=int, nargs="+", default=[10, 14, 18, 20])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    print(f"{'qubits':>6} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}")
    for n in args.qubits:
        weights = hamming_table(n)
        # ring-like control pattern: each mixer checks its predecessor wire
        gates = [(t, (1 << (t - 1)) if t else 0) for t in range(n)]
        base = random_state(n, rng)
        a1, a2 = base.copy(), base.copy()
        e1 = layer(npk, a1, weights, gates, 0.3)
        e2 = layer(nb, a2, weights, gates, 0.3)  # also triggers compilation
        assert np.allclose(a1, a2) and math.isclose(e1, e2, rel_tol=1e-9)
        t_np = best_of(lambda: layer(npk, base.copy(), weights, gates, 0.3), args.repeat)
        t_nb = best_of(lambda: layer(nb, base.copy(), weights, gates, 0.3), args.repeat)
        print(f"{n:>6} {t_np * 1e3:>10.2f} {t_nb * 1e3:>10.2f} {t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
