"""Benchmark the typicality-scan kernels: compiled extension vs numpy fallback.

Usage: python benchmarks/bench_kernels.py [--trials 5]

The scan over candidate codewords is the hot loop of every encoder search
and decoder step, so the backend ratio here translates directly into
simulation throughput.  A small end-to-end Monte Carlo comparison is run in
subprocesses so each backend is chosen at import time, as in real use.
"""

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from smaclab import kernels  # noqa: E402


def bench_scans(trials: int):
    rng = np.random.default_rng(0)
    cases = [
        ("encoder search  (m=256,  n=200, k=8)", 256, 200, 8),
        ("decoder scan    (m=4096, n=160, k=16)", 4096, 160, 16),
        ("micro scan      (m=64,   n=24,  k=4)", 64, 24, 4),
    ]
    impls = kernels.available_backends()
    print(f"available backends: {', '.join(impls)}")
    header = f"{'case':42s}" + "".join(f"{name:>12s}" for name in impls) + f"{'speedup':>10s}"
    print(header)
    print("-" * len(header))
    for label, m, n, k in cases:
        ref = rng.dirichlet(np.ones(k))
        lo, hi = kernels.frequency_bounds(ref, n, 0.3)
        ids = rng.integers(0, k, size=(m, n)).astype(np.uint32)
        times = {}
        for name, impl in impls.items():
            best = float("inf")
            for _ in range(trials):
                t0 = time.perf_counter()
                kernels.scan_flags(ids, lo, hi, impl=impl)
                best = min(best, time.perf_counter() - t0)
            times[name] = best
        row = f"{label:42s}" + "".join(f"{times[name]*1e3:10.3f}ms" for name in impls)
        if "cython" in times and "python" in times:
            row += f"{times['python'] / times['cython']:9.1f}x"
        print(row)


_SIM_SNIPPET = r"""
import time
import numpy as np
from smaclab.probability import Alphabet, FinitePmf, ConditionalKernel, deterministic_kernel
from smaclab.sim import SchemeRates, SimConfig, run_monte_carlo
from smaclab import kernels

b = Alphabet(2); a1 = Alphabet(1); y4 = Alphabet(4)
ch = deterministic_kernel([b, b, a1], y4, lambda x1, x2, s: 2 * x1 + x2)
qs = FinitePmf.uniform(1); px2 = FinitePmf.uniform(2)
pv = ConditionalKernel((a1, b), (a1,), np.ones((1, 2, 1)))
t = np.zeros((1, 1, 2, 2, 2))
for x2 in range(2):
    for u in range(2):
        t[0, 0, x2, u, u] = 0.5
pux1 = ConditionalKernel((a1, a1, b), (b, b), t)
rates = SchemeRates(r_c=0.03, r_1=0.03, eta_c=0, eta_1=0, eta_hat=0, eta_0=0, delta=0)
cfg = SimConfig(ch, qs, px2, pv, pux1, rates, "A", n=96, blocks=2, trials=80, seed=3, epsilon=0.5)
t0 = time.perf_counter()
res = run_monte_carlo(cfg)
print(f"{kernels.BACKEND}: {time.perf_counter() - t0:.3f}s (error {res.error_rate:.3f})")
"""


def bench_sim():
    print("\nend-to-end Monte Carlo (80 trials, scheme A, n=96):", flush=True)
    for env_extra in ({}, {"SMACLAB_PURE_PYTHON": "1"}):
        env = dict(os.environ, **env_extra)
        subprocess.run([sys.executable, "-c", _SIM_SNIPPET], env=env, check=True)


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=5)
    args = ap.parse_args()
    bench_scans(args.trials)
    bench_sim()
