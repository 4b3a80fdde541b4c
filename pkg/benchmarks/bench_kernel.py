"""Benchmark the compiled pairwise RHS kernel against the pure-python twin.

Times repeated full-RHS evaluations at a mid-epidemic state, then a whole
baseline integration through each backend. Run from the repo root:

    python3 benchmarks/bench_kernel.py
"""

import time

import numpy as np

from adseir import _pairwise_py, kernel
from adseir.model import beta_from_r0
from adseir.params import NetworkMoments, initial_pairwise_state

N_EVALS = 200_000


def bench_rhs(impl, y, out, beta):
    start = time.perf_counter()
    for _ in range(N_EVALS):
        impl.pairwise_rhs_flat(0.0, y, out, beta, 0.2, 0.1, 1e-4, 2e-4,
                               10000.0)
    return time.perf_counter() - start


def bench_integration(backend_impl):
    # monkey-patch the active kernel entry point for the duration
    saved = kernel.pairwise_rhs_flat
    kernel.pairwise_rhs_flat = backend_impl.pairwise_rhs_flat
    try:
        from adseir.adapters import SimplePairwiseModel
        from adseir.interventions import run_none
        from adseir.params import EpiParams

        moments = NetworkMoments(64.0, 5120.0, 0.2)
        beta = beta_from_r0(2.4, moments, 0.1)
        epi = EpiParams(beta=beta, eta=0.2, gamma=0.1, n_nodes=10000)
        model = SimplePairwiseModel(epi)
        y0 = model.initial_state(10.0, 10.0, moments)
        start = time.perf_counter()
        res = run_none(model, y0)
        elapsed = time.perf_counter() - start
        return elapsed, res.r_inf
    finally:
        kernel.pairwise_rhs_flat = saved


def main():
    moments = NetworkMoments(64.0, 5120.0, 0.2)
    beta = beta_from_r0(2.4, moments, 0.1)
    y = initial_pairwise_state(10000, 100.0, 150.0, moments).to_array()
    out = np.empty(13)

    backends = [("python", _pairwise_py)]
    if kernel.BACKEND == "cython":
        from adseir import _pairwise_kernel
        backends.append(("cython", _pairwise_kernel))
    else:
        print("compiled kernel not built; timing pure python only")

    print(f"single RHS evaluation ({N_EVALS:,} calls):")
    times = {}
    for name, impl in backends:
        dt = bench_rhs(impl, y, out, beta)
        times[name] = dt
        print(f"  {name:7s} {dt:8.3f} s  ({dt / N_EVALS * 1e6:7.3f} us/call)")
    if len(times) == 2:
        print(f"  speedup {times['python'] / times['cython']:.1f}x")

    print("full baseline integration (N=10000, to epidemic end):")
    for name, impl in backends:
        dt, r_inf = bench_integration(impl)
        print(f"  {name:7s} {dt:8.3f} s  (R_inf = {r_inf:.2f})")


if __name__ == "__main__":
    main()
