"""Timing comparison of the JIT-compiled kernels against their pure-Python
source, on a desk-scale workload (Z=1,000 agents, 100 steps).

Run:  python benchmarks/bench_kernels.py
The same comparison can be forced package-wide with EVOTAX_NO_NUMBA=1.
"""

import time

import numpy as np

from evotax import _kernels
from evotax.dynamics import theta_lines
from evotax.game import GameParams
from evotax.network import assign_weights, generate_ba

Z = 1000
STEPS = 100


def build_workload():
    params = GameParams(alpha=0.3)
    net = assign_weights(generate_ba(Z, 2, seed=1), params.prob_high,
                         params.d_low, params.d_high, seed=2)
    rng = np.random.default_rng(3)
    strategies = rng.integers(0, 2, size=Z).astype(np.int8)
    anchors = np.tile([params.theta_low, params.theta_high], (Z, 1))
    slope, inter = theta_lines(params, anchors)
    indptr, indices, eweight = net.csr()
    return params, strategies, slope, inter, indptr, indices, eweight, rng


def run_steps(fitness_fn, imitate_fn, params, strategies, slope, inter,
              indptr, indices, eweight, rng):
    strategies = strategies.copy()
    fit = np.empty(Z)
    out = np.empty(Z, np.int8)
    for _ in range(STEPS):
        fitness_fn(strategies, indptr, indices, eweight, slope, inter,
                   params.R, params.Gamma, params.phi, params.alpha, fit)
        u = rng.random((4, Z))
        imitate_fn(strategies, fit, indptr, indices, params.beta, params.mu,
                   u[0], u[1], u[2], u[3], out)
        strategies, out = out, strategies
    return strategies


def main():
    workload = build_workload()
    params, strategies, slope, inter, indptr, indices, eweight, _ = workload

    variants = []
    if _kernels.NUMBA_ENABLED:
        # trigger compilation outside the timed region
        run_steps(_kernels.fitness_network, _kernels.imitate_network, params,
                  strategies, slope, inter, indptr, indices, eweight,
                  np.random.default_rng(0))
        variants.append(("numba @njit", _kernels.fitness_network,
                         _kernels.imitate_network))
        variants.append(("python fallback", _kernels.fitness_network.py_func,
                         _kernels.imitate_network.py_func))
    else:
        variants.append(("python fallback (numba disabled)",
                         _kernels.fitness_network, _kernels.imitate_network))

    print(f"workload: Z={Z}, BA m=2, {STEPS} steps")
    results = {}
    for name, fit_fn, imit_fn in variants:
        rng = np.random.default_rng(42)
        t0 = time.perf_counter()
        final = run_steps(fit_fn, imit_fn, params, strategies, slope, inter,
                          indptr, indices, eweight, rng)
        dt = time.perf_counter() - t0
        results[name] = (dt, final)
        per_step = dt / STEPS * 1e3
        print(f"{name:<34} {dt:8.3f} s total   {per_step:8.3f} ms/step")

    if len(results) == 2:
        (n1, (t1, f1)), (n2, (t2, f2)) = results.items()
        print(f"speedup: {t2 / t1:.1f}x")
        print(f"bitwise-identical final strategies: {np.array_equal(f1, f2)}")


if __name__ == "__main__":
    main()
