"""Timing comparison of the numba kernels against the pure-numpy fallback.

Runs the hot paths at the default experiment resolution: the tridiagonal
solve, one forward march of each system, and a full boundary-misfit cost
evaluation. Usage:

    python benchmarks/compare_backends.py [--repeats 5]
"""

import argparse
import math
import time
import warnings

import numpy as np

from domlen import backend
from domlen.inverse import (CostSpec, Functional, ProblemTemplate, System,
                            evaluate_cost, make_target)
from domlen.solvers import SolverParams

warnings.simplefilter("ignore")

CELLS, STEPS = 200, 1000


def time_call(fn, repeats):
    best = math.inf
    for _ in range(repeats):
        started = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - started)
    return best


def bench_thomas():
    rng = np.random.default_rng(0)
    n = CELLS - 1
    lower = rng.uniform(-1, 1, n - 1)
    upper = rng.uniform(-1, 1, n - 1)
    diag = 3.0 + rng.uniform(0, 1, n)
    rhs = rng.uniform(-1, 1, n)
    k = backend.kernels()
    return lambda: k.thomas(lower, diag, upper, rhs)


def bench_burgers():
    x = np.linspace(0.0, 2.0, CELLS + 1)
    t = np.linspace(0.0, 5.0, STEPS + 1)
    u0 = np.zeros(CELLS + 1)
    eta = 5.0 * np.sin(t) ** 3
    k = backend.kernels()
    return lambda: k.burgers_loop(u0, eta, 2.0 / CELLS, 5.0 / STEPS, 1.0,
                                  False)


def bench_burgers_heat():
    x = np.linspace(0.0, 2.0, CELLS + 1)
    t = np.linspace(0.0, 5.0, STEPS + 1)
    u0 = 0.1 * x * (2.0 - x)
    th0 = 0.1 * (1.0 + x * x * (x - 3.0))
    eta = 5.0 * np.sin(t) ** 3
    chi = np.zeros(STEPS + 1)
    k = backend.kernels()
    return lambda: k.burgers_heat_loop(u0, th0, eta, chi, 0.0, 2.0 / CELLS,
                                       5.0 / STEPS, True, True, False)


def bench_vardensity():
    x = np.linspace(0.0, 2.0, CELLS + 1)
    t = np.linspace(0.0, 5.0, 6001)
    u0 = np.zeros(CELLS + 1)
    rho0 = np.ones(CELLS + 1)
    ubar = 5.0 * np.sin(t) ** 3
    rhobar = np.ones(6001)
    k = backend.kernels()
    return lambda: k.vardensity_loop(u0, rho0, ubar, rhobar, 2.0 / CELLS,
                                     5.0 / 6000, True)


def bench_cost_eval():
    template = ProblemTemplate(System.BURGERS, 5.0,
                               eta=lambda t: 5.0 * math.sin(t) ** 3,
                               u0=lambda x: 0.0)
    params = SolverParams(CELLS, STEPS)
    target = make_target(template, 2.0, params)
    spec = CostSpec(Functional.J1, template, target, params)
    return lambda: evaluate_cost(spec, 2.6)


BENCHES = (
    ("thomas solve (n=199)", bench_thomas),
    (f"burgers march ({CELLS}x{STEPS})", bench_burgers),
    (f"coupled march ({CELLS}x{STEPS})", bench_burgers_heat),
    (f"density march ({CELLS}x6000)", bench_vardensity),
    ("one cost evaluation", bench_cost_eval),
)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    names = [name for name in backend.available()]
    print(f"backends: {', '.join(names)}  (repeats: best of {args.repeats})")
    print(f"{'benchmark':<28}" + "".join(f"{n:>14}" for n in names)
          + f"{'speedup':>10}")
    for label, factory in BENCHES:
        times = {}
        for name in names:
            backend.use(name)
            fn = factory()
            fn()  # warm-up / jit compile
            times[name] = time_call(fn, args.repeats)
        row = f"{label:<28}"
        for name in names:
            row += f"{times[name] * 1e3:>12.2f}ms"
        if "numba" in times and "numpy" in times:
            row += f"{times['numpy'] / times['numba']:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
