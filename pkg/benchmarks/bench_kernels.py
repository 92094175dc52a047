#!/usr/bin/env python3
"""Numba kernels against their numpy twins, plus one end-to-end run per backend.

    python3 benchmarks/bench_kernels.py [--n 4096] [--repeat 50] [--no-e2e]

The kernel table calls both implementations in the same process.  The
end-to-end rows run the cubic-friction scenario in a subprocess with and
without QFRIC_DISABLE_NUMBA=1, which is how users pick the backend.
"""
import argparse
import os
import subprocess
import sys
import time

import numpy as np

from qfric import kernels
from qfric._accel import HAVE_NUMBA

E2E_SCRIPT = """
import time
import numpy as np
from qfric import kernels
from qfric.core import DensityField, Grid1D, PhysParams, normalize
from qfric.physics import FrictionLaw
from qfric.solvers import Scenario, run
g = Grid1D(-32, 32, 2001)
rho = normalize(DensityField(np.exp(-g.x**4 / (4 * 0.5**4)), g))
sc = Scenario("cubic6", rho, 10.0, PhysParams(theta=1.0), FrictionLaw("cubic", b3=1.0),
              quantum=False, scheme="implicit", record_times=tuple(np.logspace(0, 1, 11)))
t0 = time.perf_counter()
rec = run(sc)
print(kernels.BACKEND, time.perf_counter() - t0, rec[-1].sigma2)
"""


def best_of(fn, repeat):
    fn()  # warm-up, includes JIT compilation
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def kernel_cases(n):
    rng = np.random.default_rng(0)
    x = np.linspace(-8, 8, n)
    dx = x[1] - x[0]
    L = -0.5 * x**2 + 1e-3 * rng.standard_normal(n)
    U = 0.25 * x**4
    g = rng.standard_normal(n) * 10.0
    b1 = np.full(n, 0.3)
    b3 = np.full(n, 1.0)
    coef = np.full(n, 0.25)
    rho = np.exp(L)
    V = rng.standard_normal(n)
    combined = kernels.COMBINED
    return {
        "invert_array (combined)": (
            lambda: kernels.invert_array_nb(g, combined, b1, b3, 1.0, 1.0),
            lambda: kernels.invert_array_np(g, combined, b1, b3, 1.0, 1.0)),
        "face_velocity_mu": (
            lambda: kernels.face_velocity_mu_nb(L, U, False, dx, 0.5, 1.0, combined, b1, b3, 1.0, 1.0),
            lambda: kernels.face_velocity_mu_np(L, U, False, dx, 0.5, 1.0, combined, b1, b3, 1.0, 1.0)),
        "face_drive_qcubic": (
            lambda: kernels.face_drive_qcubic_nb(L, False, dx, coef, 0.0),
            lambda: kernels.face_drive_qcubic_np(L, False, dx, coef, 0.0)),
        "flux_divergence": (
            lambda: kernels.flux_divergence_nb(rho, V, False, dx),
            lambda: kernels.flux_divergence_np(rho, V, False, dx)),
        "scaled_residual": (
            lambda: kernels.scaled_residual_nb(L, L, 1.5, L, -0.5, V, False, dx, 1e-3),
            lambda: kernels.scaled_residual_np(L, L, 1.5, L, -0.5, V, False, dx, 1e-3)),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=4096)
    ap.add_argument("--repeat", type=int, default=50)
    ap.add_argument("--no-e2e", action="store_true")
    args = ap.parse_args(argv)

    print(f"numba available: {HAVE_NUMBA}; default backend: {kernels.BACKEND}; n = {args.n}")
    print(f"{'kernel':<26}{'numba [us]':>12}{'numpy [us]':>12}{'speedup':>10}")
    for name, (nb, npf) in kernel_cases(args.n).items():
        a = best_of(nb, args.repeat) * 1e6
        b = best_of(npf, args.repeat) * 1e6
        print(f"{name:<26}{a:>12.1f}{b:>12.1f}{b / a:>10.2f}")

    if args.no_e2e:
        return 0
    print("\nend-to-end cubic-friction run (t = 0 .. 10, n = 2001)")
    for flag in ("0", "1"):
        env = dict(os.environ, QFRIC_DISABLE_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", E2E_SCRIPT], env=env,
                             capture_output=True, text=True, check=True).stdout.split()
        print(f"  backend {out[0]:<6} {float(out[1]):8.2f} s   final sigma^2 {float(out[2]):.10g}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
