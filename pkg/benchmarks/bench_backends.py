"""Timing comparison of the compiled and pure-NumPy kernel backends.

Runs each hot kernel on realistic workloads against both backend modules
in-process, then times a few end-to-end library operations in subprocesses
with ``LWCHI2_BACKEND`` forced each way.

Usage::

    python3 benchmarks/bench_backends.py [--repeat N]
"""
import argparse
import os
import subprocess
import sys
import time

import numpy as np

from lwchi2._backend import _pykernels


def _best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _kernel_workloads(rng):
    """(label, kwargs-free callable factory) pairs for one backend module."""
    deltas = np.concatenate(
        [
            np.logspace(-14, -1, 40_000),
            np.linspace(0.11, 40.0, 40_000),
        ]
    )
    a_small = rng.uniform(0.5, 25.0, size=50_000)
    x_small = a_small * rng.uniform(0.2, 3.0, size=a_small.size)
    a_large = rng.uniform(30.0, 5e4, size=50_000)
    x_large = a_large * rng.uniform(0.8, 1.2, size=a_large.size)
    z_cplx = (
        rng.uniform(0.5, 40.0, size=30_000)
        + 1j * rng.uniform(-50.0, 50.0, size=30_000)
    )
    z_refl = (
        rng.uniform(-20.0, 0.4, size=30_000)
        + 1j * np.concatenate(
            [rng.uniform(0.1, 50.0, size=15_000), -rng.uniform(0.1, 50.0, size=15_000)]
        )
    )
    w_neg = -np.exp(-1.0) * rng.uniform(1e-6, 1.0 - 1e-9, size=50_000)

    def make(mod):
        return [
            ("branch_pair (80k mixed deltas)", lambda: mod.branch_pair(deltas)),
            ("pgamma_arr (50k, a < 30)", lambda: mod.pgamma_arr(a_small, x_small)),
            ("pgamma_arr (50k, a >= 30)", lambda: mod.pgamma_arr(a_large, x_large)),
            ("loggamma_complex (30k, right half)", lambda: mod.loggamma_complex(z_cplx)),
            ("loggamma_complex (30k, reflected)", lambda: mod.loggamma_complex(z_refl)),
            ("lambert_w0_arr (50k, negative z)", lambda: mod.lambert_w0_arr(w_neg)),
            ("lambert_wm1_arr (50k)", lambda: mod.lambert_wm1_arr(w_neg)),
        ]

    return make


def bench_kernels(repeat):
    try:
        from lwchi2._backend import _ckernels
    except ImportError:
        _ckernels = None

    rng = np.random.default_rng(20240816)
    make = _kernel_workloads(rng)
    py_jobs = make(_pykernels)
    c_jobs = make(_ckernels) if _ckernels is not None else None

    print(f"{'kernel workload':38s} {'python':>10s} {'c':>10s} {'speedup':>8s}")
    print("-" * 70)
    for idx, (label, py_fn) in enumerate(py_jobs):
        t_py = _best_of(py_fn, repeat)
        if c_jobs is None:
            print(f"{label:38s} {t_py * 1e3:9.2f}ms {'n/a':>10s} {'':8s}")
            continue
        t_c = _best_of(c_jobs[idx][1], repeat)
        print(
            f"{label:38s} {t_py * 1e3:9.2f}ms {t_c * 1e3:9.2f}ms "
            f"{t_py / t_c:7.2f}x"
        )
    if c_jobs is None:
        print("(compiled backend not available; install with a C toolchain)")


_END_TO_END = r"""
import time
import numpy as np
import lwchi2

assert lwchi2.BACKEND_NAME == {backend!r}, lwchi2.BACKEND_NAME
d = lwchi2.standard_lw_chi2(5.0)
ym = d.theta.y_min
ys = ym + np.linspace(1.5e-3, 16.0, 4000)

t0 = time.perf_counter()
lwchi2.lw_cdf(d, ys)
t_cdf = time.perf_counter() - t0

t0 = time.perf_counter()
lwchi2.lw_quantile(d, np.linspace(0.01, 0.99, 500))
t_qf = time.perf_counter() - t0

combo = lwchi2.LinearCombination(
    tuple(
        lwchi2.Term("lw_chi2", lwchi2.standard_lw_chi2(v))
        for v in (1.0,) * 9 + (100.0,)
    )
)
t0 = time.perf_counter()
lwchi2.combo_quantile(combo, 0.95)
t_combo = time.perf_counter() - t0

print(f"{{t_cdf:.4f}} {{t_qf:.4f}} {{t_combo:.4f}}")
"""


def bench_end_to_end():
    rows = []
    for backend in ("python", "c"):
        env = dict(os.environ, LWCHI2_BACKEND=backend)
        proc = subprocess.run(
            [sys.executable, "-c", _END_TO_END.format(backend=backend)],
            capture_output=True,
            text=True,
            env=env,
        )
        if proc.returncode != 0:
            rows.append((backend, None))
            continue
        rows.append((backend, [float(v) for v in proc.stdout.split()]))

    labels = (
        "lw_cdf (4000 points, nu=5)",
        "lw_quantile (500 probabilities)",
        "combo_quantile (10-term mixture, p=0.95)",
    )
    print()
    print(f"{'end-to-end operation':42s} {'python':>10s} {'c':>10s}")
    print("-" * 66)
    for i, label in enumerate(labels):
        cells = []
        for _, times in rows:
            cells.append(f"{times[i] * 1e3:9.2f}ms" if times else f"{'failed':>10s}")
        print(f"{label:42s} {cells[0]:>10s} {cells[1]:>10s}")


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--repeat", type=int, default=3, help="timing repeats per workload (best-of)"
    )
    args = parser.parse_args(argv)
    bench_kernels(args.repeat)
    bench_end_to_end()
    return 0


if __name__ == "__main__":
    sys.exit(main())
