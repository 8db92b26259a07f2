"""Benchmark the compiled path-length kernel against the pure-Python fallback.

Times the raw polyline quadrature on random polylines in a polydisc, then an
end-to-end integrated-distance solve on the unit disk with each kernel.

Run:  python3 benchmarks/bench_pathlen.py
"""

import math
import time

import numpy as np

from hypermetric import _speedups_py

try:
    from hypermetric import _speedups
except ImportError:
    _speedups = None


def gauss01(order):
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return 0.5 * (nodes + 1.0), 0.5 * weights


def random_polylines(count, n_coords, n_verts, seed):
    rng = np.random.default_rng(seed)
    centers = np.zeros(n_coords, dtype=complex)
    radii = np.ones(n_coords)
    lines = []
    for _ in range(count):
        t = rng.uniform(0, 0.9, size=(n_verts, n_coords))
        ang = rng.uniform(0, 2 * math.pi, size=(n_verts, n_coords))
        lines.append(np.ascontiguousarray(t * np.exp(1j * ang)))
    return lines, centers, radii


def time_kernel(impl, lines, centers, radii, nodes, weights, repeats=20):
    best = math.inf
    total = 0.0
    for _ in range(repeats):
        start = time.perf_counter()
        for verts in lines:
            total += impl(verts, centers, radii, nodes, weights)
        best = min(best, time.perf_counter() - start)
    return best, total


def bench_raw_kernel():
    print("== raw polyline quadrature (200 polylines, 33 vertices, order 32) ==")
    lines, centers, radii = random_polylines(200, 2, 33, seed=1)
    nodes, weights = gauss01(32)
    t_py, check_py = time_kernel(
        _speedups_py.polyline_length, lines, centers, radii, nodes, weights
    )
    print(f"pure python : {t_py * 1e3:8.2f} ms/batch")
    if _speedups is None:
        print("compiled    : unavailable")
        return
    t_c, check_c = time_kernel(
        _speedups.polyline_length, lines, centers, radii, nodes, weights
    )
    print(f"compiled    : {t_c * 1e3:8.2f} ms/batch")
    print(f"speedup     : {t_py / t_c:8.2f}x")
    assert abs(check_py - check_c) <= 1e-9 * abs(check_py), "kernel mismatch"


def bench_integrated_distance():
    print("\n== integrated distance on the unit disk (5 endpoint pairs) ==")
    import importlib
    import os

    import hypermetric.kernels as kernels
    import hypermetric.metrics as metrics
    from hypermetric.domains import unit_disk

    pairs = [(0, 0.5), (0.5 + 0.5j, -0.3 + 0.2j), (0.8, -0.8), (0.1j, 0.9), (-0.6, 0.6j)]
    for label, env in (("compiled", ""), ("pure python", "1")):
        os.environ["HYPERMETRIC_PURE_PYTHON"] = env
        importlib.reload(kernels)
        importlib.reload(metrics)
        if label == "compiled" and not kernels.COMPILED:
            print("compiled    : unavailable")
            continue
        d = unit_disk()
        field = metrics.metric_field(d, "caratheodory")
        start = time.perf_counter()
        for a, b in pairs:
            metrics.integrated_distance(field, d, a, b)
        elapsed = time.perf_counter() - start
        print(f"{label:<12}: {elapsed * 1e3:8.2f} ms total, kernel COMPILED={kernels.COMPILED}")
    os.environ.pop("HYPERMETRIC_PURE_PYTHON", None)
    importlib.reload(kernels)
    importlib.reload(metrics)


if __name__ == "__main__":
    bench_raw_kernel()
    bench_integrated_distance()
