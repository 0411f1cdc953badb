#!/usr/bin/env python3
"""Benchmark the compiled kernel against the NumPy fallback.

Times the two hot stages (canonical jet assembly and the curvature
contraction) on batches of interior points of a 2D trapezoid and a 3D cube.

    python benchmarks/bench_kernels.py --points 200000 --repeat 3
"""

import argparse
import time

import numpy as np

from toricmetrics._kernels import _ref

try:
    from toricmetrics._kernels import _core
except ImportError:
    _core = None

CASES = {
    "trapezoid-2d": (
        np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, -1.0], [1.0, 1.0]]),
        np.array([0.0, 0.0, -1.0, 0.5]),
    ),
    "cube-3d": (
        np.array(
            [
                [1.0, 0.0, 0.0],
                [0.0, 1.0, 0.0],
                [0.0, 0.0, 1.0],
                [-1.0, 0.0, 0.0],
                [0.0, -1.0, 0.0],
                [0.0, 0.0, -1.0],
            ]
        ),
        np.array([0.0, 0.0, 0.0, -1.0, -1.0, -1.0]),
    ),
}


def sample_interior(U, lam, npoints, seed=0):
    rng = np.random.default_rng(seed)
    n = U.shape[1]
    out = []
    need = npoints
    while need > 0:
        pts = rng.uniform(0.0, 1.0, size=(4 * npoints, n))
        keep = pts[np.all(pts @ U.T - lam > 1e-3, axis=1)]
        out.append(keep[:need])
        need -= out[-1].shape[0]
    return np.concatenate(out)


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--points", type=int, default=200_000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    backends = [("numpy", _ref)] + ([("cython", _core)] if _core is not None else [])
    if _core is None:
        print("note: compiled extension unavailable, benchmarking fallback only")

    header = f"{'case':14s} {'stage':10s}" + "".join(f" {name:>12s}" for name, _ in backends)
    if len(backends) == 2:
        header += f" {'speedup':>9s}"
    print(header)
    print("-" * len(header))

    for case, (U, lam) in CASES.items():
        Y = sample_interior(U, lam, args.points)
        jets = {}
        for name, mod in backends:
            mod.canonical_jets(U, lam, Y[:1000])  # warmup
            jets[name] = best_of(lambda m=mod: m.canonical_jets(U, lam, Y), args.repeat)
        _, _, g2, g3, g4 = backends[0][1].canonical_jets(U, lam, Y)
        curv = {}
        for name, mod in backends:
            mod.curvature(g2[:1000], g3[:1000], g4[:1000])
            curv[name] = best_of(lambda m=mod: m.curvature(g2, g3, g4), args.repeat)
        for stage, res in (("jets", jets), ("curvature", curv)):
            line = f"{case:14s} {stage:10s}" + "".join(
                f" {res[name] * 1e3:10.1f}ms" for name, _ in backends
            )
            if len(backends) == 2:
                line += f" {res['numpy'] / res['cython']:8.1f}x"
            print(line)


if __name__ == "__main__":
    main()
