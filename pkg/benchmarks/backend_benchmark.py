#!/usr/bin/env python3
"""Benchmark the compiled kernel against the numpy fallback.

Runs the same seeded workload through both backends, reports wall time
and throughput, and checks that the estimates agree.

    python benchmarks/backend_benchmark.py [--paths N] [--step DT] [--threads T]
"""

import argparse
import math
import time

from ctcusum import sim


def run(backend: str, paths: int, step: float, threads: int):
    cfg = sim.make_config("post", 1.0, 1.0, step=step, paths=paths, seed=1234)
    t0 = time.perf_counter()
    est = sim.estimate(cfg, backend=backend, threads=threads)
    elapsed = time.perf_counter() - t0
    steps = est.mean * paths / step  # expected total step count
    return est, elapsed, steps


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--paths", type=int, default=20_000)
    parser.add_argument("--step", type=float, default=1e-3)
    parser.add_argument("--threads", type=int, default=1)
    args = parser.parse_args()

    results = {}
    for backend in sim.available_backends():
        est, elapsed, steps = run(backend, args.paths, args.step, args.threads)
        results[backend] = (est, elapsed)
        print(f"{backend:>7}: {elapsed:7.2f} s   {steps / elapsed / 1e6:8.1f} Msteps/s   "
              f"mean={est.mean:.6f} stderr={est.stderr:.6f}")

    if len(results) == 2:
        (est_c, t_c), (est_p, t_p) = results["cython"], results["python"]
        rel = abs(est_c.mean - est_p.mean) / est_c.mean
        print(f"speedup cython/python: {t_p / t_c:.2f}x   mean agreement: {rel:.2e} relative")
        if not (rel < 1e-3 or math.isclose(est_c.mean, est_p.mean)):
            raise SystemExit("backends disagree beyond tolerance")


if __name__ == "__main__":
    main()
