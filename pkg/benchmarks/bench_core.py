"""Compiled core vs numpy fallback on the four hot loops.

Usage: ``python3 benchmarks/bench_core.py [--repeat N] [--out results.csv]``.
Prints one CSV row per kernel with best-of-N wall times and the largest
absolute difference between the two backends.
"""

from __future__ import annotations

import argparse
import sys
import timeit

import numpy as np

from sphx.core import get_backend
from sphx.harness.suite import render_csv


def cases(rng: np.random.Generator):
    nu = np.linspace(0.5, 120.0, 400)
    r = np.linspace(0.05, 3.0, 200)
    w = rng.uniform(0.5, 1.5, nu.size)
    phi = rng.uniform(-np.pi, np.pi, (4000, 3))
    phi[:, 2] = -phi[:, 0] - phi[:, 1]
    return {
        "sl3_octant": lambda b: b.sl3_octant(0.4, 0.1, -0.5, 0.0, 40.0, 0.0, 25.0, 96, 48, 96),
        "circle_phi": lambda b: b.circle_phi(nu, r, 512),
        "mehler_sum": lambda b: b.mehler_sum(r, nu, w, 256),
        "su3_schur": lambda b: b.su3_schur(80, 40, phi),
    }


def run(repeat: int = 3, seed: int = 0) -> list[tuple]:
    try:
        fast = get_backend("cython")
    except ImportError:
        sys.exit("compiled core not built; reinstall with Cython available")
    slow = get_backend("python")
    rows = []
    for name, fn in cases(np.random.default_rng(seed)).items():
        t_fast = min(timeit.repeat(lambda: fn(fast), number=1, repeat=repeat))
        t_slow = min(timeit.repeat(lambda: fn(slow), number=1, repeat=repeat))
        diff = float(np.max(np.abs(np.asarray(fn(fast)) - np.asarray(fn(slow)))))
        rows.append((name, t_fast, t_slow, t_slow / t_fast, diff))
    return rows


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--out")
    args = ap.parse_args(argv)
    text = render_csv(("kernel", "cython_s", "python_s", "speedup", "max_abs_diff"), run(args.repeat))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
