"""Timing comparison of the compiled kernels against the pure fallback.

Run as a script:  python3 benchmarks/bench_kernels.py [--sizes 1000,4000]
Each kernel is timed on the same inputs for both backends; the table
reports the median of repeated runs and the speedup ratio.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from hexsep import _kernels_py

try:
    from hexsep import _kernels_c
except ImportError:
    _kernels_c = None


def _median_time(fn, repeats: int = 5) -> float:
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    samples.sort()
    return samples[len(samples) // 2]


def bench_size(n: int, r: float, rng: np.random.Generator) -> list[tuple]:
    pts = rng.random((n, 2))
    rows = []

    def pairs_with(mod):
        return mod.radius_pairs(pts, r)

    a, b = pairs_with(_kernels_py)
    t_py = _median_time(lambda: pairs_with(_kernels_py))
    t_c = _median_time(lambda: pairs_with(_kernels_c)) if _kernels_c else None
    rows.append(("radius_pairs", n, len(a), t_py, t_c))

    t_py = _median_time(lambda: _kernels_py.union_labels(n, a, b))
    t_c = (_median_time(lambda: _kernels_c.union_labels(n, a, b))
           if _kernels_c else None)
    rows.append(("union_labels", n, len(a), t_py, t_c))

    # sweep over a radius ladder on pre-sorted candidate pairs
    cap = 3.0 * r
    sa, sb = _kernels_py.radius_pairs(pts, cap)
    d2 = ((pts[sa] - pts[sb]) ** 2).sum(axis=1)
    order = np.argsort(d2, kind="stable")
    sa, sb, d2 = sa[order], sb[order], d2[order]
    radii2 = (np.linspace(0.2 * r, cap, 32) ** 2)

    t_py = _median_time(lambda: _kernels_py.max_fraction_sweep(n, sa, sb, d2, radii2))
    t_c = (_median_time(lambda: _kernels_c.max_fraction_sweep(n, sa, sb, d2, radii2))
           if _kernels_c else None)
    rows.append(("max_fraction_sweep", n, len(sa), t_py, t_c))
    return rows


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="500,2000,8000,32000",
                        help="comma-separated point counts")
    parser.add_argument("--seed", type=int, default=1729)
    args = parser.parse_args()

    sizes = [int(s) for s in args.sizes.split(",")]
    rng = np.random.default_rng(args.seed)
    if _kernels_c is None:
        print("compiled backend not built; timing fallback only\n")

    header = f"{'kernel':<20} {'n':>7} {'pairs':>9} {'fallback':>10} {'compiled':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for n in sizes:
        # keep expected degree roughly constant across sizes
        r = 1.5 / np.sqrt(n)
        for name, sz, pairs, t_py, t_c in bench_size(n, r, rng):
            c_col = f"{t_c * 1e3:9.2f}ms" if t_c is not None else "      n/a"
            ratio = f"{t_py / t_c:7.1f}x" if t_c else "     n/a"
            print(f"{name:<20} {sz:>7} {pairs:>9} {t_py * 1e3:9.2f}ms {c_col} {ratio}")


if __name__ == "__main__":
    main()
