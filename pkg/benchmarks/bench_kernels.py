"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--height 100] [--repeat 3]
"""

import argparse
import timeit

from shimquot import _kernels_py
from shimquot.catalog import load_catalog
from shimquot.kernels import SIEVE_MODULI

try:
    from shimquot import _kernels
except ImportError:
    _kernels = None


def workloads(height):
    recs = [r for r in load_catalog() if r.model is not None and r.expected_n != "inf"]
    models = [r.model for r in recs]
    count = lambda mod: [mod.fp_affine_count(list(m.F), p) for m in models for p in (101, 211, 307)]
    sieve = lambda mod: [mod.square_sieve(list(m.F), m.n, height, SIEVE_MODULI) for m in models[:10]]
    return {"fp_affine_count": count, "square_sieve": sieve}, len(models)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--height", type=int, default=100)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    jobs, n = workloads(args.height)
    print(f"{n} catalog models, sieve height {args.height}")
    print(f"{'kernel':<16}{'python s':>10}{'cython s':>10}{'speedup':>9}")
    for name, job in jobs.items():
        py = min(timeit.repeat(lambda: job(_kernels_py), number=1, repeat=args.repeat))
        if _kernels is None:
            print(f"{name:<16}{py:>10.3f}{'n/a':>10}{'':>9}")
            continue
        assert job(_kernels) == job(_kernels_py)
        cy = min(timeit.repeat(lambda: job(_kernels), number=1, repeat=args.repeat))
        print(f"{name:<16}{py:>10.3f}{cy:>10.4f}{py / cy:>8.0f}x")


if __name__ == "__main__":
    main()
