"""Time the compiled F_p pivot kernel against the pure-Python fallback.

Usage: python3 benchmarks/bench_kernel.py [--sizes 20,60,120] [--repeat 3]

Both backends get identical random sparse matrices; the script also checks
that they return the same answer before reporting any timing.
"""
from __future__ import annotations

import argparse
import random
import timeit

from novbar import _pykernel

try:
    from novbar import _ckernel
except ImportError:
    _ckernel = None


def instance(n: int, density: float, p: int, seed: int):
    rng = random.Random(seed)
    rows = [rng.randint(0, 20) for _ in range(n)]
    cols = [rng.randint(0, 20) for _ in range(n)]
    data = [{i: rng.randint(1, p - 1) for i in range(n) if rng.random() < density} for _ in range(n)]
    return rows, cols, data


def run(kernel, rows, cols, data, p):
    return kernel.triangularize_modp(rows, cols, [dict(c) for c in data], p, 0, True, True)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="20,60,120")
    ap.add_argument("--density", type=float, default=0.15)
    ap.add_argument("--prime", type=int, default=2)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _ckernel is None:
        raise SystemExit("compiled kernel is not built; run `pip install -e . --no-build-isolation`")
    print(f"{'n':>5} {'pure (ms)':>11} {'cython (ms)':>12} {'speedup':>8}")
    for n in (int(s) for s in args.sizes.split(",")):
        rows, cols, data = instance(n, args.density, args.prime, seed=n)
        a = run(_pykernel, rows, cols, data, args.prime)
        b = run(_ckernel, rows, cols, data, args.prime)
        if (a[0], a[1], list(a[2])) != (b[0], b[1], list(b[2])):
            raise SystemExit(f"backends disagree at n={n}")
        tp = min(timeit.repeat(lambda: run(_pykernel, rows, cols, data, args.prime), number=1, repeat=args.repeat))
        tc = min(timeit.repeat(lambda: run(_ckernel, rows, cols, data, args.prime), number=1, repeat=args.repeat))
        print(f"{n:>5} {tp * 1e3:>11.2f} {tc * 1e3:>12.2f} {tp / tc:>7.1f}x")


if __name__ == "__main__":
    main()
