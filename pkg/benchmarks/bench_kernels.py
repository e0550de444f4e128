"""Compare the compiled and numpy prime-field kernels.

    python3 benchmarks/bench_kernels.py [--sizes 50,100,200] [--p 101] [--repeat 3]
"""

import argparse
import time

import numpy as np

from skewquiver import backend
from skewquiver import _pykernels

try:
    from skewquiver import _ckernels
except ImportError:
    _ckernels = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="50,100,200,400")
    ap.add_argument("--p", type=int, default=101)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.Generator(np.random.Philox(args.seed))
    impls = {"python": _pykernels}
    if _ckernels is not None:
        impls["compiled"] = _ckernels
    print(f"backends available: {backend.available()}, p = {args.p}")
    print(f"{'n':>5} {'kernel':>8} " + " ".join(f"{k:>10}" for k in impls) + "   speedup")
    for n in map(int, args.sizes.split(",")):
        a = rng.integers(0, args.p, size=(n, n))
        b = rng.integers(0, args.p, size=(n, n))
        for kernel in ("rref", "matmul"):
            row = {}
            for name, mod in impls.items():
                if kernel == "rref":
                    row[name] = best_of(lambda: mod.rref_prime(a, args.p), args.repeat)
                else:
                    row[name] = best_of(lambda: mod.matmul_prime(a, b, args.p), args.repeat)
            speed = row["python"] / row["compiled"] if "compiled" in row else float("nan")
            print(f"{n:>5} {kernel:>8} " + " ".join(f"{row[k]:>10.4f}" for k in impls) + f"   {speed:6.1f}x")
        ref = _pykernels.rref_prime(a, args.p)[0]
        if _ckernels is not None:
            assert np.array_equal(ref, _ckernels.rref_prime(a, args.p)[0]), "backends disagree"


if __name__ == "__main__":
    main()
