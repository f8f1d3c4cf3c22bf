"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/compare_backends.py [--scale N]
"""
import argparse
import time

import numpy as np

from allknap import _backend
from allknap.convolution import P1, G1
from allknap.core import Instance, LexOrder, Mode
from allknap.propagation import propagate_kernels, propagate_modular
from allknap.solvers import boolean_kernels


def best_of(fn, repeats=3):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def cases(scale):
    rng = np.random.default_rng(0)
    x = rng.integers(0, P1, size=1 << (12 + scale), dtype=np.int64)
    yield "ntt", lambda b: b.ntt(x.copy(), P1, G1, False)

    u = 200 * scale
    ws = tuple([u] + rng.integers(1, u, 5).tolist())
    cc = boolean_kernels(Instance(ws, u * u, Mode.COINCHANGE), "adaptive")
    yield "propagate", lambda b: propagate_kernels(cc, backend=b.NAME)

    rs = boolean_kernels(Instance(ws, 0, Mode.RESIDUE), "adaptive")
    yield "residues", lambda b: propagate_modular(rs, backend=b.NAME)


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--scale", type=int, default=2)
    args = ap.parse_args()
    names = _backend.available()
    print(f"{'kernel':<12}" + "".join(f"{n:>12}" for n in names) + f"{'speedup':>10}")
    for label, fn in cases(args.scale):
        t = {n: best_of(lambda: fn(_backend.get(n))) for n in names}
        speed = t["python"] / t["cython"] if "cython" in t else 1.0
        print(f"{label:<12}" + "".join(f"{t[n]:>12.4f}" for n in names) + f"{speed:>9.1f}x")


if __name__ == "__main__":
    main()
