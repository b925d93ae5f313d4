"""Compare the compiled and numpy stepping kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import math
import timeit

import numpy as np

from cyclewalk.kernels import available_backends
from cyclewalk.model import WalkConfig, cs_a, hadamard, localized_state

CASES = [
    # (label, n, steps)
    ("evolve", 64, 100_000),
    ("evolve", 200, 10_000),
    ("evolve", 2000, 2_000),
    ("variation", 200, 10_000),
    ("cesaro", 16, 100_000),
]


def workload(kern, kind, psi, a, b, steps):
    if kind == "evolve":
        return lambda: kern.evolve(psi, a, b, steps)
    if kind == "variation":
        return lambda: kern.variation(psi, a, b, 0, steps)
    return lambda: kern.cesaro(psi, a, b, steps)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    backends = available_backends()
    coin = hadamard()
    print(f"{'kernel':<10} {'n':>5} {'steps':>7} " + " ".join(f"{k:>10}" for k in backends)
          + ("    speedup" if len(backends) > 1 else ""))
    for kind, n, steps in CASES:
        psi = localized_state(WalkConfig(n, coin, cs_a())).amplitudes
        times = {}
        for name, kern in backends.items():
            fn = workload(kern, kind, psi, coin.a, coin.b, steps)
            times[name] = min(timeit.repeat(fn, number=1, repeat=args.repeat))
        row = f"{kind:<10} {n:>5} {steps:>7} " + " ".join(f"{t:>9.4f}s" for t in times.values())
        if "cython" in times:
            row += f"  {times['python'] / times['cython']:>8.1f}x"
            ref = backends["python"].evolve(psi, coin.a, coin.b, 50)
            got = backends["cython"].evolve(psi, coin.a, coin.b, 50)
            assert math.isclose(float(np.max(np.abs(ref - got))), 0.0, abs_tol=1e-12)
        print(row)


if __name__ == "__main__":
    main()
