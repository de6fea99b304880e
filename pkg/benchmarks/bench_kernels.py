"""Time the numba kernels against the pure-numpy fallback.

Run with ``python3 benchmarks/bench_kernels.py [--repeat N]``. The first numba
call (JIT compilation or cache load) is excluded from the timings.
"""
import argparse
import math
import timeit

import numpy as np

from plategap import kernels

ELL, SIGMA = math.pi / 150, 0.2


def _cases():
    w2 = (math.pi / ELL) ** 2
    lo = math.sqrt((1.0 + w2 * 4) ** 2) * (1 + 1e-8)
    hi = math.sqrt((1.0 + w2 * 6.25) ** 2) * (1 - 1e-8)
    rng = np.random.default_rng(0)
    u = rng.standard_normal((257, 513))
    ms = np.arange(1.0, 9.0)
    amps = rng.uniform(-1.0, 1.0, ms.size)
    delta = rng.uniform(0.0, 1.0, 4)
    s = np.linspace(1.01, 3e5, 10_000)
    return {
        "find_root": lambda k: k.find_root(1, ELL, SIGMA, False, lo, hi, 5e-14, 200),
        "z_values": lambda k: k.z_values(s, 1, ELL, SIGMA, False),
        "stencil13": lambda k: k.stencil13(u, 0.01, 0.005),
        "trig_abs_max": lambda k: k.trig_abs_max(ms, amps, 4096, 60),
        "simplex_linear_max": lambda k: k.simplex_linear_max(delta, 60),
    }


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5, help="timing repeats (best is kept)")
    p.add_argument("--number", type=int, default=10, help="calls per repeat")
    args = p.parse_args(argv)

    backends = {"numpy": kernels.get_backend("numpy"), "numba": kernels.get_backend("numba")}
    print(f"{'kernel':<20}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}")
    for name, call in _cases().items():
        times = {}
        for label, mod in backends.items():
            call(mod)
            best = min(timeit.repeat(lambda: call(mod), repeat=args.repeat, number=args.number))
            times[label] = 1e3 * best / args.number
        print(f"{name:<20}{times['numpy']:>12.4f}{times['numba']:>12.4f}"
              f"{times['numpy'] / times['numba']:>9.1f}x")


if __name__ == "__main__":
    main()
