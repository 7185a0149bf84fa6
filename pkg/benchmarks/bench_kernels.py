"""Compare the compiled and pure-Python kernel backends.

    python benchmarks/bench_kernels.py [--repeat 5]

Prints the best-of-``repeat`` wall time per call for each kernel and each
available backend, and the speed-up of the compiled core.
"""

import argparse
import timeit

import numpy as np

from ringres import _kernels
from ringres.floquet import tongue_scan

KERNELS = ("sin_power_sums", "discrete_ring_sum", "interaction_propagator")

CASES = [
    ("sin_power_sums", "N=10^5", lambda k: k.sin_power_sums(100_000, 0.0)),
    ("discrete_ring_sum", "N=10^5", lambda k: k.discrete_ring_sum(100_000, 1.0, 1.3, 1.5)),
    ("interaction_propagator", "1024 steps, 4 harmonics",
     lambda k: k.interaction_propagator(1.0, 1.0, np.array([0.1, 0.02, 0.01, 0.005]), 2.0, 0.0,
                                        1024)),
]


def _backends():
    found = [("python", _kernels.python_backend)]
    if _kernels.compiled_backend is not None:
        found.append(("cython", _kernels.compiled_backend))
    return found


def _time(fn, repeat):
    number = 1
    while timeit.timeit(fn, number=number) < 0.05:
        number *= 2
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def _with_backend(module, fn):
    saved = {name: getattr(_kernels, name) for name in KERNELS}
    saved_backend = _kernels.BACKEND
    try:
        for name in KERNELS:
            setattr(_kernels, name, getattr(module, name))
        # keep tongue_scan single-threaded for a like-for-like comparison
        _kernels.BACKEND = "python"
        return fn()
    finally:
        for name, value in saved.items():
            setattr(_kernels, name, value)
        _kernels.BACKEND = saved_backend


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    backends = _backends()
    if len(backends) == 1:
        print("compiled backend not built; timing the Python fallback only")

    header = f"{'kernel':<24}{'case':<26}" + "".join(f"{name:>14}" for name, _ in backends)
    if len(backends) == 2:
        header += f"{'speed-up':>12}"
    print(header)
    rows = CASES + [("tongue_scan", "h=0.1, 200 points", None)]
    for name, label, fn in rows:
        times = []
        for _, module in backends:
            if fn is None:
                call = lambda m=module: _with_backend(  # noqa: E731
                    m, lambda: tongue_scan(1.0, 0.1, (1.5, 2.5), resolution=200))
            else:
                call = lambda m=module, f=fn: f(m)  # noqa: E731
            times.append(_time(call, args.repeat))
        line = f"{name:<24}{label:<26}" + "".join(f"{t * 1e3:>12.3f}ms" for t in times)
        if len(times) == 2:
            line += f"{times[0] / times[1]:>11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
