"""Compiled vs pure-Python double-reflection transport.

    python benchmarks/bench_kernels.py [--sizes 512 4096 32768] [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from asympencil import _core
from asympencil.curve import builtin


def inputs(n):
    curve = builtin("slant")
    s = curve.grid(n)
    points, tangents = curve(s), curve.derivative(s, 1)
    u0 = np.cross(tangents[0], [0.0, 1.0, 0.0])
    return points, tangents, u0 / np.linalg.norm(u0)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[512, 4096, 32768])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)

    backends = {"python": _core.python_backend}
    if _core.compiled_backend is not None:
        backends["cython"] = _core.compiled_backend
    else:
        print("compiled extension not built; timing the fallback only")

    print(f"{'n':>8} " + " ".join(f"{name:>12}" for name in backends) + f" {'speedup':>9} {'max diff':>10}")
    for n in args.sizes:
        data = inputs(n)
        times, results = {}, {}
        for name, module in backends.items():
            results[name] = module.double_reflection(*data)
            times[name] = min(timeit.repeat(lambda: module.double_reflection(*data), number=1, repeat=args.repeat))
        row = f"{n:>8} " + " ".join(f"{times[k] * 1e3:>10.3f}ms" for k in backends)
        if "cython" in backends:
            diff = np.max(np.abs(results["cython"] - results["python"]))
            row += f" {times['python'] / times['cython']:>8.1f}x {diff:>10.1e}"
        print(row)


if __name__ == "__main__":
    main()
