"""Compare the compiled and pure-Python family kernels.

    python benchmarks/bench_kernels.py [--repeat N] [--points N]
"""
import argparse
import timeit

import numpy as np

from relqng import _kernels


def backends():
    out = {"python": _kernels.python_backend}
    try:
        from relqng import _ckernels
    except ImportError:
        pass
    else:
        out["cython"] = _ckernels
    return out


def cases(k, points):
    ps = np.linspace(0.0, 1.0, points)
    scalars = [(float(p), 0.3 * np.sqrt(p * (1 - p))) for p in ps]
    return {
        f"ng_closed_form x{points}": lambda: [k.ng_closed_form(p, r) for p, r in scalars],
        "minimize_over_r(0.03)": lambda: k.minimize_over_r(0.03),
        f"minimize_many({points})": lambda: k.minimize_many(ps),
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--points", type=int, default=2000)
    args = parser.parse_args(argv)

    kernels = backends()
    timings = {}
    for name, k in kernels.items():
        for label, fn in cases(k, args.points).items():
            best = min(timeit.repeat(fn, number=1, repeat=args.repeat))
            timings.setdefault(label, {})[name] = best

    header = f"{'case':<28}" + "".join(f"{n:>14}" for n in kernels) + "   speedup"
    print(header)
    for label, row in timings.items():
        line = f"{label:<28}" + "".join(f"{row[n] * 1e3:>12.3f}ms" for n in kernels)
        if "cython" in row:
            line += f"   {row['python'] / row['cython']:7.1f}x"
        print(line)


if __name__ == "__main__":
    main()
