"""Compare the compiled kernel with the NumPy fallback.

    python3 benchmarks/bench_kernels.py [--cells N] [--repeat R]
"""
import argparse
import timeit

import numpy as np

from virtualcalc import kernels, parse_expr
from virtualcalc.integrate import TagScheme, make_partition
from virtualcalc.realfun import compile_program

CASES = ["x^2", "sin(x)*exp(-x^2)", "sqrt(1 + cos(x)^2)", "1/(1 + x^2) + ln(x + 5)"]


def bench(text, cells, repeat):
    prog = compile_program(parse_expr(text))
    p = make_partition(-2, 2, cells, TagScheme.seeded(0))
    row = {}
    for name in kernels.BACKENDS:
        t = min(timeit.repeat(lambda: kernels.riemann_sum(prog, p.points, p.tags, backend=name),
                              number=1, repeat=repeat))
        row[name] = (t, kernels.riemann_sum(prog, p.points, p.tags, backend=name)[0])
    return row


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cells", type=int, default=1 << 20)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    names = list(kernels.BACKENDS)
    print(f"default backend: {kernels.BACKEND}; cells: {args.cells}")
    print(f"{'integrand':28}" + "".join(f"{n + ' (ms)':>16}" for n in names) + f"{'speedup':>10}")
    for text in CASES:
        row = bench(text, args.cells, args.repeat)
        sums = [row[n][1] for n in names]
        assert np.allclose(sums, sums[0], rtol=1e-12), sums
        line = f"{text:28}" + "".join(f"{row[n][0] * 1e3:16.2f}" for n in names)
        if "compiled" in row:
            line += f"{row['python'][0] / row['compiled'][0]:10.1f}x"
        print(line)


if __name__ == "__main__":
    main()
