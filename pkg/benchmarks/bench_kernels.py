"""Compare the compiled and pure-numpy kernel backends.

Usage::

    python3 benchmarks/bench_kernels.py [--size 1500] [--repeat 3]

Prints the best wall-clock time of each backend per task and the speed-up.
"""

import argparse
import time

import numpy as np

from mixbie import _backend
from mixbie.geometry import build_mesh
from mixbie.operators import layer_matrices
from mixbie.specfun import bessel01


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def tasks(size):
    rng = np.random.default_rng(0)
    x = rng.uniform(1e-3, 200.0, size * size // 2)
    mesh = build_mesh("star", 22, 0)
    ang = np.linspace(0, 2 * np.pi, size, endpoint=False)
    pts = [np.ascontiguousarray(v) for v in
           (np.cos(ang), np.sin(ang), np.cos(ang), np.sin(ang),
            1.5 * np.cos(ang + 1e-3), 1.5 * np.sin(ang + 1e-3), np.cos(ang), np.sin(ang),
            np.full(size, 2 * np.pi / size))]

    def fill(omega, name):
        dtype = np.float64 if omega == 0 else np.complex128
        out = [np.empty((size, size), dtype=dtype) for _ in range(3)]
        core = _backend.get(name)
        if omega == 0:
            return lambda: core.fill_laplace(*pts, *out)
        return lambda: core.fill_helmholtz(omega, *pts, *out)

    return {
        f"bessel01 ({x.size} points)": lambda name: (lambda: bessel01(x, backend=name)),
        f"Laplace fill {size}x{size}": lambda name: fill(0.0, name),
        f"Helmholtz fill {size}x{size}": lambda name: fill(10.0, name),
        f"layer_matrices star N={mesh.n}": lambda name: (
            lambda: layer_matrices(mesh, 10.0, backend=name)),
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--size", type=int, default=1500)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)
    names = [n for n in ("python", "cython") if n in _backend.BACKENDS]
    print(f"backends: {', '.join(names)}")
    print(f"{'task':<36}" + "".join(f"{n:>12}" for n in names) + f"{'speed-up':>10}")
    for label, make in tasks(args.size).items():
        times = {}
        for name in names:
            previous = _backend.set_backend(name)
            try:
                times[name] = best_of(make(name), args.repeat)
            finally:
                _backend.set_backend(previous)
        row = f"{label:<36}" + "".join(f"{times[n]:>11.3f}s" for n in names)
        if len(names) == 2:
            row += f"{times['python'] / times['cython']:>9.2f}x"
        print(row)


if __name__ == "__main__":
    main()
