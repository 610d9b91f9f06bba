"""Time the numba kernels against their numpy fallbacks.

Both implementations are called directly, so the backend environment flag
does not matter here.  Each numba kernel is called once before timing to
exclude compilation.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from cyclicdiff import kernels
from cyclicdiff.rng import uniform_cloud


def cases():
    x50 = uniform_cloud(50, 2, 1)
    x51 = uniform_cloud(51, 2, 2)
    x256 = uniform_cloud(256, 2, 3).astype(np.complex128)
    x1024 = uniform_cloud(1024, 2, 4).astype(np.complex128)
    w256, w1024 = kernels.twiddles(256, -1), kernels.twiddles(1024, -1)
    w51 = kernels.twiddles(51, -1)
    rev = kernels._bit_reverse(1024)
    c60 = kernels.signed_binomials(60)
    return [
        ("iterate n=50 t=2000", kernels.iterate_numba, kernels.iterate_numpy,
         (x50, 2000, 1e-6, 1e6)),
        ("dft_direct n=51 d=2", kernels.dft_numba, kernels.dft_numpy,
         (x51.astype(np.complex128), w51)),
        ("dft_direct n=256 d=2", kernels.dft_numba, kernels.dft_numpy, (x256, w256)),
        ("fft_radix2 n=1024 d=2", kernels.fft2_numba, kernels.fft2_numpy, (x1024, w1024, rev)),
        ("binomial n=50 t=60", kernels.binomial_numba, kernels.binomial_numpy, (x50, c60)),
    ]


def best_of(fn, args, repeat):
    timer = timeit.Timer(lambda: fn(*args))
    loops, _ = timer.autorange()
    return min(timer.repeat(repeat, loops)) / loops


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    print(f"{'kernel':<24}{'numba':>12}{'numpy':>12}{'speedup':>10}")
    for name, fast, slow, call in cases():
        np.testing.assert_allclose(np.asarray(fast(*call)[0]), np.asarray(slow(*call)[0]),
                                   rtol=1e-9, atol=1e-12)
        t_fast = best_of(fast, call, args.repeat)
        t_slow = best_of(slow, call, args.repeat)
        print(f"{name:<24}{t_fast * 1e6:>10.1f}us{t_slow * 1e6:>10.1f}us"
              f"{t_slow / t_fast:>9.1f}x")


if __name__ == "__main__":
    main()
