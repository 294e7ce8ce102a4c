"""
Side-by-side timing of the hot kernels: numba backend vs pure numpy.

Imports both backend modules directly (ignoring PAULIWALK_NO_NUMBA, which
only controls which one the package dispatches to) and times each kernel
on identical inputs after a warmup call, so numba's compilation cost is
excluded. Run from the repository root:

    python3 benchmarks/bench_kernels.py [--n 4096] [--batch 2000] [--repeat 5]
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from pauliwalk._kernels import numpy_backend

try:
    from pauliwalk._kernels import numba_backend
except ImportError:
    numba_backend = None


def _inputs(n: int, batch: int, seed: int = 7) -> dict:
    rng = np.random.default_rng(seed)
    probs = rng.uniform(0.05, 0.95, n)
    a_plus = rng.uniform(0.5, 1.5, n)
    a_minus = -rng.uniform(0.5, 1.5, n)

    # Degree-4 word tables: 16 subset coefficients, all windows = all sites.
    c0 = rng.normal(size=16) + 1j * rng.normal(size=16)
    cvec = rng.normal(size=(16, 3)) + 1j * rng.normal(size=(16, 3))
    blochs = rng.uniform(-0.5, 0.5, (n, 3))
    masks = np.full(n, 15, dtype=np.int64)

    g = rng.normal(size=(batch, 4, 4)) + 1j * rng.normal(size=(batch, 4, 4))
    herm = (g + np.conj(np.swapaxes(g, 1, 2))) / 2.0

    return {
        "pb_weights": (probs,),
        "pb_log_weights": (probs,),
        "moment_dp": (a_plus, a_minus, probs, 8),
        "word_dp": (c0, cvec, blochs, masks),
        "jacobi_eigvals4_raw": (np.ascontiguousarray(herm),),
    }


def _time(fn, args, repeat: int) -> float:
    fn(*args)  # warmup; compiles the numba kernels on first call
    timer = timeit.Timer(lambda: fn(*args))
    number = max(1, timer.autorange()[0] // 10)
    return min(timer.repeat(repeat=repeat, number=number)) / number


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.strip().splitlines()[0])
    parser.add_argument("--n", type=int, default=4096, help="site count for the DP kernels")
    parser.add_argument("--batch", type=int, default=2000, help="matrix count for the eigensolver")
    parser.add_argument("--repeat", type=int, default=5, help="timing repetitions (best is kept)")
    opts = parser.parse_args()

    inputs = _inputs(opts.n, opts.batch)
    print(f"n={opts.n} sites, batch={opts.batch} matrices, best of {opts.repeat}")
    header = f"{'kernel':<22}{'numpy':>12}{'numba':>12}{'speedup':>9}"
    print(header)
    print("-" * len(header))
    for name, args in inputs.items():
        t_np = _time(getattr(numpy_backend, name), args, opts.repeat)
        if numba_backend is None:
            print(f"{name:<22}{t_np * 1e3:>10.3f}ms{'---':>12}{'---':>9}")
            continue
        t_nb = _time(getattr(numba_backend, name), args, opts.repeat)
        print(f"{name:<22}{t_np * 1e3:>10.3f}ms{t_nb * 1e3:>10.3f}ms{t_np / t_nb:>8.1f}x")
    if numba_backend is None:
        print("numba unavailable; only the numpy fallback was timed")


if __name__ == "__main__":
    main()
