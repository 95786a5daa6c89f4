"""Compare the numba and numpy paths of the modular RREF kernel.

Runs both backends on the coboundary slice matrices of the quadratic
point model and on random dense matrices, checks that they agree, and
prints timings.

    python benchmarks/bench_kernels.py [--max-degree 6] [--repeat 3]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from poissoncoh import _kernels
from poissoncoh.complexes import build_slice_matrix
from poissoncoh.linalg import _dense_mod, _integer_columns
from poissoncoh.models import blf_point

P = _kernels.PRIMES[0]


def _time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def slice_matrices(max_degree: int):
    pi = blf_point()
    for k in range(5):
        for i in range(max_degree + 1):
            A = build_slice_matrix(pi, k, i).matrix
            if A.nrows and A.ncols:
                cols, _ = _integer_columns(A)
                yield f"d{k}_{i}", _dense_mod(cols, A.nrows, P)


def random_matrices(sizes, seed: int = 0):
    rng = np.random.default_rng(seed)
    for n in sizes:
        M = rng.integers(-3, 4, size=(n, n + n // 2)).astype(np.int64) % P
        yield f"random {n}x{n + n // 2}", M


def run(cases, repeat: int) -> None:
    print(f"{'case':>16} {'shape':>12} {'numpy s':>10} {'numba s':>10} {'speedup':>8}")
    for name, M in cases:
        a = _kernels.rref_mod_p(M, P, use_numba=False)
        b = _kernels.rref_mod_p(M, P, use_numba=True)
        assert np.array_equal(a[0], b[0]) and list(a[1]) == list(b[1]), name
        t_np = _time(lambda: _kernels.rref_mod_p(M, P, use_numba=False), repeat)
        t_nb = _time(lambda: _kernels.rref_mod_p(M, P, use_numba=True), repeat)
        shape = f"{M.shape[0]}x{M.shape[1]}"
        print(f"{name:>16} {shape:>12} {t_np:10.4f} {t_nb:10.4f} {t_np / max(t_nb, 1e-9):8.1f}")


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-degree", type=int, default=6)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is unavailable or disabled (POISSONCOH_NUMBA=0); nothing to compare")
    # compile outside the timed region
    _kernels.rref_mod_p(np.eye(3, dtype=np.int64), P, use_numba=True)
    big = [(n, M) for n, M in slice_matrices(args.max_degree) if M.size >= 2000]
    run(big, args.repeat)
    run(random_matrices((50, 100, 200)), args.repeat)


if __name__ == "__main__":
    main()
