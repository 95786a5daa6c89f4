"""Hot loops for modular linear algebra.

Two implementations of each kernel are kept: a numba-compiled one and a
plain numpy/Python one.  Set ``POISSONCOH_NUMBA=0`` in the environment to
force the numpy path (numba is also skipped automatically if it cannot be
imported).  Both paths return identical results.
"""
from __future__ import annotations

import os

import numpy as np

_FLAG = os.environ.get("POISSONCOH_NUMBA", "1").strip().lower()
NUMBA_REQUESTED = _FLAG not in ("0", "false", "no", "off")

try:
    if not NUMBA_REQUESTED:
        raise ImportError("disabled by POISSONCOH_NUMBA")
    from numba import njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - depends on the environment
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f

# largest prime below 2**31; products of two residues fit in int64
PRIMES = (2147483647, 2147483629, 2147483587, 2147483579, 2147483563, 2147483549)


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"


# ---------------------------------------------------------------- numpy path

def _inv_mod(a: int, p: int) -> int:
    return pow(int(a), p - 2, p)


def rref_mod_p_numpy(M: np.ndarray, p: int):
    """Reduced row echelon form of M mod p (M is copied). Returns (R, pivots)."""
    A = np.array(M, dtype=np.int64) % p
    nrows, ncols = A.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = _inv_mod(A[r, c], p)
        A[r] = (A[r] * inv) % p
        rows = np.nonzero(A[:, c])[0]
        rows = rows[rows != r]
        if rows.size:
            cols = np.nonzero(A[r])[0]
            f = (p - A[rows, c])[:, None]
            A[np.ix_(rows, cols)] = (A[np.ix_(rows, cols)] + f * A[r, cols][None, :]) % p
        pivots.append(c)
        r += 1
    return A, np.array(pivots, dtype=np.int64)


def ratrec_numpy(values: np.ndarray, modulus: int):
    """Rational reconstruction of each residue; den == 0 marks failure."""
    bound = _isqrt(modulus // 2)
    nums = np.zeros(values.shape, dtype=object)
    dens = np.zeros(values.shape, dtype=object)
    cache = {}
    flat_v = values.ravel()
    flat_n = nums.ravel()
    flat_d = dens.ravel()
    for idx in range(flat_v.size):
        v = int(flat_v[idx])
        if v == 0:
            flat_n[idx] = 0
            flat_d[idx] = 1
            continue
        if v not in cache:
            cache[v] = _ratrec_one(v, modulus, bound)
        flat_n[idx], flat_d[idx] = cache[v]
    return nums, dens


def _isqrt(n: int) -> int:
    import math
    return math.isqrt(n)


def _ratrec_one(v: int, m: int, bound: int):
    r0, r1 = m, v % m
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return 0, 0
    if s1 < 0:
        return -r1, -s1
    return r1, s1


# ---------------------------------------------------------------- numba path

@njit(cache=True)
def _inv_mod_nb(a, p):
    t0, t1 = 0, 1
    r0, r1 = p, a % p
    while r1 != 0:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t0 < 0:
        t0 += p
    return t0


@njit(cache=True)
def _rref_mod_p_nb(A, p):
    nrows, ncols = A.shape
    pivots = np.empty(min(nrows, ncols), dtype=np.int64)
    support = np.empty(ncols, dtype=np.int64)
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = -1
        for i in range(r, nrows):
            if A[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(ncols):
                tmp = A[r, j]
                A[r, j] = A[piv, j]
                A[piv, j] = tmp
        inv = _inv_mod_nb(A[r, c], p)
        ns = 0
        for j in range(c, ncols):
            if A[r, j] != 0:
                A[r, j] = (A[r, j] * inv) % p
                support[ns] = j
                ns += 1
        for i in range(nrows):
            if i == r:
                continue
            f = A[i, c]
            if f == 0:
                continue
            g = p - f
            for t in range(ns):
                j = support[t]
                A[i, j] = (A[i, j] + g * A[r, j]) % p
        pivots[r] = c
        r += 1
    return pivots[:r]


@njit(cache=True)
def _ratrec_nb(values, modulus, bound):
    n = values.size
    nums = np.zeros(n, dtype=np.int64)
    dens = np.zeros(n, dtype=np.int64)
    for idx in range(n):
        v = values[idx] % modulus
        if v == 0:
            dens[idx] = 1
            continue
        r0, r1 = modulus, v
        s0, s1 = 0, 1
        while r1 > bound:
            q = r0 // r1
            r0, r1 = r1, r0 - q * r1
            s0, s1 = s1, s0 - q * s1
        if s1 == 0 or abs(s1) > bound:
            continue
        if s1 < 0:
            nums[idx] = -r1
            dens[idx] = -s1
        else:
            nums[idx] = r1
            dens[idx] = s1
    return nums, dens


# ---------------------------------------------------------------- dispatch

def rref_mod_p(M: np.ndarray, p: int, use_numba: bool | None = None):
    """RREF of an integer matrix modulo a prime p < 2**31. Returns (R, pivots)."""
    if use_numba is None:
        use_numba = HAVE_NUMBA
    if use_numba and HAVE_NUMBA:
        A = np.ascontiguousarray(np.array(M, dtype=np.int64) % p)
        piv = _rref_mod_p_nb(A, np.int64(p))
        return A, piv
    return rref_mod_p_numpy(M, p)


def ratrec(values: np.ndarray, modulus: int, use_numba: bool | None = None):
    """Rational reconstruction of residues modulo ``modulus``.

    Returns (nums, dens) arrays; dens == 0 where no fraction with numerator
    and denominator below sqrt(modulus/2) exists.
    """
    if use_numba is None:
        use_numba = HAVE_NUMBA
    values = np.asarray(values)
    if use_numba and HAVE_NUMBA and modulus < 2**62:
        bound = _isqrt(modulus // 2)
        flat = np.ascontiguousarray(values.ravel().astype(np.int64))
        nums, dens = _ratrec_nb(flat, np.int64(modulus), np.int64(bound))
        return nums.reshape(values.shape).astype(object), dens.reshape(values.shape).astype(object)
    return ratrec_numpy(values.astype(object), modulus)
