"""Exact sparse linear algebra over the rationals.

Ranks and kernels are computed by Gauss-Jordan elimination modulo large
primes, then certified over Q: every kernel vector recovered by rational
reconstruction is checked by an exact integer product A*v = 0.  Since the
modular rank never exceeds the rational rank, ``ncols - rank_p`` verified
independent kernel vectors prove ``rank_Q = rank_p``.  When certification
fails (unlucky primes or huge entries) the routines fall back to
fraction-free integer elimination, which is also exposed directly.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from . import _kernels
from .algebra import Scalar, scalar

log = logging.getLogger(__name__)

Vector = List[Fraction]


class ExactMatrix:
    """Sparse matrix with exact rational entries, stored column-wise."""

    __slots__ = ("nrows", "ncols", "columns")

    def __init__(self, nrows: int, ncols: int, columns: Optional[Sequence[Mapping[int, Scalar]]] = None):
        self.nrows = nrows
        self.ncols = ncols
        if columns is None:
            columns = [{} for _ in range(ncols)]
        if len(columns) != ncols:
            raise ValueError("column count mismatch")
        cols = []
        for col in columns:
            clean = {}
            for r, v in col.items():
                if not 0 <= r < nrows:
                    raise IndexError(f"row {r} out of range")
                v = scalar(v)
                if v:
                    clean[r] = v
            cols.append(clean)
        self.columns = cols

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence]) -> "ExactMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        cols = [{r: rows[r][c] for r in range(nrows) if rows[r][c]} for c in range(ncols)]
        return cls(nrows, ncols, cols)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.nrows, self.ncols

    def nnz(self) -> int:
        return sum(len(c) for c in self.columns)

    def entry(self, r: int, c: int) -> Scalar:
        return self.columns[c].get(r, 0)

    def to_dense(self) -> List[List[Scalar]]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for c, col in enumerate(self.columns):
            for r, v in col.items():
                out[r][c] = v
        return out

    def is_zero(self) -> bool:
        return not any(self.columns)

    def rows(self) -> List[Dict[int, Scalar]]:
        out: List[Dict[int, Scalar]] = [{} for _ in range(self.nrows)]
        for c, col in enumerate(self.columns):
            for r, v in col.items():
                out[r][c] = v
        return out

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = []
        for col in other.columns:
            acc: Dict[int, Scalar] = {}
            for k, v in col.items():
                for r, a in self.columns[k].items():
                    acc[r] = acc.get(r, 0) + a * v
            cols.append({r: v for r, v in acc.items() if v})
        return ExactMatrix(self.nrows, other.ncols, cols)

    def apply(self, vec: Sequence[Scalar]) -> List[Scalar]:
        out: List[Scalar] = [0] * self.nrows
        for c, col in enumerate(self.columns):
            x = vec[c]
            if x:
                for r, v in col.items():
                    out[r] += v * x
        return out

    def hstack(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        return ExactMatrix(self.nrows, self.ncols + other.ncols, self.columns + other.columns)

    def select_columns(self, idx: Sequence[int]) -> "ExactMatrix":
        return ExactMatrix(self.nrows, len(idx), [self.columns[c] for c in idx])

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self.columns == other.columns

    def __repr__(self) -> str:
        return f"ExactMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"


@dataclass
class Echelon:
    """Certified elimination data for a matrix A."""

    rank: int
    pivots: Tuple[int, ...]
    kernel: Optional[List[Vector]] = None  # identity on non-pivot columns
    method: str = "modular"
    primes_used: int = 0


def _integer_columns(A: ExactMatrix) -> Tuple[List[Dict[int, int]], List[int]]:
    """Scale each column to integers; returns (int columns, scale per column)."""
    cols, scales = [], []
    for col in A.columns:
        d = 1
        for v in col.values():
            if isinstance(v, Fraction):
                d = lcm(d, v.denominator)
        cols.append({r: int(v * d) for r, v in col.items()})
        scales.append(d)
    return cols, scales


def _dense_mod(cols: List[Dict[int, int]], nrows: int, p: int) -> np.ndarray:
    M = np.zeros((nrows, len(cols)), dtype=np.int64)
    for c, col in enumerate(cols):
        for r, v in col.items():
            M[r, c] = v % p
    return M


def _crt(r1, m1: int, r2, m2: int):
    # combine residue arrays (object dtype) modulo coprime m1, m2
    inv = pow(m1, -1, m2)
    t = ((r2 - r1) * inv) % m2
    return r1 + m1 * t, m1 * m2


def _kernel_matrix(nums, dens, pivots, free, ncols) -> Optional[np.ndarray]:
    """Integer kernel candidates as columns of an object array, or None on failure.

    Column j is the reconstructed vector with 1 at free[j], scaled by the
    lcm of its denominators.
    """
    if np.any(dens == 0):
        return None
    K = np.zeros((ncols, len(free)), dtype=object)
    piv = list(pivots)
    for j, f in enumerate(free):
        dcol = dens[:, j]
        ncol = nums[:, j]
        if all(d == 1 for d in dcol):
            K[piv, j] = ncol
            K[f, j] = 1
        else:
            L = lcm(*(int(d) for d in dcol))
            K[piv, j] = [int(n) * (L // int(d)) for n, d in zip(ncol, dcol)]
            K[f, j] = L
    return K


def _verify_kernel(cols: List[Dict[int, int]], nrows: int, K: np.ndarray) -> bool:
    """Exact check that the integer-column matrix annihilates every column of K."""
    ncols = len(cols)
    if K.shape[1] == 0:
        return True
    kmax = int(np.max(np.abs(K))) if K.size else 0
    rowsum: Dict[int, int] = {}
    entry_max = 0
    for col in cols:
        for r, x in col.items():
            rowsum[r] = rowsum.get(r, 0) + abs(x)
            entry_max = max(entry_max, abs(x))
    amax_rowsum = max(rowsum.values(), default=0)
    if amax_rowsum * kmax < 2**62 and entry_max < 2**62:
        rows, cidx, vals = [], [], []
        for c, col in enumerate(cols):
            for r, x in col.items():
                rows.append(r)
                cidx.append(c)
                vals.append(x)
        B = sp.csr_matrix((np.array(vals, dtype=np.int64), (np.array(rows, dtype=np.int64),
                                                            np.array(cidx, dtype=np.int64))),
                          shape=(nrows, ncols), dtype=np.int64)
        return not np.any(B @ K.astype(np.int64))
    # big integers: exact Python arithmetic column by column
    for j in range(K.shape[1]):
        acc: Dict[int, int] = {}
        for c in np.nonzero(K[:, j])[0]:
            x = int(K[c, j])
            for r, a in cols[c].items():
                acc[r] = acc.get(r, 0) + a * x
        if any(acc.values()):
            return False
    return True


def _kernel_fractions(K: np.ndarray, free: Sequence[int]) -> List[Vector]:
    out = []
    for j, f in enumerate(free):
        L = int(K[f, j])
        out.append([Fraction(int(x), L) for x in K[:, j]])
    return out


def echelon(A: ExactMatrix, want_kernel: bool = False, use_numba: Optional[bool] = None) -> Echelon:
    """Certified rank, pivot columns and (optionally) a kernel basis of A."""
    ncols, nrows = A.ncols, A.nrows
    if ncols == 0 or A.is_zero():
        kernel = None
        if want_kernel:
            kernel = [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
        return Echelon(0, (), kernel, "trivial", 0)
    cols, scales = _integer_columns(A)

    best_rank = -1
    best_piv: Tuple[int, ...] = ()
    residues = None
    modulus = 1
    used = 0
    for p in _kernels.PRIMES:
        M = _dense_mod(cols, nrows, p)
        R, piv = _kernels.rref_mod_p(M, p, use_numba=use_numba)
        piv = tuple(int(c) for c in piv)
        rank = len(piv)
        used += 1
        if rank < best_rank or (rank == best_rank and piv != best_piv):
            continue  # unlucky prime
        if rank > best_rank:
            best_rank, best_piv, residues, modulus = rank, piv, None, 1
        pivset = set(piv)
        free = [c for c in range(ncols) if c not in pivset]
        # rank_Q >= rank_p, so full column or row rank mod p is already certified
        if not free:
            return Echelon(rank, piv, [] if want_kernel else None, "modular", used)
        if rank == nrows and not want_kernel:
            return Echelon(rank, piv, None, "modular", used)
        block = (-R[:rank, free]) % p
        block = block.astype(object)
        if residues is None:
            residues, modulus = block, p
        else:
            residues, modulus = _crt(residues, modulus, block, p)
        nums, dens = _kernels.ratrec(residues, modulus, use_numba=use_numba)
        K = _kernel_matrix(nums, dens, piv, free, ncols)
        if K is not None and _verify_kernel(cols, nrows, K):
            kernel = _scale_back(_kernel_fractions(K, free), scales) if want_kernel else None
            return Echelon(rank, piv, kernel, "modular", used)
    log.info("modular certification failed for %dx%d matrix; using exact elimination", nrows, ncols)
    return echelon_exact(A, want_kernel)


def _scale_back(kernel: Optional[List[Vector]], scales: List[int]) -> Optional[List[Vector]]:
    if kernel is None:
        return None
    return [[x * s if x else x for x, s in zip(v, scales)] for v in kernel]


def echelon_exact(A: ExactMatrix, want_kernel: bool = False) -> Echelon:
    """Fraction-free integer Gaussian elimination with row-content removal."""
    cols, scales = _integer_columns(A)
    ncols = A.ncols
    rows: List[Dict[int, int]] = [{} for _ in range(A.nrows)]
    for c, col in enumerate(cols):
        for r, v in col.items():
            rows[r][c] = v
    rows = [r for r in rows if r]
    echelon_rows: List[Tuple[int, Dict[int, int]]] = []
    remaining = rows
    for c in range(ncols):
        with_c = [r for r in remaining if c in r]
        if not with_c:
            continue
        prow = min(with_c, key=lambda r: (len(r), abs(r[c])))
        pv = prow[c]
        rest = []
        for r in remaining:
            if r is prow:
                continue
            if c in r:
                a = r[c]
                new: Dict[int, int] = {}
                for j, x in r.items():
                    new[j] = x * pv
                for j, x in prow.items():
                    v = new.get(j, 0) - a * x
                    if v:
                        new[j] = v
                    else:
                        new.pop(j, None)
                new.pop(c, None)
                if new:
                    g = 0
                    for x in new.values():
                        g = gcd(g, x)
                        if g == 1:
                            break
                    if g > 1:
                        new = {j: x // g for j, x in new.items()}
                    rest.append(new)
            else:
                rest.append(r)
        echelon_rows.append((c, prow))
        remaining = rest
    pivots = tuple(c for c, _ in echelon_rows)
    kernel = None
    if want_kernel:
        pivset = set(pivots)
        free = [c for c in range(ncols) if c not in pivset]
        kernel = []
        for f in free:
            v = [Fraction(0)] * ncols
            v[f] = Fraction(1)
            for c, row in reversed(echelon_rows):
                s = sum((Fraction(x) * v[j] for j, x in row.items() if j != c and v[j]), Fraction(0))
                v[c] = -s / row[c]
            kernel.append(v)
        kernel = _scale_back(kernel, scales)
    return Echelon(len(pivots), pivots, kernel, "exact", 0)


def rank(A: ExactMatrix, **kw) -> int:
    return echelon(A, **kw).rank


def rank_exact(A: ExactMatrix) -> int:
    return echelon_exact(A).rank


def nullspace(A: ExactMatrix, **kw) -> List[Vector]:
    return echelon(A, want_kernel=True, **kw).kernel


def nullspace_exact(A: ExactMatrix) -> List[Vector]:
    return echelon_exact(A, want_kernel=True).kernel


def pivot_columns(A: ExactMatrix, **kw) -> Tuple[int, ...]:
    return echelon(A, **kw).pivots


def solve(A: ExactMatrix, b: Sequence[Scalar], **kw) -> Optional[Vector]:
    """Some exact solution x of A x = b, or None when the system is inconsistent."""
    if len(b) != A.nrows:
        raise ValueError("right-hand side length mismatch")
    col = {r: v for r, v in enumerate(b) if v}
    aug = A.hstack(ExactMatrix(A.nrows, 1, [col]))
    ech = echelon(aug, want_kernel=True, **kw)
    last = A.ncols
    if last in ech.pivots:
        return None
    pivset = set(ech.pivots)
    free = [c for c in range(aug.ncols) if c not in pivset]
    v = ech.kernel[free.index(last)]
    scale = v[last]
    return [-(x / scale) for x in v[:last]]
