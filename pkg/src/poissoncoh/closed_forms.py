"""Hand-transcribed coboundary formulas for the two linear local models.

These do not use the Schouten bracket: they hard-code the Hamiltonian
fields of the coordinate functions and the explicit component formulas of
d^0..d^3.  Comparing their matrices with the bracket-built slice matrices
is an independent check of the bracket sign convention.

The circle model lives in coordinates (theta, x1, x2, x3), indexed 0..3.
"""
from __future__ import annotations

from itertools import combinations
from typing import Callable, Dict, Tuple

from .algebra import Polynomial, variables
from .complexes import build_slice_matrix, slice_basis, basis_element
from .linalg import ExactMatrix
from .multivec import Multivector
from .poisson import PoissonStructure

N = 4
Field = Dict[int, Polynomial]


def _apply(X: Field, f: Polynomial) -> Polynomial:
    acc = Polynomial.zero(N)
    for j, c in X.items():
        acc = acc + c * f.partial(j)
    return acc


def near_positive_hamiltonians() -> Tuple[Field, ...]:
    x0, x1, x2, x3 = variables(N)
    return (
        {1: -x1, 3: -x3},
        {0: x1, 2: -x3},
        {1: x3, 3: -x1},
        {0: x3, 2: x1},
    )


def circle_hamiltonians() -> Tuple[Field, ...]:
    t, x1, x2, x3 = variables(N)
    return (
        {},
        {2: x3, 3: -x2},
        {3: -x1, 1: -x3},
        {2: x1, 1: x2},
    )


def _third(i: int, j: int, pool=(1, 2, 3)) -> int:
    return next(k for k in pool if k not in (i, j))


def _build(k: int, terms: Dict[Tuple[int, ...], Polynomial]) -> Multivector:
    return Multivector(k, terms, N)


def near_positive_coboundary(k: int, Y: Multivector) -> Multivector:
    X = near_positive_hamiltonians()
    h = lambda a, f: _apply(X[a], f)  # noqa: E731
    if k == 0:
        f = Y.as_function()
        return _build(1, {(i,): -h(i, f) for i in range(4)})
    if k == 1:
        f = Y.components()
        out = {}
        for i in (1, 2, 3):
            out[(0, i)] = h(i, f[0]) - h(0, f[i]) - f[i] * ((1 - (-1) ** i) // 2)
        for i, j in combinations((1, 2, 3), 2):
            kk = _third(i, j)
            out[(i, j)] = h(j, f[i]) - h(i, f[j]) - f[kk] * ((1 - (-1) ** (i + j)) // 2)
        return _build(2, out)
    if k == 2:
        f = {I: Y.coefficient(I) for I in combinations(range(4), 2)}
        return _build(3, {
            (0, 1, 2): -h(0, f[(1, 2)]) + h(1, f[(0, 2)]) - h(2, f[(0, 1)]) - f[(1, 2)] + f[(0, 3)],
            (0, 1, 3): -h(0, f[(1, 3)]) + h(1, f[(0, 3)]) - h(3, f[(0, 1)]) - 2 * f[(1, 3)],
            (0, 2, 3): -h(0, f[(2, 3)]) + h(2, f[(0, 3)]) - h(3, f[(0, 2)]) + f[(0, 1)] - f[(2, 3)],
            (1, 2, 3): -h(1, f[(2, 3)]) + h(2, f[(1, 3)]) - h(3, f[(1, 2)]),
        })
    if k == 3:
        acc = Polynomial.zero(N)
        for I in combinations(range(4), 3):
            l = next(a for a in range(4) if a not in I)
            acc = acc + h(l, Y.coefficient(I)) * (-1) ** (l + 1)
        acc = acc - 2 * Y.coefficient((1, 2, 3))
        return _build(4, {(0, 1, 2, 3): acc})
    if k == 4:
        return Multivector.zero(5, N)
    raise ValueError("k must be between 0 and 4")


def circle_coboundary(k: int, Y: Multivector) -> Multivector:
    X = circle_hamiltonians()
    h = lambda a, f: _apply(X[a], f)  # noqa: E731
    if k == 0:
        f = Y.as_function()
        return _build(1, {(i,): -h(i, f) for i in (1, 2, 3)})
    if k == 1:
        f = Y.components()
        out = {(0, i): h(i, f[0]) for i in (1, 2, 3)}
        for i, j in combinations((1, 2, 3), 2):
            kk = _third(i, j)
            out[(i, j)] = h(j, f[i]) - h(i, f[j]) + f[kk] * (-1) ** ((i + j + 2) // 2)
        return _build(2, out)
    if k == 2:
        out = {}
        for i, j in combinations((1, 2, 3), 2):
            kk = _third(i, j)
            out[(0, i, j)] = (h(i, Y.coefficient((0, j))) - h(j, Y.coefficient((0, i)))
                              + Y.coefficient((0, kk)) * (-1) ** ((i + j) // 2))
        acc = Polynomial.zero(N)
        for i in (1, 2, 3):
            j, kk = [a for a in (1, 2, 3) if a != i]
            acc = acc + h(i, Y.coefficient((j, kk))) * (-1) ** i
        out[(1, 2, 3)] = acc
        return _build(3, out)
    if k == 3:
        acc = Polynomial.zero(N)
        for i, j in combinations((1, 2, 3), 2):
            kk = _third(i, j)
            acc = acc + h(kk, Y.coefficient((0, i, j))) * (-1) ** (kk + 1)
        return _build(4, {(0, 1, 2, 3): acc})
    if k == 4:
        return Multivector.zero(5, N)
    raise ValueError("k must be between 0 and 4")


def transcribed_slice_matrix(formula: Callable[[int, Multivector], Multivector],
                             pi: PoissonStructure, k: int, i: int) -> ExactMatrix:
    """Matrix of ``formula`` on slice (k, i), in the same bases as build_slice_matrix."""
    ref = build_slice_matrix(pi, k, i)
    rows = {key: r for r, key in enumerate(ref.codomain)}
    cols = []
    for key in slice_basis(N, k, i, pi.weights):
        image = formula(k, basis_element(key, N))
        col = {}
        for J, c in image.terms.items():
            for m, v in c.terms.items():
                col[rows[(J, m)]] = v
        cols.append(col)
    return ExactMatrix(len(ref.codomain), len(ref.domain), cols)


def _wedge_theta(key):
    # d_I -> d_I ^ d_theta, written in sorted form: sign (-1)^{|I|}
    I, m = key
    return ((0,) + I, m), (-1) ** len(I)


def splitting_blocks(pi: PoissonStructure, i: int) -> Dict[str, Tuple[ExactMatrix, ExactMatrix]]:
    """Block identities for the circle model on slice degree i.

    Identify a multivector Z without d_theta with Z ^ d_theta.  Then
      "d1_1 = d0":   d^1 restricted to f d_theta equals d^0 followed by the identification;
      "d1_2 = d2_1": d^2 restricted to the d_theta-part equals d^1 on the d_theta-free part.
    Each entry maps a name to (left matrix, right matrix) which must be equal.
    """
    out = {}
    for name, k in (("d1_1 = d0", 0), ("d1_2 = d2_1", 1)):
        lower = build_slice_matrix(pi, k, i)
        upper = build_slice_matrix(pi, k + 1, i)
        up_dom = {key: c for c, key in enumerate(upper.domain)}
        up_cod = {key: r for r, key in enumerate(upper.codomain)}
        # columns of the lower map restricted to theta-free domain elements
        lo_cols = [c for c, (I, m) in enumerate(lower.domain) if 0 not in I]
        left_cols, right_cols = [], []
        for c in lo_cols:
            key = lower.domain[c]
            tkey, s = _wedge_theta(key)
            left_cols.append({r: v * s for r, v in upper.matrix.columns[up_dom[tkey]].items()})
            col = {}
            for r, v in lower.matrix.columns[c].items():
                ckey = lower.codomain[r]
                if 0 in ckey[0]:
                    raise ValueError("image of a theta-free element has a d_theta component")
                tck, s2 = _wedge_theta(ckey)
                col[up_cod[tck]] = v * s2
            right_cols.append(col)
        n_rows = len(upper.codomain)
        out[name] = (ExactMatrix(n_rows, len(lo_cols), left_cols),
                     ExactMatrix(n_rows, len(lo_cols), right_cols))
    return out
