from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from poissoncoh import _kernels
from poissoncoh.linalg import (
    ExactMatrix,
    echelon,
    echelon_exact,
    nullspace,
    rank,
    rank_exact,
    solve,
)


def fraction_rank(rows):
    """Textbook Gauss-Jordan over Fractions, used as an independent oracle."""
    m = [[Fraction(x) for x in r] for r in rows]
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c] / m[r][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
    return r


@st.composite
def low_rank_matrices(draw):
    m = draw(st.integers(1, 7))
    n = draw(st.integers(1, 7))
    k = draw(st.integers(0, min(m, n)))
    coef = st.fractions(min_value=-4, max_value=4, max_denominator=3)
    U = [[draw(coef) for _ in range(k)] for _ in range(m)]
    V = [[draw(st.integers(-3, 3)) for _ in range(n)] for _ in range(k)]
    return [[sum((U[i][t] * V[t][j] for t in range(k)), Fraction(0)) for j in range(n)]
            for i in range(m)]


@settings(max_examples=80, deadline=None)
@given(low_rank_matrices())
def test_modular_and_exact_routes_agree(rows):
    A = ExactMatrix.from_dense(rows)
    mod = echelon(A, want_kernel=True)
    ex = echelon_exact(A, want_kernel=True)
    assert mod.rank == ex.rank == fraction_rank(rows)
    assert mod.pivots == ex.pivots
    assert len(mod.kernel) == A.ncols - mod.rank
    for v in mod.kernel:
        assert not any(A.apply(v))


@settings(max_examples=40, deadline=None)
@given(low_rank_matrices(), st.lists(st.integers(-3, 3), min_size=7, max_size=7))
def test_solve_consistent_systems(rows, x):
    A = ExactMatrix.from_dense(rows)
    b = A.apply(x[:A.ncols])
    s = solve(A, b)
    assert s is not None and A.apply(s) == b


def test_solve_inconsistent():
    A = ExactMatrix.from_dense([[1, 1], [2, 2]])
    assert solve(A, [1, 3]) is None


def test_large_entries_need_several_primes():
    big = 10 ** 40 + 7
    A = ExactMatrix.from_dense([[big, 3, 1], [2 * big, 6, 2], [5, 10 ** 30, 1]])
    e = echelon(A, want_kernel=True)
    assert e.rank == rank_exact(A) == 2
    for v in e.kernel:
        assert not any(A.apply(v))


def test_prime_multiple_entries_are_not_lost():
    p = _kernels.PRIMES[0]
    A = ExactMatrix.from_dense([[p, 0], [0, 1]])
    assert rank(A) == 2


def test_zero_and_empty():
    assert rank(ExactMatrix(3, 0)) == 0
    assert rank(ExactMatrix.from_dense([[0, 0], [0, 0]])) == 0
    assert nullspace(ExactMatrix.from_dense([[0, 0]])) == [[1, 0], [0, 1]]


def test_matrix_product_and_shape():
    A = ExactMatrix.from_dense([[1, 2], [3, 4]])
    B = ExactMatrix.from_dense([[0, 1], [1, 0]])
    assert (A @ B).to_dense() == [[2, 1], [4, 3]]
    assert A.shape == (2, 2)
    with pytest.raises(ValueError):
        A @ ExactMatrix(3, 1)
