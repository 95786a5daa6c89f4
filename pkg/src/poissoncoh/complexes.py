"""Graded slices of the Lichnerowicz complex d = [pi, .] and their cohomology.

Slice (k, i) is spanned by the k-vectors m d_I with m a monomial.  With unit
weights, i is the polynomial degree of the coefficient m.  With general
weights w the slice is fixed by wdeg(m) - sum_{j in I} w_j = i - k, which
reduces to the unit-weight rule.  If pi is weight-homogeneous with shift
delta = wdeg(pi^{ab}) - w_a - w_b, then d^k maps slice (k, i) to slice
(k+1, i + 1 + delta); for unit weights this is coefficient degree
i + deg(pi) - 1.  The image landing in slice (k, i) therefore comes from
slice (k-1, i - 1 - delta).
"""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import gcd, lcm
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .algebra import Monomial, Polynomial, check_weights, monomial_basis, weighted_degree
from .linalg import Echelon, ExactMatrix, echelon
from .multivec import MultiIndex, Multivector, schouten
from .poisson import PoissonStructure

log = logging.getLogger(__name__)

BasisKey = Tuple[MultiIndex, Monomial]


def _key_order(key: BasisKey):
    I, m = key
    # index tuples ascending, then monomials in descending graded-lex order
    return (I, -sum(m), tuple(-e for e in m))


def coordinate_matrix(images: Sequence[Multivector], extra: Sequence[Multivector] = ()
                      ) -> Tuple[ExactMatrix, Dict[BasisKey, int]]:
    """Matrix whose columns are the coordinates of ``images``.

    Rows are all (index, monomial) pairs occurring in ``images`` or ``extra``,
    in a deterministic order.  Returns (matrix, row index map).
    """
    keys = set()
    for mv in list(images) + list(extra):
        for I, c in mv.terms.items():
            for m in c.terms:
                keys.add((I, m))
    ordered = sorted(keys, key=_key_order)
    rows = {k: r for r, k in enumerate(ordered)}
    cols = []
    for mv in images:
        col = {}
        for I, c in mv.terms.items():
            for m, v in c.terms.items():
                col[rows[(I, m)]] = v
        cols.append(col)
    return ExactMatrix(len(ordered), len(images), cols), rows


def slice_basis(n: int, k: int, i: int, weights: Optional[Sequence[int]] = None) -> List[BasisKey]:
    """Ordered basis of slice (k, i): index tuples ascending, monomials descending."""
    w = check_weights(weights, n)
    if k < 0 or k > n:
        return []
    out = []
    for I in combinations(range(n), k):
        d = i - k + sum(w[j] for j in I)
        if d < 0:
            continue
        for m in monomial_basis(n, d, w):
            out.append((I, m))
    return out


def basis_element(key: BasisKey, n: int) -> Multivector:
    I, m = key
    return Multivector.basis(I, n, Polynomial.monomial(m))


def vector_to_multivector(vec: Sequence, basis: Sequence[BasisKey], k: int, n: int) -> Multivector:
    terms: Dict[MultiIndex, Dict[Monomial, Fraction]] = {}
    for x, (I, m) in zip(vec, basis):
        if x:
            terms.setdefault(I, {})[m] = x
    return Multivector(k, {I: Polynomial(t, n) for I, t in terms.items()}, n)


def multivector_to_vector(mv: Multivector, basis: Sequence[BasisKey]) -> List:
    index = {key: j for j, key in enumerate(basis)}
    vec = [0] * len(basis)
    for I, c in mv.terms.items():
        for m, v in c.terms.items():
            if (I, m) not in index:
                raise ValueError(f"term {m} d{I} is not in the slice basis")
            vec[index[(I, m)]] = v
    return vec


def _shift(pi: PoissonStructure) -> int:
    delta = pi.homogeneity_shift()
    if delta is None:
        raise ValueError("the bivector is not weight-homogeneous; graded slices are undefined")
    return delta


def target_degree(pi: PoissonStructure, i: int) -> int:
    """Slice degree i' with d^k(slice (k, i)) inside slice (k+1, i')."""
    return i + 1 + _shift(pi)


def source_degree(pi: PoissonStructure, i: int) -> int:
    """Slice degree j with d^{k-1}(slice (k-1, j)) inside slice (k, i)."""
    return i - 1 - _shift(pi)


@dataclass(frozen=True)
class GradedSliceMatrix:
    k: int
    i: int
    target_i: int
    domain: Tuple[BasisKey, ...]
    codomain: Tuple[BasisKey, ...]
    matrix: ExactMatrix

    @property
    def shape(self) -> Tuple[int, int]:
        return self.matrix.shape


@lru_cache(maxsize=512)
def build_slice_matrix(pi: PoissonStructure, k: int, i: int) -> GradedSliceMatrix:
    """Exact matrix of d^k restricted to slice (k, i)."""
    n = pi.n
    if not 0 <= k <= n:
        raise ValueError(f"multivector degree {k} outside 0..{n}")
    ti = target_degree(pi, i)
    domain = tuple(slice_basis(n, k, i, pi.weights))
    codomain = tuple(slice_basis(n, k + 1, ti, pi.weights))
    rows = {key: r for r, key in enumerate(codomain)}
    cols = []
    for key in domain:
        image = schouten(pi.bivector, basis_element(key, n))
        col = {}
        for J, c in image.terms.items():
            for m, v in c.terms.items():
                col[rows[(J, m)]] = v
        cols.append(col)
    return GradedSliceMatrix(k, i, ti, domain, codomain, ExactMatrix(len(codomain), len(domain), cols))


def coboundary_matrix(pi: PoissonStructure, k: int, domain: Sequence[BasisKey]
                      ) -> Tuple[ExactMatrix, Tuple[BasisKey, ...]]:
    """Matrix of d^k on an arbitrary list of basis k-vectors, no grading needed.

    The codomain is every basis (k+1)-vector occurring in some image, in
    the slice ordering.  Used for bivectors that are not weight-homogeneous.
    """
    images = [schouten(pi.bivector, basis_element(key, pi.n)) for key in domain]
    keys = sorted({(J, m) for im in images for J, c in im.terms.items() for m in c.terms},
                  key=_key_order)
    rows = {key: r for r, key in enumerate(keys)}
    cols = [{rows[(J, m)]: v for J, c in im.terms.items() for m, v in c.terms.items()}
            for im in images]
    return ExactMatrix(len(keys), len(domain), cols), tuple(keys)


@lru_cache(maxsize=512)
def slice_rank(pi: PoissonStructure, k: int, i: int) -> int:
    if k < 0 or k > pi.n:
        return 0
    return echelon(build_slice_matrix(pi, k, i).matrix).rank


@dataclass
class SliceCohomology:
    k: int
    i: int
    domain_dim: int
    nullity: int
    prev_rank: int
    dim: int
    representatives: Optional[List[Multivector]] = None


def _previous(pi: PoissonStructure, k: int, i: int) -> Optional[GradedSliceMatrix]:
    if k == 0:
        return None
    return build_slice_matrix(pi, k - 1, source_degree(pi, i))


def _primitive(vec: List[Fraction]) -> List[Fraction]:
    den = 1
    for x in vec:
        if x:
            den = lcm(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    lead = next((x for x in ints if x), 1)
    if lead < 0:
        g = -g
    return [Fraction(x, g) for x in ints] if g else [Fraction(x) for x in ints]


def representatives(pi: PoissonStructure, k: int, i: int) -> List[Multivector]:
    """Cocycles spanning a complement of the coboundaries in slice (k, i).

    Coboundaries are echelonized with pivots at the largest coordinate
    index (smallest graded-lex terms); the representatives are the
    cocycles vanishing at those pivot coordinates, so each class is
    represented by its normal form with the smallest terms eliminated.
    """
    d = build_slice_matrix(pi, k, i)
    ncols = len(d.domain)
    prev = _previous(pi, k, i)
    constraints: List[Dict[int, int]] = []
    if prev is not None and prev.matrix.ncols:
        assert prev.codomain == d.domain
        # image vectors as rows, coordinates reversed so pivots land at high indices
        rev_cols: List[Dict[int, object]] = [{} for _ in range(ncols)]
        for c, col in enumerate(prev.matrix.columns):
            for r, v in col.items():
                rev_cols[ncols - 1 - r][c] = v
        rev = ExactMatrix(prev.matrix.ncols, ncols, rev_cols)
        for pc in echelon(rev).pivots:
            constraints.append({ncols - 1 - pc: 1})
    A = d.matrix
    if constraints:
        rows = A.rows() + constraints
        cols: List[Dict[int, object]] = [{} for _ in range(ncols)]
        for r, row in enumerate(rows):
            for c, v in row.items():
                cols[c][r] = v
        A = ExactMatrix(len(rows), ncols, cols)
    kernel = echelon(A, want_kernel=True).kernel
    out = [vector_to_multivector(_primitive(v), d.domain, k, pi.n) for v in kernel]
    return out


def cohomology_dim(pi: PoissonStructure, k: int, i: int, with_representatives: bool = False
                   ) -> SliceCohomology:
    d = build_slice_matrix(pi, k, i)
    r = slice_rank(pi, k, i)
    prev_rank = slice_rank(pi, k - 1, source_degree(pi, i)) if k > 0 else 0
    ncols = len(d.domain)
    dim = ncols - r - prev_rank
    if dim < 0:
        raise ArithmeticError(f"negative cohomology dimension at ({k}, {i}); is pi Poisson?")
    reps = representatives(pi, k, i) if with_representatives else None
    if reps is not None and len(reps) != dim:
        raise ArithmeticError("representative count disagrees with the dimension")
    return SliceCohomology(k, i, ncols, ncols - r, prev_rank, dim, reps)


@dataclass
class CohomologyReport:
    structure: str
    coords: Tuple[str, ...]
    k_range: Tuple[int, ...]
    i_max: int
    slices: Dict[Tuple[int, int], SliceCohomology] = field(default_factory=dict)

    def dims(self, k: int) -> List[int]:
        return [self.slices[(k, i)].dim for i in range(self.i_max + 1)]

    def totals(self) -> Dict[int, int]:
        return {k: sum(self.dims(k)) for k in self.k_range}

    def representatives(self, k: int, i: int) -> Optional[List[Multivector]]:
        return self.slices[(k, i)].representatives


def _slice_job(args):
    pi, k, i, reps_limit = args
    want = reps_limit is not None and len(slice_basis(pi.n, k, i, pi.weights)) <= reps_limit
    return cohomology_dim(pi, k, i, with_representatives=want)


def cohomology_table(pi: PoissonStructure, k_range: Optional[Iterable[int]] = None, i_max: int = 4,
                     representatives_up_to: Optional[int] = None, workers: int = 1) -> CohomologyReport:
    """Per-slice cohomology dimensions for k in k_range and i = 0..i_max.

    Representatives are computed for slices with at most
    ``representatives_up_to`` basis elements (None disables them).  With
    ``workers > 1`` slices are computed in separate processes; the report
    is identical to the serial one.
    """
    if i_max < 0:
        raise ValueError("i_max must be non-negative")
    ks = tuple(sorted(set(k_range))) if k_range is not None else tuple(range(pi.n + 1))
    for k in ks:
        if not 0 <= k <= pi.n:
            raise ValueError(f"k = {k} outside 0..{pi.n}")
    _shift(pi)
    jobs = [(pi, k, i, representatives_up_to) for k in ks for i in range(i_max + 1)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_slice_job, jobs))
    else:
        results = [_slice_job(j) for j in jobs]
    report = CohomologyReport(pi.name or "structure", pi.coords, ks, i_max)
    for res in results:
        report.slices[(res.k, res.i)] = res
    return report


def euler_defect(pi: PoissonStructure, report: CohomologyReport) -> Dict[int, int]:
    """For each complete subcomplex in the report, alternating sum of H minus that of the chains.

    The subcomplex starting at slice (0, i0) is (k, i0 + k*(1 + delta)).
    Returns {i0: defect}; all defects are zero when ranks and nullities are consistent.
    """
    step = 1 + _shift(pi)
    out = {}
    for i0 in range(report.i_max + 1):
        chain = [(k, i0 + k * step) for k in range(pi.n + 1)]
        if not all(s in report.slices for s in chain):
            continue
        h = sum((-1) ** k * report.slices[s].dim for k, s in enumerate(chain))
        c = sum((-1) ** k * report.slices[s].domain_dim for k, s in enumerate(chain))
        out[i0] = h - c
    return out


# ------------------------------------------------------------------ free modules

def hilbert_function(generator_degrees: Sequence[int], d_max: int) -> List[int]:
    """Dimensions in degrees 0..d_max of a polynomial ring with the given generator degrees."""
    h = [0] * (d_max + 1)
    h[0] = 1
    for g in generator_degrees:
        if g <= 0:
            raise ValueError("generator degrees must be positive")
        for d in range(g, d_max + 1):
            h[d] += h[d - g]
    return h


@dataclass(frozen=True)
class FreeModuleFit:
    casimir_degrees: Tuple[int, ...]
    rank: int
    generator_degrees: Tuple[int, ...]
    exact: bool
    residual: Tuple[int, ...]
    degree_range: Tuple[int, int]
    range_sufficient: bool
    note: str = "finite-range fit: Hilbert coefficients agree only on the computed degrees"

    def generator_series(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for g in self.generator_degrees:
            out[g] = out.get(g, 0) + 1
        return out


def fit_free_module(dims: Sequence[Tuple[int, int]], casimir_degrees: Sequence[int]) -> FreeModuleFit:
    """Greedy fit of observed dims by a free module over R[Casimirs].

    ``dims`` lists (degree, dimension) for a contiguous degree range
    starting at 0.  At the smallest degree with positive residual the
    residual count of generators is added and their shifted Hilbert
    functions subtracted.  A negative residual means no free module fits.
    """
    table = dict(dims)
    if not table:
        raise ValueError("no dimensions given")
    d_max = max(table)
    if sorted(table) != list(range(d_max + 1)):
        raise ValueError("dims must cover degrees 0..d_max without gaps")
    cas = tuple(casimir_degrees)
    h = hilbert_function(cas, d_max)
    residual = [table[d] for d in range(d_max + 1)]
    gens: List[int] = []
    failed = False
    for d in range(d_max + 1):
        if residual[d] < 0:
            failed = True
            break
        c = residual[d]
        if c:
            gens.extend([d] * c)
            for e in range(d, d_max + 1):
                residual[e] -= c * h[e - d]
    exact = not failed and not any(residual)
    need = 2 * max(cas, default=0) + max(gens, default=0)
    return FreeModuleFit(cas, len(gens), tuple(gens), exact, tuple(residual), (0, d_max),
                         d_max >= need)
