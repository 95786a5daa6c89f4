"""Poisson structures and the pointwise / structural queries on them."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations, permutations
from math import factorial
from typing import Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from .algebra import Polynomial, Scalar, WeightVector, check_weights, monomial_basis, poly_divexact, scalar
from .multivec import (
    Multivector,
    OneForm,
    VolumeForm,
    euler_field,
    schouten,
    sort_index,
    wedge,
)


class NotPoissonError(ValueError):
    """Raised when a bivector fails the Jacobi identity."""

    def __init__(self, witness: Multivector):
        super().__init__(f"[pi, pi] = {witness} is not zero")
        self.witness = witness


@dataclass(frozen=True)
class PoissonStructure:
    coords: Tuple[str, ...]
    bivector: Multivector
    weights: WeightVector = ()
    volume: VolumeForm = field(default_factory=VolumeForm)
    validated: bool = False
    name: Optional[str] = None
    # free-form annotations (e.g. Casimir weights recorded by the catalog)
    extras: Tuple[Tuple[str, object], ...] = ()

    def __post_init__(self):
        coords = tuple(self.coords)
        object.__setattr__(self, "coords", coords)
        if len(set(coords)) != len(coords):
            raise ValueError(f"repeated coordinate name in {coords}")
        if self.bivector.degree != 2:
            raise ValueError(f"bivector has degree {self.bivector.degree}, expected 2")
        if self.bivector.nvars != len(coords):
            raise ValueError(f"bivector lives in {self.bivector.nvars} coordinates, {len(coords)} declared")
        object.__setattr__(self, "weights", check_weights(self.weights or None, len(coords)))

    @property
    def n(self) -> int:
        return len(self.coords)

    def matrix(self) -> List[List[Polynomial]]:
        return self.bivector.to_matrix()

    def extra(self, key: str, default=None):
        return dict(self.extras).get(key, default)

    def with_bivector(self, bivector: Multivector, **kw) -> "PoissonStructure":
        return replace(self, bivector=bivector, validated=False, **kw)

    def homogeneity_shift(self) -> Optional[int]:
        """delta with wdeg(pi^{ab}) - w_a - w_b = delta for every term, or None."""
        ws = self.bivector.term_weights(self.weights)
        if len(ws) == 1:
            return next(iter(ws))
        if not ws:
            return 0
        return None

    def is_weight_homogeneous(self) -> bool:
        return self.homogeneity_shift() is not None


class JacobiResult(NamedTuple):
    ok: bool
    witness: Multivector


def jacobi_check(pi: PoissonStructure) -> JacobiResult:
    w = schouten(pi.bivector, pi.bivector)
    return JacobiResult(w.is_zero(), w)


def validate(pi: PoissonStructure) -> PoissonStructure:
    """Return a validated copy of pi, or raise NotPoissonError with the witness."""
    if pi.validated:
        return pi
    res = jacobi_check(pi)
    if not res.ok:
        raise NotPoissonError(res.witness)
    return replace(pi, validated=True)


def anchor(pi: PoissonStructure, alpha: OneForm) -> Multivector:
    """pi^#(alpha) = sum_{a,b} alpha_a pi^{ba} d_b."""
    if alpha.nvars != pi.n:
        raise ValueError("one-form dimension mismatch")
    M = pi.matrix()
    comps = []
    for b in range(pi.n):
        acc = Polynomial.zero(pi.n)
        for a in range(pi.n):
            if alpha.coeffs[a] and M[b][a]:
                acc = acc + alpha.coeffs[a] * M[b][a]
        comps.append(acc)
    return Multivector.vector(comps)


def hamiltonian(pi: PoissonStructure, f: Polynomial) -> Multivector:
    return anchor(pi, OneForm.differential(f))


def casimir_basis(pi: PoissonStructure, i: int) -> List[Polynomial]:
    """Basis of the Casimirs among (weighted) homogeneous degree-i polynomials."""
    from .complexes import coordinate_matrix
    from .linalg import nullspace

    if i < 0:
        raise ValueError("degree must be non-negative")
    monos = monomial_basis(pi.n, i, pi.weights)
    if not monos:
        return []
    images = [hamiltonian(pi, Polynomial.monomial(m)) for m in monos]
    A, _ = coordinate_matrix(images)
    out = []
    for v in nullspace(A):
        p = Polynomial({m: c for m, c in zip(monos, v) if c}, pi.n)
        out.append(_normalize(p))
    return out


def _normalize(p: Polynomial) -> Polynomial:
    """Primitive integral multiple with positive leading coefficient."""
    if p.is_zero():
        return p
    c = p.content()
    if p.leading_term()[1] < 0:
        c = -c
    return p / c


def modular_field(pi: PoissonStructure, omega: Optional[VolumeForm] = None) -> Multivector:
    """Modular vector field for a constant volume form.

    Component j is sum_b d_b pi^{jb}, i.e. minus the divergence of pi^#(dx_j);
    the global sign is the one giving 2 d_0 on the near-positive model.
    A constant rescaling of the volume form does not change the result.
    """
    M = pi.matrix()
    comps = []
    for j in range(pi.n):
        acc = Polynomial.zero(pi.n)
        for b in range(pi.n):
            if M[j][b]:
                acc = acc + M[j][b].partial(b)
        comps.append(acc)
    return Multivector.vector(comps)


def wedge_power(pi: PoissonStructure, m: int) -> Multivector:
    if m < 1:
        raise ValueError("wedge power needs m >= 1")
    if 2 * m > pi.n:
        raise ValueError(f"2m = {2 * m} exceeds the dimension {pi.n}")
    out = pi.bivector
    for _ in range(m - 1):
        out = wedge(out, pi.bivector)
    return out


def pfaffian(pi: PoissonStructure) -> Polynomial:
    """Pfaffian of the coefficient matrix (top wedge power divided by (n/2)!)."""
    if pi.n % 2:
        return Polynomial.zero(pi.n)
    if pi.n == 0:
        return Polynomial.constant(1, 0)
    top = wedge_power(pi, pi.n // 2)
    return top.coefficient(tuple(range(pi.n))) / factorial(pi.n // 2)


def _rank_rational(rows: List[List[Fraction]]) -> int:
    a = [list(r) for r in rows]
    rank = 0
    ncols = len(a[0]) if a else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(a)) if a[r][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for r in range(rank + 1, len(a)):
            if a[r][c]:
                f = Fraction(a[r][c]) / a[rank][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[rank])]
        rank += 1
    return rank


def _point(pi: PoissonStructure, p: Sequence) -> Tuple[Scalar, ...]:
    if len(p) != pi.n:
        raise ValueError(f"point has {len(p)} coordinates, expected {pi.n}")
    return tuple(scalar(x) for x in p)


def rank_at(pi: PoissonStructure, p: Sequence) -> int:
    pt = _point(pi, p)
    M = pi.matrix()
    rows = [[Fraction(M[a][b].evaluate(pt)) for b in range(pi.n)] for a in range(pi.n)]
    return _rank_rational(rows)


@dataclass(frozen=True)
class IntrinsicGradient:
    point: Tuple[Scalar, ...]
    pairs: Tuple[Tuple[int, int], ...]  # row labels: coefficient of d_a ^ d_b
    matrix: Tuple[Tuple[Scalar, ...], ...]  # rows: pairs, columns: coordinates
    rank: int


def intrinsic_gradient(pi: PoissonStructure, p: Sequence) -> IntrinsicGradient:
    pt = _point(pi, p)
    if pi.bivector.evaluate(pt):
        raise ValueError(f"point {pt} is not a zero of the bivector")
    pairs = tuple(combinations(range(pi.n), 2))
    rows = []
    for I in pairs:
        c = pi.bivector.coefficient(I)
        rows.append(tuple(c.partial(j).evaluate(pt) for j in range(pi.n)))
    rank = _rank_rational([[Fraction(x) for x in r] for r in rows]) if rows else 0
    return IntrinsicGradient(pt, pairs, tuple(rows), rank)


@dataclass(frozen=True)
class RationalOneForm:
    """One-form (sum_i numerators[i] dx_i) / denominator."""

    numerators: Tuple[Polynomial, ...]
    denominator: Polynomial

    def __post_init__(self):
        if self.denominator.is_zero():
            raise ValueError("denominator must be nonzero")

    def numerator_form(self) -> OneForm:
        return OneForm(self.numerators)

    def to_string(self, names: Optional[Sequence[str]] = None) -> str:
        n = len(self.numerators)
        names = names or [f"x{i}" for i in range(n)]
        den = self.denominator.to_string(names)
        parts = [f"({c.to_string(names)})/({den}) d{names[i]}"
                 for i, c in enumerate(self.numerators) if c]
        return " + ".join(parts) or "0"


def _det(m: List[List[Polynomial]], n: int) -> Polynomial:
    # Laplace expansion along the first row with memoised minors
    cache: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], Polynomial] = {}

    def minor(rows: Tuple[int, ...], cols: Tuple[int, ...]) -> Polynomial:
        if not rows:
            return Polynomial.constant(1, n)
        key = (rows, cols)
        if key in cache:
            return cache[key]
        r0 = rows[0]
        acc = Polynomial.zero(n)
        for idx, c in enumerate(cols):
            e = m[r0][c]
            if e:
                sub = minor(rows[1:], cols[:idx] + cols[idx + 1:])
                if sub:
                    acc = acc + e * sub if idx % 2 == 0 else acc - e * sub
        cache[key] = acc
        return acc

    size = len(m)
    return minor(tuple(range(size)), tuple(range(size)))


def anchor_invert(pi: PoissonStructure, Y: Multivector) -> RationalOneForm:
    """Solve anchor(pi, alpha) = Y over the field of rational functions.

    Uses alpha = adj(M) Y / det(M), where M[b][a] = pi^{ba}; since
    det(M) = Pf^2 and every cofactor is divisible by Pf, the common factor
    is cancelled exactly, leaving the Pfaffian as denominator.
    """
    if Y.degree != 1 or Y.nvars != pi.n:
        raise ValueError("anchor_invert needs a vector field in the same coordinates")
    n = pi.n
    M = pi.matrix()
    det = _det(M, n)
    if det.is_zero():
        raise ValueError("the bivector is generically degenerate; the anchor has no inverse")
    y = Y.components()
    nums = []
    for a in range(n):
        # alpha_a = sum_b adj[a][b] y_b with adj[a][b] = (-1)^{a+b} minor(M without row b, col a)
        acc = Polynomial.zero(n)
        for b in range(n):
            if not y[b]:
                continue
            sub = [[M[r][c] for c in range(n) if c != a] for r in range(n) if r != b]
            cof = _det(sub, n)
            if cof:
                acc = acc + cof * y[b] if (a + b) % 2 == 0 else acc - cof * y[b]
        nums.append(acc)
    den = det
    pf = pfaffian(pi)
    if pf:
        q = [poly_divexact(c, pf) for c in nums]
        if all(x is not None for x in q):
            den = poly_divexact(det, pf)
            nums = q
    # content removal and sign normalization of the denominator
    c = den.content()
    if den.leading_term()[1] < 0:
        c = -c
    den = den / c
    nums = [x / c for x in nums]
    return RationalOneForm(tuple(nums), den)


def check_anchor_inverse(pi: PoissonStructure, form: RationalOneForm, Y: Multivector) -> bool:
    """Exact check of anchor(pi, form) == Y, cleared of the denominator."""
    return anchor(pi, form.numerator_form()) == Y * form.denominator


def jacobian_bivector(f: Polynomial, g: Polynomial, omega: Optional[VolumeForm] = None,
                      coords: Optional[Sequence[str]] = None, name: Optional[str] = None
                      ) -> PoissonStructure:
    """Four-dimensional Jacobian Poisson structure with Casimirs f and g.

    {x_i, x_j} is defined by dx_i ^ dx_j ^ df ^ dg = {x_i, x_j} omega.
    """
    if f.nvars != 4 or g.nvars != 4:
        raise ValueError("the Jacobian construction is implemented for 4 coordinates only")
    omega = omega or VolumeForm()
    df = [f.partial(k) for k in range(4)]
    dg = [g.partial(k) for k in range(4)]
    terms = {}
    for i, j in combinations(range(4), 2):
        k, l = [c for c in range(4) if c not in (i, j)]
        sign, _ = sort_index((i, j, k, l))
        coeff = (df[k] * dg[l] - df[l] * dg[k]) * sign / omega.scale
        terms[(i, j)] = coeff
    coords = tuple(coords) if coords else ("x1", "x2", "x3", "x4")
    return PoissonStructure(coords, Multivector(2, terms, 4), name=name or "jacobian")


def exactness_witness(pi: PoissonStructure, max_degree: int = 2) -> Optional[Multivector]:
    """A vector field Y with [pi, Y] = pi, or None if none of coefficient degree <= max_degree.

    For weight-homogeneous pi with shift delta != 0 the scaled weighted Euler
    field -E_w/delta is tried first (it always works for such pi); otherwise
    the linear system is solved with coefficients of degree 0..D, D growing.
    """
    from .complexes import coordinate_matrix
    from .linalg import solve

    delta = pi.homogeneity_shift()
    if pi.bivector.is_zero():
        return Multivector.zero(1, pi.n)
    if delta:
        cand = euler_field(pi.n, pi.weights) * Fraction(-1, delta)
        if schouten(pi.bivector, cand) == pi.bivector:
            return cand
    domain: List[Multivector] = []
    for D in range(max_degree + 1):
        for j in range(pi.n):
            for m in monomial_basis(pi.n, D):
                domain.append(Multivector.basis((j,), pi.n, Polynomial.monomial(m)))
        images = [schouten(pi.bivector, y) for y in domain]
        A, rows = coordinate_matrix(images, extra=[pi.bivector])
        target = [0] * A.nrows
        for I, c in pi.bivector.terms.items():
            for mono, v in c.terms.items():
                target[rows[(I, mono)]] = v
        x = solve(A, target)
        if x is not None:
            out = Multivector.zero(1, pi.n)
            for coeff, y in zip(x, domain):
                if coeff:
                    out = out + y * coeff
            return out
    return None


@dataclass(frozen=True)
class NearPositivityReport:
    points: Tuple[Tuple[Scalar, ...], ...]
    values: Tuple[Scalar, ...]
    signs: Tuple[int, ...]
    all_nonnegative: bool
    counterexample: Optional[Tuple[Scalar, ...]]
    note: str = ("values are the raw coefficient of pi^pi on d0^d1^d2^d3; the raw wedge "
                 "carries a factor 2 relative to the Pfaffian, which does not affect the sign")


def near_positivity_sample(pi: PoissonStructure, points: Sequence[Sequence]) -> NearPositivityReport:
    if pi.n != 4:
        raise ValueError("near-positivity sampling is defined for 4 coordinates")
    coeff = wedge_power(pi, 2).coefficient((0, 1, 2, 3))
    pts, vals, signs = [], [], []
    counter = None
    for p in points:
        pt = _point(pi, p)
        v = coeff.evaluate(pt)
        pts.append(pt)
        vals.append(v)
        s = (v > 0) - (v < 0)
        signs.append(s)
        if s < 0 and counter is None:
            counter = pt
    return NearPositivityReport(tuple(pts), tuple(vals), tuple(signs), counter is None, counter)
