"""Multivector fields with polynomial coefficients.

A k-vector is stored as a map from sorted index tuples ``I`` to coefficient
polynomials, meaning ``sum_I c_I d_{I[0]} ^ ... ^ d_{I[k-1]}``.  Degree-0
multivectors are functions and use the empty tuple as their only key.

Bracket convention: multivectors are treated as superfunctions in odd
variables xi_i = d_i and

    [P, Q] = sum_i (P <-d/dxi_i) ^ (d/dx_i Q) - (d/dx_i P) ^ (d/dxi_i-> Q)

with right and left odd derivatives.  This gives [X, f] = X(f) for a vector
field X, [pi, f] = pi^#(df) with pi^#(dx_a) = sum_b pi^{ba} d_b, and reproduces
the displayed coboundary formulas of the catalog models.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Dict, Iterable, Iterator, Mapping, Optional, Sequence, Tuple

from .algebra import (
    Polynomial,
    Scalar,
    Terms,
    _add_into,
    _canon,
    _mul_into,
    _partial_terms,
    check_weights,
    scalar,
    weighted_degree,
)

MultiIndex = Tuple[int, ...]


def sort_index(indices: Iterable[int]) -> Tuple[int, MultiIndex]:
    """Sort an index list, returning (sign of the sorting permutation, sorted tuple).

    The sign is 0 when an index repeats (the wedge vanishes).
    """
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return 0, tuple(sorted(idx))
    inversions = sum(1 for a in range(len(idx)) for b in range(a + 1, len(idx)) if idx[a] > idx[b])
    return (-1 if inversions % 2 else 1), tuple(sorted(idx))


@lru_cache(maxsize=None)
def _merge(I: MultiIndex, J: MultiIndex) -> Tuple[int, MultiIndex]:
    if set(I) & set(J):
        return 0, ()
    inversions = sum(1 for i in I for j in J if i > j)
    return (-1 if inversions % 2 else 1), tuple(sorted(I + J))


def _drop(I: MultiIndex, r: int) -> MultiIndex:
    return I[:r] + I[r + 1:]


class Multivector:
    """Immutable alternating k-vector field with polynomial coefficients."""

    __slots__ = ("degree", "nvars", "_terms", "_hash")

    def __init__(self, degree: int, terms: Optional[Mapping] = None, nvars: Optional[int] = None):
        if degree < 0:
            raise ValueError("multivector degree must be non-negative")
        acc: Dict[MultiIndex, Terms] = {}
        for key, coeff in (terms or {}).items():
            key = tuple(key)
            if len(key) != degree:
                raise ValueError(f"index {key} does not have {degree} entries")
            if isinstance(coeff, Polynomial):
                if nvars is None:
                    nvars = coeff.nvars
                elif coeff.nvars != nvars:
                    raise ValueError("coefficient coordinate count mismatch")
                raw = coeff.terms
            else:
                if nvars is None:
                    raise ValueError("nvars is required for scalar coefficients")
                c = scalar(coeff)
                raw = {(0,) * nvars: c} if c else {}
            sign, sk = sort_index(key)
            if sign == 0:
                continue
            _add_into(acc.setdefault(sk, {}), raw, sign)
        if nvars is None:
            raise ValueError("nvars is required")
        for key in acc:
            if any(not 0 <= j < nvars for j in key):
                raise IndexError(f"index {key} out of range for {nvars} coordinates")
        self.degree = degree
        self.nvars = nvars
        self._terms = {k: Polynomial._raw(v, nvars) for k, v in acc.items() if v}
        self._hash = None

    @classmethod
    def _raw(cls, degree: int, terms: Dict[MultiIndex, Terms], nvars: int) -> "Multivector":
        mv = cls.__new__(cls)
        mv.degree = degree
        mv.nvars = nvars
        mv._terms = {k: Polynomial._raw(v, nvars) for k, v in terms.items() if v}
        mv._hash = None
        return mv

    # construction helpers
    @classmethod
    def zero(cls, degree: int, nvars: int) -> "Multivector":
        return cls._raw(degree, {}, nvars)

    @classmethod
    def function(cls, f: Polynomial) -> "Multivector":
        return cls._raw(0, {(): dict(f.terms)}, f.nvars)

    @classmethod
    def basis(cls, indices: Sequence[int], nvars: int, coeff=1) -> "Multivector":
        if not isinstance(coeff, Polynomial):
            coeff = Polynomial.constant(coeff, nvars)
        return cls(len(indices), {tuple(indices): coeff}, nvars)

    @classmethod
    def vector(cls, components: Sequence) -> "Multivector":
        n = len(components)
        comps = {}
        for j, c in enumerate(components):
            comps[(j,)] = c if isinstance(c, Polynomial) else Polynomial.constant(c, n)
        return cls(1, comps, n)

    @classmethod
    def bivector_from_matrix(cls, matrix: Sequence[Sequence]) -> "Multivector":
        """Bivector sum_{a<b} M[a][b] d_a ^ d_b from an antisymmetric matrix."""
        n = len(matrix)
        terms = {}
        for a in range(n):
            for b in range(n):
                mab = matrix[a][b]
                mba = matrix[b][a]
                if a == b:
                    if mab != 0:
                        raise ValueError("diagonal of a bivector matrix must vanish")
                elif mab != -mba:
                    raise ValueError("bivector matrix must be antisymmetric")
            for b in range(a + 1, n):
                c = matrix[a][b]
                terms[(a, b)] = c if isinstance(c, Polynomial) else Polynomial.constant(c, n)
        return cls(2, terms, n)

    # access
    @property
    def terms(self) -> Mapping[MultiIndex, Polynomial]:
        return self._terms

    def items(self) -> Iterator[Tuple[MultiIndex, Polynomial]]:
        return iter(sorted(self._terms.items()))

    def coefficient(self, indices: Sequence[int]) -> Polynomial:
        sign, key = sort_index(indices)
        if len(key) != self.degree:
            raise ValueError(f"expected {self.degree} indices")
        if sign == 0 or key not in self._terms:
            return Polynomial.zero(self.nvars)
        c = self._terms[key]
        return c if sign > 0 else -c

    def as_function(self) -> Polynomial:
        if self.degree != 0:
            raise ValueError("not a degree-0 multivector")
        return self.coefficient(())

    def components(self) -> Tuple[Polynomial, ...]:
        """Coefficients of a vector field, one per coordinate."""
        if self.degree != 1:
            raise ValueError("components() needs a vector field")
        return tuple(self.coefficient((j,)) for j in range(self.nvars))

    def to_matrix(self) -> list:
        """Antisymmetric matrix M with M[a][b] the coefficient of d_a ^ d_b."""
        if self.degree != 2:
            raise ValueError("to_matrix() needs a bivector")
        n = self.nvars
        zero = Polynomial.zero(n)
        m = [[zero] * n for _ in range(n)]
        for (a, b), c in self._terms.items():
            m[a][b] = c
            m[b][a] = -c
        return m

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    # arithmetic
    def _check(self, other: "Multivector") -> None:
        if other.nvars != self.nvars:
            raise ValueError(f"coordinate-count mismatch: {self.nvars} vs {other.nvars}")
        if other.degree != self.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __add__(self, other) -> "Multivector":
        if not isinstance(other, Multivector):
            return NotImplemented
        self._check(other)
        acc = {k: dict(v.terms) for k, v in self._terms.items()}
        for k, v in other._terms.items():
            _add_into(acc.setdefault(k, {}), v.terms)
        return Multivector._raw(self.degree, acc, self.nvars)

    def __neg__(self) -> "Multivector":
        return Multivector._raw(
            self.degree, {k: {m: -c for m, c in v.terms.items()} for k, v in self._terms.items()},
            self.nvars)

    def __sub__(self, other) -> "Multivector":
        if not isinstance(other, Multivector):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other) -> "Multivector":
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise ValueError("coordinate-count mismatch")
            acc = {}
            for k, v in self._terms.items():
                t: Terms = {}
                _mul_into(t, v.terms, other.terms)
                acc[k] = t
            return Multivector._raw(self.degree, acc, self.nvars)
        try:
            c = scalar(other)
        except TypeError:
            return NotImplemented
        return Multivector._raw(
            self.degree, {k: {m: x * c for m, x in v.terms.items()} for k, v in self._terms.items()},
            self.nvars)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Multivector":
        return self * (1 / Fraction(scalar(other)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Multivector):
            return NotImplemented
        return (self.degree == other.degree and self.nvars == other.nvars
                and self._terms == other._terms)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.degree, self.nvars, frozenset(self._terms.items())))
        return self._hash

    # grading
    def term_weights(self, weights: Optional[Sequence[int]] = None) -> set:
        """Set of values wdeg(monomial) - sum of index weights over all terms."""
        w = check_weights(weights, self.nvars)
        out = set()
        for k, c in self._terms.items():
            shift = sum(w[j] for j in k)
            for m in c.terms:
                out.add(weighted_degree(m, w) - shift)
        return out

    def coefficient_degrees(self, weights: Optional[Sequence[int]] = None) -> set:
        return set().union(*(c.degrees(weights) for c in self._terms.values())) if self._terms else set()

    def homogeneous_part(self, i: int, weights: Optional[Sequence[int]] = None) -> "Multivector":
        """Part whose coefficients have (weighted) polynomial degree i."""
        return Multivector(
            self.degree, {k: c.homogeneous_part(i, weights) for k, c in self._terms.items()}, self.nvars)

    def map_coefficients(self, fn) -> "Multivector":
        return Multivector(self.degree, {k: fn(c) for k, c in self._terms.items()}, self.nvars)

    def partial(self, i: int) -> "Multivector":
        return self.map_coefficients(lambda c: c.partial(i))

    def evaluate(self, point: Sequence) -> Dict[MultiIndex, Scalar]:
        out = {}
        for k, c in self.items():
            v = c.evaluate(point)
            if v:
                out[k] = v
        return out

    def to_string(self, names: Optional[Sequence[str]] = None) -> str:
        if names is None:
            names = [f"x{i}" for i in range(self.nvars)]
        if not self._terms:
            return "0"
        parts = []
        for k, c in self.items():
            basis = "^".join(f"d{names[j]}" for j in k)
            cs = c.to_string(names)
            if not basis:
                parts.append(cs)
            elif cs == "1":
                parts.append(basis)
            elif cs == "-1":
                parts.append("-" + basis)
            elif len(c) == 1 and not cs.startswith("-"):
                parts.append(f"{cs}*{basis}")
            elif len(c) == 1:
                parts.append(f"-{cs[1:]}*{basis}")
            else:
                parts.append(f"({cs})*{basis}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __str__(self) -> str:
        return self.to_string()

    def __repr__(self) -> str:
        return f"Multivector(degree={self.degree}, {self.to_string()!r})"


def euler_field(nvars: int, weights: Optional[Sequence[int]] = None) -> Multivector:
    """Weighted Euler field sum_i w_i x_i d_i."""
    w = check_weights(weights, nvars)
    return Multivector.vector([Polynomial.variable(i, nvars) * w[i] for i in range(nvars)])


def wedge(A: Multivector, B: Multivector) -> Multivector:
    if A.nvars != B.nvars:
        raise ValueError(f"coordinate-count mismatch: {A.nvars} vs {B.nvars}")
    deg = A.degree + B.degree
    acc: Dict[MultiIndex, Terms] = {}
    if deg > A.nvars:
        return Multivector.zero(deg, A.nvars)
    for I, a in A.terms.items():
        for J, b in B.terms.items():
            sign, K = _merge(I, J)
            if sign:
                _mul_into(acc.setdefault(K, {}), a.terms, b.terms, sign)
    return Multivector._raw(deg, acc, A.nvars)


def wedge_all(factors: Sequence[Multivector]) -> Multivector:
    out = factors[0]
    for f in factors[1:]:
        out = wedge(out, f)
    return out


def schouten(A: Multivector, B: Multivector) -> Multivector:
    """Schouten-Nijenhuis bracket [A, B] (see the module docstring for signs)."""
    if A.nvars != B.nvars:
        raise ValueError(f"coordinate-count mismatch: {A.nvars} vs {B.nvars}")
    p, q = A.degree, B.degree
    deg = p + q - 1
    if deg < 0:
        return Multivector.zero(0, A.nvars)
    acc: Dict[MultiIndex, Terms] = {}
    b_partials: Dict[Tuple[MultiIndex, int], Terms] = {}
    for I, a in A.terms.items():
        a_partials: Dict[int, Terms] = {}
        for J, b in B.terms.items():
            # (A <- d/dxi_i) ^ d_i B
            for r, i in enumerate(I):
                key = (J, i)
                if key not in b_partials:
                    b_partials[key] = _partial_terms(b.terms, i)
                db = b_partials[key]
                if not db:
                    continue
                sign, K = _merge(_drop(I, r), J)
                if sign:
                    if (p - 1 - r) % 2:
                        sign = -sign
                    _mul_into(acc.setdefault(K, {}), a.terms, db, sign)
            # - d_j A ^ (d/dxi_j -> B)
            for r, j in enumerate(J):
                if j not in a_partials:
                    a_partials[j] = _partial_terms(a.terms, j)
                da = a_partials[j]
                if not da:
                    continue
                sign, K = _merge(I, _drop(J, r))
                if sign:
                    if r % 2 == 0:
                        sign = -sign
                    _mul_into(acc.setdefault(K, {}), da, b.terms, sign)
    return Multivector._raw(deg, acc, A.nvars)


@dataclass(frozen=True)
class OneForm:
    """Polynomial one-form sum_i coeffs[i] dx_i."""

    coeffs: Tuple[Polynomial, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if not self.coeffs:
            raise ValueError("a one-form needs at least one coordinate")
        n = self.coeffs[0].nvars
        if len(self.coeffs) != n or any(c.nvars != n for c in self.coeffs):
            raise ValueError("one-form length must equal the ambient coordinate count")

    @property
    def nvars(self) -> int:
        return len(self.coeffs)

    @classmethod
    def differential(cls, f: Polynomial) -> "OneForm":
        return cls(tuple(f.partial(i) for i in range(f.nvars)))

    @classmethod
    def coordinate(cls, i: int, nvars: int) -> "OneForm":
        return cls(tuple(Polynomial.constant(1 if j == i else 0, nvars) for j in range(nvars)))


@dataclass(frozen=True)
class VolumeForm:
    """Constant positive multiple of dx_0 ^ ... ^ dx_{n-1}."""

    scale: Fraction = Fraction(1)

    def __post_init__(self):
        s = Fraction(scalar(self.scale))
        if s <= 0:
            raise ValueError("volume scale must be positive")
        object.__setattr__(self, "scale", s)


def divergence(Y: Multivector, omega: Optional[VolumeForm] = None) -> Polynomial:
    """Divergence of a vector field for a constant volume form."""
    if Y.degree != 1:
        raise ValueError(f"divergence needs a vector field, got degree {Y.degree}")
    acc: Terms = {}
    for (i,), c in Y.terms.items():
        _add_into(acc, _partial_terms(c.terms, i))
    return Polynomial._raw(acc, Y.nvars)


@dataclass(frozen=True)
class Offset:
    """Translation component: rational constant plus formal symbolic shifts."""

    const: Fraction = Fraction(0)
    symbols: Tuple[Tuple[str, Fraction], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "const", Fraction(scalar(self.const)))
        merged: Dict[str, Fraction] = {}
        for name, c in self.symbols:
            merged[name] = merged.get(name, Fraction(0)) + Fraction(scalar(c))
        object.__setattr__(
            self, "symbols", tuple(sorted((k, v) for k, v in merged.items() if v)))

    @classmethod
    def symbol(cls, name: str, coeff=1) -> "Offset":
        return cls(Fraction(0), ((name, Fraction(scalar(coeff))),))

    @classmethod
    def of(cls, value) -> "Offset":
        return value if isinstance(value, Offset) else cls(Fraction(scalar(value)))

    def is_numeric(self) -> bool:
        return not self.symbols

    def __add__(self, other) -> "Offset":
        other = Offset.of(other)
        return Offset(self.const + other.const, self.symbols + other.symbols)

    __radd__ = __add__

    def __mul__(self, c) -> "Offset":
        c = Fraction(scalar(c))
        return Offset(self.const * c, tuple((k, v * c) for k, v in self.symbols))

    __rmul__ = __mul__

    def __neg__(self) -> "Offset":
        return self * -1

    def __str__(self) -> str:
        parts = [f"{v}*{k}" if v != 1 else k for k, v in self.symbols]
        if self.const or not parts:
            parts.append(str(self.const))
        return " + ".join(parts)


def _mat_det(m: Sequence[Sequence[Fraction]]) -> Fraction:
    a = [[Fraction(x) for x in row] for row in m]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return det


def _mat_inv(m: Sequence[Sequence[Fraction]]) -> Tuple[Tuple[Fraction, ...], ...]:
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            raise ValueError("singular linear part")
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return tuple(tuple(row[n:]) for row in a)


@dataclass(frozen=True)
class AffinePointMap:
    """Point map x -> L x + t with invertible rational L."""

    linear: Tuple[Tuple[Fraction, ...], ...]
    translation: Tuple[Offset, ...] = ()

    def __post_init__(self):
        lin = tuple(tuple(Fraction(scalar(x)) for x in row) for row in self.linear)
        n = len(lin)
        if any(len(row) != n for row in lin):
            raise ValueError("linear part must be square")
        trans = tuple(Offset.of(t) for t in self.translation) or tuple(Offset() for _ in range(n))
        if len(trans) != n:
            raise ValueError("translation length must match the dimension")
        if _mat_det(lin) == 0:
            raise ValueError("singular linear part")
        object.__setattr__(self, "linear", lin)
        object.__setattr__(self, "translation", trans)

    @property
    def n(self) -> int:
        return len(self.linear)

    @classmethod
    def identity(cls, n: int) -> "AffinePointMap":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def scaling(cls, n: int, factor) -> "AffinePointMap":
        return cls(tuple(tuple(factor if i == j else 0 for j in range(n)) for i in range(n)))

    def compose(self, other: "AffinePointMap") -> "AffinePointMap":
        """The map self o other."""
        n = self.n
        lin = tuple(tuple(sum(self.linear[i][k] * other.linear[k][j] for k in range(n))
                          for j in range(n)) for i in range(n))
        trans = tuple(sum((other.translation[k] * self.linear[i][k] for k in range(n)), Offset())
                      + self.translation[i] for i in range(n))
        return AffinePointMap(lin, trans)

    def inverse(self) -> "AffinePointMap":
        inv = _mat_inv(self.linear)
        n = self.n
        trans = tuple(-sum((self.translation[k] * inv[i][k] for k in range(n)), Offset())
                      for i in range(n))
        return AffinePointMap(inv, trans)

    def is_pure_translation(self) -> bool:
        return all(self.linear[i][j] == (i == j) for i in range(self.n) for j in range(self.n))


def pushforward(phi: AffinePointMap, A: Multivector) -> Multivector:
    """Push A forward along phi: coefficients composed with phi^-1, basis by the linear part."""
    n = A.nvars
    if phi.n != n:
        raise ValueError(f"map dimension {phi.n} does not match {n} coordinates")
    inv = phi.inverse()
    used = set()
    for c in A.terms.values():
        for m in c.terms:
            used.update(j for j, e in enumerate(m) if e)
    images = []
    for j in range(n):
        shift = inv.translation[j]
        if not shift.is_numeric() and j in used:
            raise ValueError(
                f"coefficients depend on coordinate {j}, which is shifted by the formal amount {shift}")
        terms = {tuple(int(k == l) for l in range(n)): inv.linear[j][k] for k in range(n)}
        terms[(0,) * n] = shift.const
        images.append(Polynomial(terms, n))
    vectors = [Multivector.vector([phi.linear[j][i] for j in range(n)]) for i in range(n)]
    basis_cache: Dict[MultiIndex, Multivector] = {}
    out = Multivector.zero(A.degree, n)
    for I, c in A.items():
        if I not in basis_cache:
            basis_cache[I] = (wedge_all([vectors[i] for i in I]) if I
                              else Multivector.function(Polynomial.constant(1, n)))
        out = out + basis_cache[I] * c.substitute(images)
    return out


def all_indices(n: int, k: int) -> list:
    return list(combinations(range(n), k))
