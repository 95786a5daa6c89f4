"""Exact multivariate polynomials over the rationals.

Coefficients are kept as ``int`` whenever the denominator is one and as
``fractions.Fraction`` otherwise; both compare and hash canonically, so the
term map of a polynomial is a canonical representation.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from math import gcd
from numbers import Rational
from typing import Dict, Iterable, Iterator, Mapping, Optional, Sequence, Tuple, Union

Scalar = Union[int, Fraction]
Monomial = Tuple[int, ...]
WeightVector = Tuple[int, ...]
Terms = Dict[Monomial, Scalar]


def scalar(value) -> Scalar:
    """Coerce ``value`` to a canonical exact scalar (int if integral)."""
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, Rational):
        return scalar(Fraction(value.numerator, value.denominator))
    if isinstance(value, str):
        return scalar(Fraction(value))
    raise TypeError(f"not an exact scalar: {value!r}")


def _canon(value: Scalar) -> Scalar:
    if type(value) is Fraction and value.denominator == 1:
        return value.numerator
    return value


def unit_weights(n: int) -> WeightVector:
    return (1,) * n


def check_weights(weights: Optional[Sequence[int]], n: int) -> WeightVector:
    if weights is None:
        return unit_weights(n)
    w = tuple(int(x) for x in weights)
    if len(w) != n:
        raise ValueError(f"weight vector has length {len(w)}, expected {n}")
    if any(x <= 0 for x in w):
        raise ValueError("weights must be positive integers")
    return w


def weighted_degree(exps: Monomial, weights: Optional[Sequence[int]] = None) -> int:
    if weights is None:
        return sum(exps)
    return sum(w * e for w, e in zip(weights, exps))


# raw term-dict helpers; shared by the multivector code for speed

def _add_into(acc: Terms, terms: Mapping[Monomial, Scalar], scale: Scalar = 1) -> None:
    for m, c in terms.items():
        v = acc.get(m, 0) + scale * c
        if v:
            acc[m] = v
        else:
            acc.pop(m, None)


def _mul_into(acc: Terms, a: Mapping[Monomial, Scalar], b: Mapping[Monomial, Scalar],
              scale: Scalar = 1) -> None:
    for ma, ca in a.items():
        cab = scale * ca
        for mb, cb in b.items():
            m = tuple(x + y for x, y in zip(ma, mb))
            v = acc.get(m, 0) + cab * cb
            if v:
                acc[m] = v
            else:
                acc.pop(m, None)


def _partial_terms(terms: Mapping[Monomial, Scalar], i: int) -> Terms:
    out: Terms = {}
    for m, c in terms.items():
        e = m[i]
        if e:
            out[m[:i] + (e - 1,) + m[i + 1:]] = c * e
    return out


class Polynomial:
    """Immutable polynomial in ``nvars`` variables with exact coefficients."""

    __slots__ = ("_terms", "nvars", "_hash")

    def __init__(self, terms: Optional[Mapping[Monomial, object]] = None, nvars: Optional[int] = None):
        clean: Terms = {}
        if terms:
            for m, c in terms.items():
                m = tuple(int(e) for e in m)
                if any(e < 0 for e in m):
                    raise ValueError(f"negative exponent in {m}")
                c = scalar(c)
                if c:
                    clean[m] = clean.get(m, 0) + c
                    if not clean[m]:
                        del clean[m]
        if nvars is None:
            if not clean:
                raise ValueError("nvars is required for the zero polynomial")
            nvars = len(next(iter(clean)))
        for m in clean:
            if len(m) != nvars:
                raise ValueError(f"monomial {m} does not have {nvars} exponents")
        self._terms = {m: _canon(c) for m, c in clean.items()}
        self.nvars = nvars
        self._hash = None

    @classmethod
    def _raw(cls, terms: Terms, nvars: int) -> "Polynomial":
        # trusted constructor: terms already clean, nonzero and canonical-ish
        p = cls.__new__(cls)
        p._terms = {m: _canon(c) for m, c in terms.items() if c}
        p.nvars = nvars
        p._hash = None
        return p

    # construction helpers
    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls._raw({}, nvars)

    @classmethod
    def constant(cls, c, nvars: int) -> "Polynomial":
        return cls._raw({(0,) * nvars: scalar(c)}, nvars)

    @classmethod
    def variable(cls, i: int, nvars: int) -> "Polynomial":
        if not 0 <= i < nvars:
            raise IndexError(f"variable index {i} out of range for {nvars} variables")
        return cls._raw({tuple(1 if j == i else 0 for j in range(nvars)): 1}, nvars)

    @classmethod
    def monomial(cls, exps: Monomial, coeff=1) -> "Polynomial":
        return cls({tuple(exps): coeff}, len(exps))

    @property
    def terms(self) -> Mapping[Monomial, Scalar]:
        return self._terms

    def items(self) -> Iterator[Tuple[Monomial, Scalar]]:
        return iter(sorted(self._terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def coefficient(self, exps: Monomial) -> Scalar:
        return self._terms.get(tuple(exps), 0)

    def constant_term(self) -> Scalar:
        return self._terms.get((0,) * self.nvars, 0)

    def is_constant(self) -> bool:
        return all(not any(m) for m in self._terms)

    # arithmetic
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise ValueError(f"coordinate-count mismatch: {self.nvars} vs {other.nvars}")
            return other
        return Polynomial.constant(other, self.nvars)

    def __add__(self, other) -> "Polynomial":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        acc = dict(self._terms)
        _add_into(acc, other._terms)
        return Polynomial._raw(acc, self.nvars)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw({m: -c for m, c in self._terms.items()}, self.nvars)

    def __sub__(self, other) -> "Polynomial":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        acc = dict(self._terms)
        _add_into(acc, other._terms, -1)
        return Polynomial._raw(acc, self.nvars)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return poly_mul(self, other)
        try:
            c = scalar(other)
        except TypeError:
            return NotImplemented
        if not c:
            return Polynomial.zero(self.nvars)
        return Polynomial._raw({m: v * c for m, v in self._terms.items()}, self.nvars)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Polynomial":
        c = Fraction(scalar(other))
        if not c:
            raise ZeroDivisionError("division of a polynomial by zero")
        return self * (1 / c)

    def __pow__(self, k: int) -> "Polynomial":
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.constant(1, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self._terms == other._terms
        try:
            c = scalar(other)
        except TypeError:
            return NotImplemented
        return self._terms == ({(0,) * self.nvars: c} if c else {})

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    # calculus and grading
    def partial(self, i: int) -> "Polynomial":
        return poly_partial(self, i)

    def degree(self, weights: Optional[Sequence[int]] = None) -> int:
        """Largest weighted degree of a term; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(weighted_degree(m, weights) for m in self._terms)

    def degrees(self, weights: Optional[Sequence[int]] = None) -> set:
        return {weighted_degree(m, weights) for m in self._terms}

    def is_homogeneous(self, weights: Optional[Sequence[int]] = None) -> bool:
        return len(self.degrees(weights)) <= 1

    def homogeneous_part(self, d: int, weights: Optional[Sequence[int]] = None) -> "Polynomial":
        return Polynomial._raw(
            {m: c for m, c in self._terms.items() if weighted_degree(m, weights) == d}, self.nvars)

    def homogeneous_parts(self, weights: Optional[Sequence[int]] = None) -> Dict[int, "Polynomial"]:
        return {d: self.homogeneous_part(d, weights) for d in sorted(self.degrees(weights))}

    def evaluate(self, point: Sequence) -> Scalar:
        if len(point) != self.nvars:
            raise ValueError(f"point has {len(point)} coordinates, expected {self.nvars}")
        pt = [scalar(v) for v in point]
        total: Scalar = 0
        for m, c in self._terms.items():
            t = c
            for v, e in zip(pt, m):
                if e:
                    t = t * v ** e
            total += t
        return _canon(total)

    def substitute(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Compose: replace variable j by ``images[j]`` (all in a common ring)."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        if not images:
            return self
        n = images[0].nvars
        powers: Dict[Tuple[int, int], Polynomial] = {}

        def power(j: int, e: int) -> Polynomial:
            key = (j, e)
            if key not in powers:
                powers[key] = images[j] ** e
            return powers[key]

        acc: Terms = {}
        for m, c in self._terms.items():
            t = Polynomial.constant(c, n)
            for j, e in enumerate(m):
                if e:
                    t = t * power(j, e)
            _add_into(acc, t._terms)
        return Polynomial._raw(acc, n)

    def content(self) -> Fraction:
        """Positive rational c with self/c primitive integral (1 for zero)."""
        if not self._terms:
            return Fraction(1)
        num = 0
        den = 1
        for c in self._terms.values():
            f = Fraction(c)
            num = gcd(num, f.numerator)
            den = den * f.denominator // gcd(den, f.denominator)
        return Fraction(num, den)

    def leading_term(self) -> Tuple[Monomial, Scalar]:
        """Graded-lex leading monomial and coefficient."""
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        m = max(self._terms, key=lambda e: (sum(e), e))
        return m, self._terms[m]

    def to_string(self, names: Optional[Sequence[str]] = None) -> str:
        if names is None:
            names = [f"x{i}" for i in range(self.nvars)]
        if not self._terms:
            return "0"
        parts = []
        for m, c in self.items():
            mono = "*".join(
                names[j] if e == 1 else f"{names[j]}^{e}" for j, e in enumerate(m) if e)
            neg = c < 0
            a = -c if neg else c
            if mono:
                body = mono if a == 1 else f"{_fmt(a)}*{mono}"
            else:
                body = _fmt(a)
            parts.append(("-" if neg else "+", body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self) -> str:
        return self.to_string()

    def __repr__(self) -> str:
        return f"Polynomial({self.to_string()!r}, nvars={self.nvars})"


def _fmt(c: Scalar) -> str:
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return str(c)


def poly_mul(a: Polynomial, b: Polynomial) -> Polynomial:
    if a.nvars != b.nvars:
        raise ValueError(f"coordinate-count mismatch: {a.nvars} vs {b.nvars}")
    acc: Terms = {}
    _mul_into(acc, a.terms, b.terms)
    return Polynomial._raw(acc, a.nvars)


def poly_partial(p: Polynomial, i: int) -> Polynomial:
    if not 0 <= i < p.nvars:
        raise IndexError(f"coordinate index {i} out of range for {p.nvars} variables")
    return Polynomial._raw(_partial_terms(p.terms, i), p.nvars)


def poly_divexact(a: Polynomial, b: Polynomial) -> Optional[Polynomial]:
    """Return q with a == q*b, or None when b does not divide a."""
    if b.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    lm_b, lc_b = b.leading_term()
    rem = a
    quotient: Terms = {}
    while not rem.is_zero():
        lm, lc = rem.leading_term()
        if any(x < y for x, y in zip(lm, lm_b)):
            return None
        mono = tuple(x - y for x, y in zip(lm, lm_b))
        coef = _canon(Fraction(lc) / lc_b)
        quotient[mono] = coef
        rem = rem - b * Polynomial._raw({mono: coef}, a.nvars)
    return Polynomial._raw(quotient, a.nvars)


@lru_cache(maxsize=None)
def _basis_cached(n: int, i: int, weights: WeightVector) -> Tuple[Monomial, ...]:
    if i < 0:
        return ()
    if n == 0:
        return ((),) if i == 0 else ()
    if all(w == 1 for w in weights):
        out = []
        for combo in combinations_with_replacement(range(n), i):
            e = [0] * n
            for j in combo:
                e[j] += 1
            out.append(tuple(e))
    else:
        out = []

        def rec(j: int, left: int, prefix: list):
            if j == n - 1:
                if left % weights[j] == 0:
                    out.append(tuple(prefix + [left // weights[j]]))
                return
            for e in range(left // weights[j], -1, -1):
                rec(j + 1, left - e * weights[j], prefix + [e])

        rec(0, i, [])
    return tuple(sorted(out, reverse=True))


def monomial_basis(n: int, i: int, weights: Optional[Sequence[int]] = None) -> list:
    """Monomials of weighted degree ``i`` in ``n`` variables, in descending lex order.

    For unit weights the first element is ``x0**i`` and the last ``x_{n-1}**i``.
    """
    if i < 0:
        raise ValueError("degree must be non-negative")
    return list(_basis_cached(n, i, check_weights(weights, n)))


def variables(n: int) -> Tuple[Polynomial, ...]:
    return tuple(Polynomial.variable(i, n) for i in range(n))


def polynomial_from_terms(terms: Iterable[Tuple[Monomial, object]], nvars: int) -> Polynomial:
    acc: Dict[Monomial, Scalar] = {}
    for m, c in terms:
        _add_into(acc, {tuple(m): scalar(c)})
    return Polynomial._raw(acc, nvars)
