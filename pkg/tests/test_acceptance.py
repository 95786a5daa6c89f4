"""Acceptance suite: twelve end-to-end criteria, each reported as one PASS/FAIL line.

Run with pytest (lines appear in the terminal summary) or directly:
``python tests/test_acceptance.py``.
"""
from __future__ import annotations

import random
import sys
import time
from dataclasses import replace
from fractions import Fraction
from itertools import combinations

import pytest

from poissoncoh.algebra import Polynomial, monomial_basis, variables
from poissoncoh.assembly import near_positive_global
from poissoncoh.closed_forms import (
    circle_coboundary,
    near_positive_coboundary,
    splitting_blocks,
    transcribed_slice_matrix,
)
from poissoncoh.complexes import (
    build_slice_matrix,
    coboundary_matrix,
    cohomology_dim,
    cohomology_table,
    fit_free_module,
    hilbert_function,
)
from poissoncoh.models import (
    blf_circle,
    blf_point,
    catalog,
    circle_casimirs,
    involution_map,
    near_positive4,
    point_casimirs,
)
from poissoncoh.multivec import Multivector, euler_field, pushforward, schouten
from poissoncoh.poisson import (
    PoissonStructure,
    anchor_invert,
    check_anchor_inverse,
    exactness_witness,
    hamiltonian,
    jacobi_check,
    jacobian_bivector,
    modular_field,
)

RESULTS: dict = {}


def record(n: int, title: str, ok: bool, detail: str) -> None:
    line = f"criterion {n:2d} [{'PASS' if ok else 'FAIL'}] {title}: {detail}"
    RESULTS[n] = line
    print(line)


# weights making the two mixed-degree catalog models weight-homogeneous
CATALOG_WEIGHTS = {"near-symplectic-2n": (2, 1, 2, 1, 1, 1), "log-2n": (2, 1, 1, 1)}


# ------------------------------------------------------------------ 1

def check_jacobi():
    t0 = time.perf_counter()
    ok_models = [jacobi_check(pi).ok for pi in catalog()]
    x0 = variables(4)[0]
    bad = PoissonStructure(("x0", "x1", "x2", "x3"),
                           Multivector.basis((0, 1), 4) + Multivector.basis((2, 3), 4, x0))
    res = jacobi_check(bad)
    dt = time.perf_counter() - t0
    ok = all(ok_models) and len(ok_models) == 9 and not res.ok and not res.witness.is_zero() and dt < 1
    return ok, (f"{sum(ok_models)}/9 catalog models Poisson; counterexample witness "
                f"{res.witness.to_string(bad.coords)}; {dt:.2f}s")


# ------------------------------------------------------------------ 2

def check_near_positive():
    t0 = time.perf_counter()
    pi = near_positive4()
    rep = cohomology_table(pi, i_max=8)
    zero = [0] * 8
    dims_ok = (rep.dims(0) == [1] + zero and rep.dims(1) == [2] + zero and rep.dims(2) == [1] + zero
               and rep.dims(3) == [0] * 9 and rep.dims(4) == [0] * 9)
    r1 = cohomology_dim(pi, 1, 0, True).representatives
    r2 = cohomology_dim(pi, 2, 0, True).representatives
    reps_ok = (set(r1) == {Multivector.basis((0,), 4), Multivector.basis((2,), 4)}
               and r2 == [Multivector.basis((0, 2), 4)])
    dt = time.perf_counter() - t0
    ok = dims_ok and reps_ok and dt < 60
    dims = {f"H{k}": rep.dims(k) for k in range(5)}
    return ok, (f"dims {dims}; H1_0 reps {[str(r) for r in r1]}; H2_0 reps {[str(r) for r in r2]}; "
                f"{dt:.1f}s")


# ------------------------------------------------------------------ 3

def check_circle():
    t0 = time.perf_counter()
    pi = blf_circle()
    rep = cohomology_table(pi, i_max=8, k_range=(0, 2, 3, 4))
    expect = [i // 2 + 1 for i in range(9)]
    dims_ok = all(rep.dims(k) == expect for k in (0, 3, 4)) and rep.dims(2) == [0] * 9
    h1_ok = True
    h1 = []
    for i in range(9):
        s = cohomology_dim(pi, 1, i, True)
        h1.append(s.dim)
        for r in s.representatives:
            coeff = r.coefficient((0,))
            only_theta = set(r.terms) == {(0,)}
            h1_ok &= only_theta and hamiltonian(pi, coeff).is_zero()
    h1_ok &= h1 == expect
    r3 = cohomology_dim(pi, 3, 0, True).representatives
    r4 = cohomology_dim(pi, 4, 0, True).representatives
    reps_ok = r3 == [Multivector.basis((1, 2, 3), 4)] and r4 == [Multivector.basis((0, 1, 2, 3), 4)]
    dt = time.perf_counter() - t0
    ok = dims_ok and h1_ok and reps_ok and dt < 60
    return ok, (f"H0/H3/H4 dims {rep.dims(0)}, H1 {h1}, H2 {rep.dims(2)}; H1 reps Casimir*dtheta: "
                f"{h1_ok}; H3_0 {[str(r) for r in r3]}; H4_0 {[str(r) for r in r4]}; {dt:.1f}s")


# ------------------------------------------------------------------ 4

def check_point():
    t0 = time.perf_counter()
    pi = blf_point()
    i_max = 10
    rep = cohomology_table(pi, i_max=i_max)
    cas = (2, 2)
    parts = []
    h0_ok = rep.dims(0) == hilbert_function(cas, i_max)
    parts.append(f"H0 {'ok' if h0_ok else 'MISMATCH'} {rep.dims(0)}")
    f1 = fit_free_module(list(enumerate(rep.dims(1))), cas)
    E = euler_field(4)
    e_class = cohomology_dim(pi, 1, 1, True)
    e_is_cocycle = schouten(pi.bivector, E).is_zero()
    h1_ok = f1.exact and f1.rank == 1 and f1.generator_degrees == (1,) and e_is_cocycle
    parts.append(f"H1 fit rank {f1.rank} gens {list(f1.generator_degrees)} (want rank 1, degree 1; "
                 f"dim H1_1 = {e_class.dim}, E cocycle {e_is_cocycle})")
    ranks_ok = True
    for k, want in ((2, 6), (3, 13), (4, 7)):
        f = fit_free_module(list(enumerate(rep.dims(k))), cas)
        good = f.exact and f.rank == want
        ranks_ok &= good
        parts.append(f"H{k} fit rank {f.rank} exact {f.exact} (want {want})")
    dt = time.perf_counter() - t0
    ok = h0_ok and h1_ok and ranks_ok and dt < 600
    return ok, "; ".join(parts) + f"; {dt:.1f}s"


# ------------------------------------------------------------------ 5

def check_modular():
    x = Polynomial.constant(1, 4)
    fields = {
        "near-positive": (near_positive4(), Multivector.vector([2, 0, 0, 0]) * x),
        "blf-circle": (blf_circle(), Multivector.zero(1, 4)),
        "blf-point": (blf_point(), Multivector.zero(1, 4)),
    }
    ok = True
    parts = []
    for name, (pi, want) in fields.items():
        Y = modular_field(pi)
        closed = schouten(pi.bivector, Y).is_zero()
        ok &= Y == want and closed
        parts.append(f"{name} {Y.to_string(pi.coords) if Y else '0'} (d1 = 0: {closed})")
    return ok, "; ".join(parts)


# ------------------------------------------------------------------ 6

def check_formulas():
    ok = True
    count = 0
    for formula, pi in ((near_positive_coboundary, near_positive4()), (circle_coboundary, blf_circle())):
        for k in range(5):
            for i in range(5):
                ok &= transcribed_slice_matrix(formula, pi, k, i) == build_slice_matrix(pi, k, i).matrix
                count += 1
    split_ok = all(left == right for i in range(5)
                   for left, right in splitting_blocks(blf_circle(), i).values())
    return ok and split_ok, f"{count} slice matrices equal: {ok}; splitting block identities: {split_ok}"


# ------------------------------------------------------------------ 7

def check_d_squared():
    ok = True
    parts = []
    for pi in catalog():
        label = pi.name + (f"[{pi.extra('factor')}]" if pi.extra("factor") else "")
        if pi.name in CATALOG_WEIGHTS:
            pi = replace(pi, weights=CATALOG_WEIGHTS[pi.name])
        pairs = 0
        good = True
        if pi.is_weight_homogeneous():
            for k in range(pi.n):
                for i in range(9):
                    a = build_slice_matrix(pi, k, i)
                    b = build_slice_matrix(pi, k + 1, a.target_i)
                    good &= a.codomain == b.domain
                    good &= (b.matrix @ a.matrix).is_zero()
                    pairs += 1
        else:
            for k in range(pi.n):
                dom = [(I, m) for d in range(9) for m in monomial_basis(pi.n, d)
                       for I in combinations(range(pi.n), k)]
                A, cod = coboundary_matrix(pi, k, dom)
                B, _ = coboundary_matrix(pi, k + 1, cod)
                good &= (B @ A).is_zero()
                pairs += 1
        ok &= bool(good)
        parts.append(f"{label} {pairs} pairs {'ok' if good else 'NONZERO'}")
    return ok, "; ".join(parts)


# ------------------------------------------------------------------ 8

def check_exactness():
    ok = True
    parts = []
    for pi in (blf_circle(), near_positive4()):
        w = exactness_witness(pi)
        good = w == euler_field(4) and schouten(pi.bivector, w) == pi.bivector
        ok &= good
        parts.append(f"{pi.name}: {w.to_string(pi.coords) if w is not None else None} ([pi, Y] = pi: {good})")
    return ok, "; ".join(parts)


# ------------------------------------------------------------------ 9

def check_jacobian():
    Q1, Q2 = circle_casimirs()
    circle_ok = jacobian_bivector(Q1, Q2 * Fraction(-1, 2)).bivector == blf_circle().bivector
    P1, P2 = point_casimirs()
    jac = jacobian_bivector(P1, P2).bivector
    model = blf_point().bivector
    # derive c from one nonzero entry, then demand equality everywhere
    I, coeff = next(iter(model.terms.items()))
    m, v = next(iter(coeff.terms.items()))
    c = Fraction(jac.coefficient(I).coefficient(m)) / v
    point_ok = jac == model * c
    cas_ok = all(hamiltonian(blf_point(), p).is_zero() for p in (P1, P2))
    return circle_ok and point_ok and cas_ok, (
        f"J(Q1, -Q2/2) = pi_circle: {circle_ok}; J(P1, P2) = {c} * pi_point: {point_ok}; "
        f"P1, P2 Casimirs: {cas_ok}")


# ------------------------------------------------------------------ 10

def check_involution():
    pi = near_positive4()
    ok = pushforward(involution_map(), pi.bivector) == pi.bivector
    return ok, f"pushforward equals the model: {ok}"


# ------------------------------------------------------------------ 11

def check_assembly():
    a = near_positive_global((1, 0, 1, 0, 1), 1).vector()
    b = near_positive_global((1, 1, 0, 1, 1), 2).vector()
    ok = a == (1, 2, 2, 0, 1) and b == (1, 5, 2, 1, 1)
    rng = random.Random(20240611)
    add_ok = True
    for _ in range(200):
        b1 = (rng.randint(1, 3),) + tuple(rng.randint(0, 9) for _ in range(4))
        b2 = (rng.randint(1, 3),) + tuple(rng.randint(0, 9) for _ in range(4))
        n1, n2 = rng.randint(1, 6), rng.randint(0, 6)
        d1 = [x - y for x, y in zip(near_positive_global(b1, n1 + n2).vector(),
                                    near_positive_global(b1, n1).vector())]
        d2 = [x - y for x, y in zip(near_positive_global(b2, n1 + n2).vector(),
                                    near_positive_global(b2, n1).vector())]
        add_ok &= d1 == d2
    return ok and add_ok, f"examples {a}, {b}; additivity over 200 random inputs: {add_ok}"


# ------------------------------------------------------------------ 12

def check_anchor_inversion():
    pi = near_positive4()
    rng = random.Random(7)
    x0, x1, x2, x3 = variables(4)
    base = x1 ** 2 + x3 ** 2
    ok = True
    powers = set()
    for _ in range(20):
        comps = []
        for _ in range(4):
            terms = {tuple(rng.randint(0, 2) for _ in range(4)): Fraction(rng.randint(-5, 5), rng.randint(1, 3))
                     for _ in range(rng.randint(1, 4))}
            comps.append(Polynomial(terms, 4))
        Y = Multivector.vector(comps)
        form = anchor_invert(pi, Y)
        ok &= check_anchor_inverse(pi, form, Y)
        e = form.denominator.degree() // 2
        ok &= form.denominator == base ** e
        powers.add(e)
    return ok, f"20 random fields inverted exactly; denominators (x1^2 + x3^2)^e with e in {sorted(powers)}"


CRITERIA = [
    (1, "Jacobi suite", check_jacobi),
    (2, "near-positive formal cohomology, degrees 0-8", check_near_positive),
    (3, "fold-circle model cohomology, degrees 0-8", check_circle),
    (4, "Lefschetz-point model cohomology and free-module fits, degrees 0-10", check_point),
    (5, "modular fields", check_modular),
    (6, "coboundary formula transcriptions and splitting identities", check_formulas),
    (7, "d o d = 0 on every catalog model, degrees 0-8", check_d_squared),
    (8, "Euler-field exactness", check_exactness),
    (9, "Jacobian reconstruction", check_jacobian),
    (10, "involution invariance", check_involution),
    (11, "global assembly for near-positive manifolds", check_assembly),
    (12, "anchor inversion", check_anchor_inversion),
]


@pytest.mark.parametrize("n,title,check", CRITERIA, ids=[f"criterion_{n:02d}" for n, _, _ in CRITERIA])
def test_criterion(n, title, check):
    ok, detail = check()
    record(n, title, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for n, title, check in CRITERIA:
        ok, detail = check()
        record(n, title, ok, detail)
        failed += not ok
    sys.exit(1 if failed else 0)
