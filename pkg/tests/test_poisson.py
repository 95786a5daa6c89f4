import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from poissoncoh.algebra import Polynomial, variables
from poissoncoh.models import (
    blf_circle,
    blf_point,
    catalog,
    circle_casimirs,
    near_positive4,
    point_casimirs,
    sl2_dual,
    symplectic_std,
)
from poissoncoh.multivec import Multivector, OneForm, euler_field, schouten
from poissoncoh.poisson import (
    NotPoissonError,
    PoissonStructure,
    anchor,
    anchor_invert,
    casimir_basis,
    check_anchor_inverse,
    exactness_witness,
    hamiltonian,
    intrinsic_gradient,
    jacobi_check,
    jacobian_bivector,
    modular_field,
    near_positivity_sample,
    pfaffian,
    rank_at,
    validate,
    wedge_power,
)

from conftest import polynomials, rationals


def bad_structure():
    x0 = variables(4)[0]
    biv = Multivector.basis((0, 1), 4) + Multivector.basis((2, 3), 4, x0)
    return PoissonStructure(("x0", "x1", "x2", "x3"), biv)


def test_catalog_is_poisson():
    for pi in catalog():
        assert jacobi_check(pi).ok, pi.name


def test_counterexample_witness():
    res = jacobi_check(bad_structure())
    assert not res.ok
    # [pi, pi] = 2 [d0^d1, x0 d2^d3] = -2 d1^d2^d3
    assert res.witness == Multivector.basis((1, 2, 3), 4, -2)
    with pytest.raises(NotPoissonError) as err:
        validate(bad_structure())
    assert err.value.witness == res.witness


def test_hamiltonian_of_coordinates_near_positive():
    pi = near_positive4()
    x0, x1, x2, x3 = variables(4)
    assert hamiltonian(pi, x0) == Multivector.vector([0, -x1, 0, -x3])
    assert anchor(pi, OneForm.coordinate(1, 4)) == Multivector.vector([x1, 0, -x3, 0])


def test_casimirs_of_circle_model():
    pi = blf_circle()
    Q1, Q2 = circle_casimirs()
    assert casimir_basis(pi, 1) == [Q1]
    basis2 = casimir_basis(pi, 2)
    assert len(basis2) == 2
    assert Q2 in basis2 or -Q2 in basis2


def test_casimirs_of_point_model():
    pi = blf_point()
    P1, P2 = point_casimirs()
    assert [len(casimir_basis(pi, i)) for i in range(7)] == [1, 0, 2, 0, 3, 0, 4]
    for c in (P1, P2):
        assert hamiltonian(pi, c).is_zero()


@pytest.mark.parametrize("i", range(9))
def test_casimirs_are_central(i):
    for pi in (blf_circle(), sl2_dual()):
        for c in casimir_basis(pi, i):
            assert hamiltonian(pi, c).is_zero()


def test_modular_fields():
    x = variables(4)
    assert modular_field(near_positive4()) == Multivector.vector([2, 0, 0, 0]) * Polynomial.constant(1, 4)
    assert modular_field(blf_circle()).is_zero()
    assert modular_field(blf_point()).is_zero()
    for pi in (near_positive4(), blf_circle(), blf_point()):
        assert schouten(pi.bivector, modular_field(pi)).is_zero()


def test_exactness_witnesses():
    for pi in (blf_circle(), near_positive4()):
        w = exactness_witness(pi)
        assert w == euler_field(4)
        assert schouten(pi.bivector, w) == pi.bivector
    sym = symplectic_std(2)
    w = exactness_witness(sym)
    assert w == euler_field(4) / 2
    assert schouten(sym.bivector, w) == sym.bivector
    # the quadratic model has [pi, E] = 0 and no linear primitive
    assert exactness_witness(blf_point(), max_degree=1) is None


def test_jacobian_reconstruction():
    Q1, Q2 = circle_casimirs()
    circle = jacobian_bivector(Q1, Q2 * Fraction(-1, 2))
    assert circle.bivector == blf_circle().bivector
    P1, P2 = point_casimirs()
    jac = jacobian_bivector(P1, P2)
    # entry d3^d4 of the Jacobian is 4 (x1^2 + x2^2), four times the model entry
    assert jac.bivector == blf_point().bivector * 4
    for c in (P1, P2):
        assert hamiltonian(blf_point(), c).is_zero()


@settings(max_examples=15, deadline=None)
@given(polynomials(4, 2, 3), polynomials(4, 2, 3))
def test_jacobian_structures_are_poisson(f, g):
    pi = jacobian_bivector(f, g)
    assert jacobi_check(pi).ok
    assert hamiltonian(pi, f).is_zero()
    assert hamiltonian(pi, g).is_zero()


def test_rank_and_wedge_power():
    pi = near_positive4()
    assert rank_at(pi, [0, 0, 0, 0]) == 0
    assert rank_at(pi, [0, 1, 0, 0]) == 4
    top = wedge_power(pi, 2).coefficient((0, 1, 2, 3))
    x0, x1, x2, x3 = variables(4)
    assert top == 2 * (x1 ** 2 + x3 ** 2)
    assert pfaffian(pi) in (x1 ** 2 + x3 ** 2, -(x1 ** 2 + x3 ** 2))


@settings(max_examples=40, deadline=None)
@given(st.lists(rationals(), min_size=4, max_size=4))
def test_rank_is_even(p):
    for pi in catalog():
        if pi.n == 4:
            assert rank_at(pi, p) % 2 == 0


@settings(max_examples=30, deadline=None)
@given(rationals(), rationals())
def test_intrinsic_gradient_on_zero_locus(a, b):
    g = intrinsic_gradient(near_positive4(), [a, 0, b, 0])
    assert g.rank == 2


def test_intrinsic_gradient_needs_a_zero():
    with pytest.raises(ValueError):
        intrinsic_gradient(near_positive4(), [0, 1, 0, 0])


def test_near_positivity():
    pts = list(itertools.product(range(-1, 2), repeat=4))
    rep = near_positivity_sample(near_positive4(), pts)
    assert rep.all_nonnegative and rep.counterexample is None
    bad = PoissonStructure(("a", "b", "c", "d"),
                           Multivector.basis((0, 1), 4) - Multivector.basis((2, 3), 4))
    assert not near_positivity_sample(bad, [[0, 0, 0, 0]]).all_nonnegative


@settings(max_examples=20, deadline=None)
@given(st.lists(polynomials(4, 2, 3), min_size=4, max_size=4))
def test_anchor_inverse_near_positive(comps):
    pi = near_positive4()
    Y = Multivector.vector(comps)
    form = anchor_invert(pi, Y)
    assert check_anchor_inverse(pi, form, Y)
    x0, x1, x2, x3 = variables(4)
    base = x1 ** 2 + x3 ** 2
    assert form.denominator in (base, Polynomial.constant(1, 4)) or not Y


def test_anchor_inverse_symplectic():
    pi = symplectic_std(1)
    form = anchor_invert(pi, Multivector.basis((0,), 2))
    assert form.denominator == 1
    assert anchor(pi, form.numerator_form()) == Multivector.basis((0,), 2)


def test_anchor_inverse_degenerate_rejected():
    with pytest.raises(ValueError):
        anchor_invert(sl2_dual(), Multivector.basis((0,), 3))
