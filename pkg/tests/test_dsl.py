from fractions import Fraction

import pytest
from hypothesis import given, settings

from poissoncoh.dsl import ParseError, format_structure, parse_poisson, parse_structure, tokenize
from poissoncoh.models import blf_circle, catalog
from poissoncoh.multivec import Multivector
from poissoncoh.poisson import PoissonStructure

from conftest import multivectors


def test_circle_model_text():
    pi = parse_poisson("coords(t,x1,x2,x3) x1*dx2^dx3 + x2*dx1^dx3 - x3*dx1^dx2")
    assert pi.bivector == blf_circle().bivector


def test_zero_bivector():
    doc = parse_structure("coords(a,b) 0")
    assert doc.bivector.is_zero()


def test_malformed_basis_column():
    with pytest.raises(ParseError) as err:
        parse_structure("coords(x) dx^")
    assert (err.value.line, err.value.col, err.value.token) == (1, 13, "^")


@pytest.mark.parametrize("text,fragment", [
    ("coords(a,b) (a+b*da^db", "basis"),
    ("coords(a,b) (a+b", "unbalanced"),
    ("coords(a,b) (a+b))*da^db", "unbalanced"),
    ("coords(a,b) a*da^db)", "unbalanced"),
    ("coords(a,b) c*da^db", "unknown identifier"),
    ("coords(a,b) 0.5*da^db", "floating-point"),
    ("coords(a,b) a*da^da", "repeated"),
    ("coords(a,b) a*da^dc", "unknown coordinate"),
    ("coords(a,b) 1/0*da^db", "zero denominator"),
    ("coords(a,a) da^db", "declared twice"),
    ("coords(a,b) weights(1) da^db", "weights"),
])
def test_parse_errors(text, fragment):
    with pytest.raises(ParseError) as err:
        parse_structure(text)
    assert fragment in str(err.value)


def test_rationals_weights_volume_comments():
    text = "# comment\ncoords(a, b, c)\nweights(1, 2, 2)\nvolume(3/2)\n1/2*a^2*db^dc - (b + c)*da^db"
    doc = parse_structure(text)
    assert doc.weights == (1, 2, 2)
    assert doc.volume == Fraction(3, 2)
    pi = doc.to_structure()
    assert pi.bivector.coefficient((1, 2)).coefficient((2, 0, 0)) == Fraction(1, 2)


def test_error_positions_on_later_lines():
    with pytest.raises(ParseError) as err:
        parse_structure("coords(a,b)\n  a*da^dq")
    assert err.value.line == 2 and err.value.col == 8


def test_catalog_round_trips():
    for pi in catalog():
        assert parse_poisson(format_structure(pi)).bivector == pi.bivector


@settings(max_examples=60, deadline=None)
@given(multivectors(3, 2))
def test_round_trip_random(biv):
    pi = PoissonStructure(("u", "v", "w"), biv)
    assert parse_poisson(format_structure(pi)).bivector == biv


def test_tokens():
    kinds = [t.kind for t in tokenize("coords(x) 2/3*x^2*dx^dy")]
    assert kinds[0] == "IDENT" and kinds[-1] == "EOF"
