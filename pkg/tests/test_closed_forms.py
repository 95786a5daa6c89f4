import pytest

from poissoncoh.closed_forms import (
    circle_coboundary,
    near_positive_coboundary,
    splitting_blocks,
    transcribed_slice_matrix,
)
from poissoncoh.complexes import build_slice_matrix
from poissoncoh.models import blf_circle, near_positive4


@pytest.mark.parametrize("k", range(5))
@pytest.mark.parametrize("i", range(5))
def test_near_positive_formulas(k, i):
    pi = near_positive4()
    assert transcribed_slice_matrix(near_positive_coboundary, pi, k, i) == build_slice_matrix(pi, k, i).matrix


@pytest.mark.parametrize("k", range(5))
@pytest.mark.parametrize("i", range(5))
def test_circle_formulas(k, i):
    pi = blf_circle()
    assert transcribed_slice_matrix(circle_coboundary, pi, k, i) == build_slice_matrix(pi, k, i).matrix


@pytest.mark.parametrize("i", range(5))
def test_splitting_identities(i):
    for name, (left, right) in splitting_blocks(blf_circle(), i).items():
        assert left == right, name
