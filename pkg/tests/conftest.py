from fractions import Fraction

from hypothesis import strategies as st

from poissoncoh.algebra import Polynomial
from poissoncoh.multivec import Multivector, all_indices


def coefficients():
    return st.one_of(st.integers(-5, 5), st.fractions(min_value=-3, max_value=3, max_denominator=4))


def polynomials(n: int, max_deg: int = 2, max_terms: int = 4):
    mono = st.lists(st.integers(0, max_deg), min_size=n, max_size=n).map(tuple)
    return st.dictionaries(mono, coefficients(), max_size=max_terms).map(lambda t: Polynomial(t, n))


def multivectors(n: int, k: int, max_deg: int = 2):
    idx = all_indices(n, k)
    return st.dictionaries(st.sampled_from(idx), polynomials(n, max_deg, 3), max_size=3).map(
        lambda t: Multivector(k, t, n))


def rationals():
    return st.fractions(min_value=-5, max_value=5, max_denominator=6).map(Fraction)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[n])
