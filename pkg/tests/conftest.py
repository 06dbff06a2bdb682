from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from qmb.ncalg import NcPoly
from qmb.scalars import Scalar

settings.register_profile(
    "qmb", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("qmb")

coefficients = st.one_of(
    st.integers(-5, 5),
    st.fractions(min_value=-3, max_value=3, max_denominator=4),
)

scalars = st.dictionaries(st.integers(-4, 4), coefficients, max_size=4).map(Scalar)

nonzero_rationals = st.fractions(min_value=-3, max_value=3, max_denominator=5).filter(lambda x: x != 0)


def words(alg, max_len=3):
    return st.lists(st.integers(0, alg.ngens - 1), max_size=max_len).map(tuple)


def elements(alg, max_len=3, max_terms=3):
    """Random elements built from raw (not necessarily canonical) words."""
    small = st.sampled_from([1, -1, 2, Fraction(1, 2)])
    coef = st.builds(lambda e, c: Scalar.monomial(e, c), st.integers(-2, 2), small)
    return st.dictionaries(words(alg, max_len), coef, max_size=max_terms).map(
        lambda expr: NcPoly.from_words(alg, expr)
    )


ACCEPTANCE_RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        ok, title, detail = ACCEPTANCE_RESULTS[number]
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {title}"
        terminalreporter.write_line(line + (f"  ({detail})" if detail else ""))
