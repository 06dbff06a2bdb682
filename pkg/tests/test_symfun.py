import itertools
import random
from fractions import Fraction

import pytest
import sympy
from sympy.combinatorics import Permutation
from hypothesis import given
from hypothesis import strategies as st

from qmb.fock import partitions
from qmb.scalars import ONE, Q, NotDivisible, Scalar
from qmb.symfun import (
    MultiPoly,
    SpectralFormula,
    elementary_symmetric,
    factorial_schur,
    prop7_spectral_check,
    prop8_identity_check,
    q_binomial,
    spectral_rhs,
)

from conftest import scalars


def thm1(n, k, lam):
    return spectral_rhs(SpectralFormula("Thm1", k), n, lam)


def test_q_binomial_examples():
    assert q_binomial(3, 3) == 1
    assert q_binomial(2, 1) == 1 + Q
    assert q_binomial(3, 1) == 1 + Q + Q**2
    with pytest.raises(ValueError):
        q_binomial(2, 3)


@pytest.mark.parametrize("a", range(7))
def test_q_binomial_counts_subsets_by_inversions(a):
    # sum over b-subsets S of {1..a} of q^(sum S - b(b+1)/2)
    for b in range(a + 1):
        want = Scalar()
        for s in itertools.combinations(range(1, a + 1), b):
            want = want + Q ** (sum(s) - b * (b + 1) // 2)
        assert q_binomial(a, b) == want


@given(st.integers(1, 8).flatmap(lambda a: st.tuples(st.just(a), st.integers(1, a))))
def test_q_pascal(ab):
    a, b = ab
    rest = q_binomial(a - 1, b) if b < a else Scalar()
    assert q_binomial(a, b) == q_binomial(a - 1, b - 1) + Q**b * rest


def test_elementary_symmetric_examples():
    assert elementary_symmetric(0, [Q, Q**3]) == 1
    assert elementary_symmetric(2, [Q**2, ONE]) == Q**2
    assert elementary_symmetric(1, [Q**2, Q**4]) == Q**2 + Q**4


@given(st.lists(scalars, max_size=4), st.data())
def test_elementary_symmetric_is_a_generating_coefficient(values, data):
    k = data.draw(st.integers(0, len(values)))
    q, t = sympy.symbols("q t")
    as_expr = lambda v: sum(sympy.nsimplify(c) * q**e for e, c in v.items())  # noqa: E731
    gen = sympy.expand(sympy.prod([1 + t * as_expr(v) for v in values]))
    want = gen.coeff(t, k)
    assert sympy.expand(as_expr(elementary_symmetric(k, values)) - want) == 0


def test_factorial_schur_examples():
    assert factorial_schur((), 3) == MultiPoly.const(3, ONE)
    assert factorial_schur((1,), 1).render() == "x1 - 1"
    assert factorial_schur((1, 0), 2).render("p") == "x1 + x2 - 1 - p"
    with pytest.raises(ValueError):
        factorial_schur((1, 2), 2)
    with pytest.raises(ValueError):
        factorial_schur((1, 1, 1), 2)


def determinant_ratio(nu, xs, p, classical=False):
    n = len(xs)
    nu = tuple(nu) + (0,) * (n - len(nu))
    def col(x, j):
        out = sympy.Integer(1)
        for m in range(nu[j] + n - j - 1):
            out *= x - (m if classical else p**m)
        return out
    num = sympy.Matrix(n, n, lambda i, j: col(xs[i], j)).det()
    den = sympy.prod([xs[i] - xs[j] for i in range(n) for j in range(i + 1, n)])
    return num / den


@pytest.mark.parametrize("nu,n", [((1,), 2), ((2, 1), 2), ((1, 1), 3), ((2, 1), 3), ((1, 1, 1), 3), ((1, 1), 4)])
def test_factorial_schur_matches_a_numeric_determinant(nu, n):
    rng = random.Random(hash(nu) + n)
    for _ in range(3):
        xs = [sympy.Rational(rng.randint(-9, 9), rng.randint(1, 4)) + i * sympy.Rational(1, 7) for i in range(n)]
        q0 = Fraction(rng.randint(2, 5), rng.randint(1, 3))
        pts = [Scalar.const(Fraction(int(x.p), int(x.q))) for x in xs]
        got = factorial_schur(nu, n, "q", Q).substitute(pts).eval_at(q0)
        assert got == determinant_ratio(nu, xs, sympy.Rational(q0.numerator, q0.denominator))
        got_c = factorial_schur(nu, n, "classical").substitute(pts).constant_term()
        assert got_c == determinant_ratio(nu, xs, None, classical=True)


@given(st.sampled_from([((1,), 3), ((1, 1), 3), ((2, 1), 3), ((1, 1), 4)]), st.data())
def test_factorial_schur_is_symmetric(case, data):
    nu, n = case
    i, j = data.draw(st.lists(st.integers(0, n - 1), min_size=2, max_size=2, unique=True))
    s = factorial_schur(nu, n, "q", Q**2)
    assert s.swap(i, j) == s


def test_divide_linear_detects_remainders():
    x1, x2 = MultiPoly.var(2, 0), MultiPoly.var(2, 1)
    assert (x1 * x1 - x2 * x2).divide_linear(0, 1) == x1 + x2
    with pytest.raises(NotDivisible):
        (x1 * x1 + x2).divide_linear(0, 1)


def test_spectral_examples():
    for m in range(4):
        assert thm1(1, 1, (m,)) == 1 - Q ** (2 * m)
    assert spectral_rhs(SpectralFormula("Y1"), 2, (1, 0)) == 1 - Q**2
    assert spectral_rhs(SpectralFormula("Classical", 1), 1, (3,)) == 3
    with pytest.raises(ValueError):
        SpectralFormula("nope")


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_vacuum_line_is_killed(n):
    for k in range(1, n + 1):
        assert thm1(n, k, (0,) * n) == 0


@pytest.mark.parametrize("n", [1, 2, 3])
def test_first_eigenvalue_two_ways(n):
    for lam in partitions(n, 3):
        assert thm1(n, 1, lam) == spectral_rhs(SpectralFormula("Y1"), n, lam)


def classical_capelli_eigenvalue(n, k, lam):
    """Ratio (sum_IJ det(z_IJ) det(d_IJ)) u / u with commuting variables."""
    z = sympy.Matrix(n, n, lambda a, b: sympy.Symbol(f"z{a}{b}"))
    u = sympy.Integer(1)
    for j in range(1, n + 1):
        power = lam[j - 1] - (lam[j] if j < n else 0)
        u *= z[:j, :j].det() ** power
    total = 0
    for rows in itertools.combinations(range(n), k):
        for cols in itertools.combinations(range(n), k):
            minor = z.extract(list(rows), list(cols)).det()
            applied = 0
            for perm in itertools.permutations(cols):
                sign = Permutation([cols.index(c) for c in perm]).signature()
                f = u
                for r, c in zip(rows, perm):
                    f = sympy.diff(f, z[r, c])
                applied += sign * f
            total += minor * applied
    return sympy.cancel(total / u)


@pytest.mark.parametrize("n,lam", [(1, (2,)), (2, (1, 0)), (2, (2, 1)), (2, (2, 2)), (2, (3, 1))])
def test_classical_formula_matches_capelli_operator(n, lam):
    for k in range(1, n + 1):
        want = classical_capelli_eigenvalue(n, k, lam)
        assert spectral_rhs(SpectralFormula("Classical", k), n, lam) == int(want)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_classical_limit(n):
    for lam in partitions(n, 3):
        for k in range(1, n + 1):
            reduced = thm1(n, k, lam).divide_exact((1 - Q**2) ** k)
            assert reduced.eval_at(1) == spectral_rhs(SpectralFormula("Classical", k), n, lam)


def test_prop8_examples():
    assert prop8_identity_check(1, 1)
    assert prop8_identity_check(2, 2)
    assert prop8_identity_check(2, 1)


def test_prop8_fails_when_a_coefficient_is_perturbed(monkeypatch):
    import qmb.symfun as symfun

    original = symfun.q_binomial
    monkeypatch.setattr(symfun, "q_binomial", lambda a, b: original(a, b) + (Q if a == 2 else 0))
    assert not symfun.prop8_identity_check(2, 1)


def test_prop7_examples():
    assert prop7_spectral_check(1, 1, (2,))
    assert prop7_spectral_check(2, 1, (1, 0))
    for n in (1, 2, 3):
        for k in range(1, n + 1):
            assert prop7_spectral_check(n, k, (0,) * n)


def test_render_and_substitute():
    s = factorial_schur((1,), 2, "q", Q)
    assert s.substitute([Q**2, ONE]) == Q**2 - Q
    assert MultiPoly(2).render() == "0"
    assert (MultiPoly.var(2, 0) * -Q).render() == "-q*x1"
