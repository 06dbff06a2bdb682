"""Acceptance criteria 1-12.  Every comparison is exact equality of canonical forms.

Run with pytest (a summary line per criterion is printed at the end) or
directly with ``python tests/test_acceptance.py``.
"""

import itertools
import sys
import time
from fractions import Fraction

import pytest

from qmb.fock import eigenvalue_on, gram_matrix, leading_principal_minors, partitions
from qmb.qmatrices import build_x, build_y, det_q, pol_mat, sigma
from qmb.scalars import Q, Scalar
from qmb.symfun import SpectralFormula, prop7_spectral_check, prop8_identity_check, spectral_rhs
from qmb.verify import expand, run_suite

try:
    from conftest import ACCEPTANCE_RESULTS
except ImportError:  # run as a script
    ACCEPTANCE_RESULTS = {}


def record(number, title, failures, detail=""):
    ok = not failures
    ACCEPTANCE_RESULTS[number] = (ok, title, detail if ok else f"first failure: {failures[0]}")
    assert ok, failures[:3]


def fock_grid():
    for n, bound in ((1, 3), (2, 3), (3, 2)):
        for lam in partitions(n, bound):
            yield n, tuple(lam)


def thm1(n, k, lam):
    return spectral_rhs(SpectralFormula("Thm1", k), n, lam)


def test_criterion_01_y_eigenvalues():
    failures, count = [], 0
    for n, lam in fock_grid():
        for k in range(1, n + 1):
            count += 1
            got = eigenvalue_on(build_y(n, k), lam)
            if got != thm1(n, k, lam):
                failures.append((n, k, lam, got.render(), thm1(n, k, lam).render()))
    record(1, "Fock eigenvalues of y_k equal the factorial Schur formula", failures, f"{count} cases")


def test_criterion_02_y_commute():
    failures = []
    for n in (2, 3):
        ys = [build_y(n, k) for k in range(1, n + 1)]
        for i, j in itertools.combinations(range(n), 2):
            if not (ys[i] * ys[j] - ys[j] * ys[i]).is_zero():
                failures.append((n, i + 1, j + 1))
    record(2, "y_i y_j - y_j y_i normal-forms to 0 for n = 2, 3", failures)


def test_criterion_03_y1_det_relation():
    failures = []
    for n in (1, 2, 3):
        y1, d = build_y(n, 1), det_q(pol_mat(n))
        if not (y1 * d - d * (y1 + Q ** (-2 * n) - 1) * Q**2).is_zero():
            failures.append(n)
    record(3, "y_1 det_q z = q^2 det_q z (y_1 + q^(-2n) - 1) for n <= 3", failures)


def test_criterion_04_first_eigenvalue():
    failures = []
    for n, lam in fock_grid():
        y1 = spectral_rhs(SpectralFormula("Y1"), n, lam)
        if eigenvalue_on(build_y(n, 1), lam) != y1:
            failures.append(("fock", n, lam))
    for n in (1, 2, 3, 4):
        for lam in partitions(n, 4):
            if thm1(n, 1, lam) != spectral_rhs(SpectralFormula("Y1"), n, lam):
                failures.append(("formula", n, tuple(lam)))
    record(4, "y_1 eigenvalue formula, on the Fock grid and as an identity for n, l_1 <= 4", failures)


def test_criterion_05_sigma_symmetry():
    failures = []
    for n in (1, 2):
        for k in range(1, n + 1):
            if sigma(build_x(n, k)) != build_x(n, k, inverse=True) * Q ** (2 * k * k):
                failures.append((n, k))
    record(5, "sigma(x_k(q)) = q^(2k^2) x_k(q^-1) in C[M_2n]_q for n = 1, 2", failures)


def single_signed_monomial(text):
    s = Scalar.parse(text)
    return s.is_monomial() and abs(s.items()[0][1]) == 1


def test_criterion_06_two_forms_of_x():
    entries = run_suite(expand("xk_two_forms", n=[1, 2])).entries
    failures = [
        (e.check.params, e.status, e.witness)
        for e in entries
        if e.status not in ("pass", "pass-with-convention-factor")
        or (e.correction_factor is not None and not single_signed_monomial(e.correction_factor))
    ]
    factors = ", ".join(
        f"n={e.check.kwargs['n']} k={e.check.kwargs['k']}: {e.correction_factor or '1'}" for e in entries
    )
    record(6, "star form of x_k vs the complementary-minor display, modulo det", failures, factors)


def test_criterion_07_restriction_map():
    entries = run_suite(expand("jn_homomorphism", n=[2, 3])).entries
    failures = [(e.check.params, e.witness) for e in entries if e.status != "pass"]
    assert all(e.check.kwargs["pairs"] == 50 for e in entries)
    record(7, "J_n kills every relation and is multiplicative on 50 random pairs, n = 2, 3", failures)


def test_criterion_08_positivity():
    failures = []
    for n in (1, 2):
        for degree in range(4):
            values = [[x.eval_at(Fraction(1, 2)) for x in row] for row in gram_matrix(n, degree)]
            minors = leading_principal_minors(values)
            if not all(m > 0 for m in minors):
                failures.append((n, degree, minors))
    record(8, "Gram matrices at q = 1/2 have positive leading minors, n <= 2, degree <= 3", failures)


def test_criterion_09_elementary_expansion():
    failures = [(n, k) for n in range(1, 5) for k in range(1, n + 1) if not prop8_identity_check(n, k)]
    record(9, "e_(n-k) expands in q-factorial Schur polynomials, 1 <= k <= n <= 4", failures)


def test_criterion_10_x_and_y_spectra():
    failures = []
    for n in (1, 2, 3):
        for lam in partitions(n, 3):
            for k in range(1, n + 1):
                if not prop7_spectral_check(n, k, lam):
                    failures.append((n, k, tuple(lam)))
    record(10, "x_k spectrum is the y_m ratio on every line, n <= 3, l_1 <= 3 (exact, no factor)", failures)


def test_criterion_11_classical_limit():
    failures = []
    for n in (1, 2, 3):
        for lam in partitions(n, 3):
            for k in range(1, n + 1):
                value = thm1(n, k, lam).divide_exact((1 - Q**2) ** k)
                classical = spectral_rhs(SpectralFormula("Classical", k), n, lam)
                if value.eval_at(1) != classical:
                    failures.append((n, k, tuple(lam)))
    record(11, "(1 - q^2)^-k times the eigenvalue tends to the classical value at q = 1", failures)


def test_criterion_12_engine_health():
    start = time.perf_counter()
    ids = expand("pbw_dims") + expand("confluence_strategy") + expand("associativity")
    entries = run_suite(ids).entries
    elapsed = time.perf_counter() - start
    failures = [(e.check.name, e.check.params, e.witness) for e in entries if e.status != "pass"]
    assert all(e.check.kwargs["triples"] == 100 for e in entries if e.check.name == "associativity")
    if elapsed > 60:
        failures.append(f"took {elapsed:.1f} s")
    record(12, "PBW counts, leftmost/rightmost confluence, associativity on 100 triples", failures,
           f"{len(entries)} checks in {elapsed:.1f} s")


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    for test in tests:
        try:
            test()
        except AssertionError:
            pass
    for number in sorted(ACCEPTANCE_RESULTS):
        ok, title, detail = ACCEPTANCE_RESULTS[number]
        print(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {title}" + (f"  ({detail})" if detail else ""))
    sys.exit(0 if all(v[0] for v in ACCEPTANCE_RESULTS.values()) else 1)
