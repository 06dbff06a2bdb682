"""Named exact checks, their parameter grids, and the JSON report.

Every check returns ``(status, witness, correction_factor)``; failures are data,
never exceptions.  ``run_suite`` fans checks out over processes and sorts the
entries, so the report does not depend on the degree of parallelism.
"""

from __future__ import annotations

import itertools
import json
import random
import time
from fractions import Fraction
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import comb
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .fock import (
    NotProportional,
    eigenvalue_on,
    gram_matrix,
    leading_principal_minors,
    partitions,
)
from .ncalg import (
    NcPoly,
    Presentation,
    RewriteBudgetExceeded,
    bigraded_dimension,
    graded_dimension,
    rewrite,
)
from .qmatrices import (
    DegreeMismatch,
    apply_involution,
    build_x,
    build_y,
    defining_relations,
    det_q,
    equal_mod_det_factor,
    hol_mat,
    jn_map,
    pol_mat,
    qmat2n,
    sigma,
    x_summands,
)
from .scalars import ONE, Q, Scalar
from .symfun import (
    SpectralFormula,
    monomial_ratio,
    x_from_y_sides,
    elementary_expansion_sides,
    spectral_rhs,
)

__all__ = [
    "CHECK_NAMES",
    "CheckId",
    "ReportEntry",
    "VerificationReport",
    "default_grid",
    "expand",
    "run_check",
    "run_suite",
    "check_associativity",
    "check_confluence",
    "check_pbw_dims",
]

PASS = "pass"
FAIL = "fail"
CONVENTION = "pass-with-convention-factor"

CHECK_NAMES = (
    "pbw_dims",
    "associativity",
    "confluence_strategy",
    "det_central",
    "star_involution",
    "commutativity_y",
    "coroll1",
    "jn_homomorphism",
    "gram_positivity",
    "theorem1",
    "lemma_sigma",
    "xk_two_forms",
    "prop8",
    "prop7_spectral",
    "thm1_vs_y1",
    "classical_limit",
)


@dataclass(frozen=True)
class CheckId:
    name: str
    params: Tuple[Tuple[str, object], ...] = ()

    @classmethod
    def of(cls, name: str, **params) -> "CheckId":
        if name not in CHECK_NAMES:
            raise ValueError(f"unknown check {name!r}")
        norm = {k: tuple(v) if isinstance(v, list) else v for k, v in params.items()}
        return cls(name, tuple(sorted(norm.items())))

    @property
    def kwargs(self) -> Dict[str, object]:
        return dict(self.params)

    def sort_key(self):
        return (CHECK_NAMES.index(self.name), self.name, self.params)


@dataclass(frozen=True)
class ReportEntry:
    check: CheckId
    status: str
    witness: Optional[str] = None
    correction_factor: Optional[str] = None
    millis: int = 0

    def to_dict(self, timing: bool = True) -> dict:
        out = {
            "check": self.check.name,
            "params": {k: list(v) if isinstance(v, tuple) else v for k, v in self.check.params},
            "status": self.status,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        if self.correction_factor is not None:
            out["correction_factor"] = self.correction_factor
        if timing:
            out["millis"] = self.millis
        return out


@dataclass(frozen=True)
class VerificationReport:
    entries: Tuple[ReportEntry, ...]

    @property
    def failed(self) -> List[ReportEntry]:
        return [e for e in self.entries if e.status == FAIL]

    @property
    def ok(self) -> bool:
        return not self.failed

    def to_json(self, timing: bool = True) -> str:
        return json.dumps([e.to_dict(timing) for e in self.entries], indent=2, sort_keys=True)


# -- witnesses ----------------------------------------------------------------

def _poly_witness(lhs: NcPoly, rhs: NcPoly) -> Optional[str]:
    diff = lhs.first_difference(rhs)
    if diff is None:
        return None
    word, a, b = diff
    return f"{lhs.algebra.render_word(word) or '1'}: {a.render()} vs {b.render()}"


def _scalar_witness(a: Scalar, b: Scalar) -> Optional[str]:
    return None if a == b else f"{a.render()} vs {b.render()}"


def _verdict(witness: Optional[str]):
    return (PASS, None, None) if witness is None else (FAIL, witness, None)


# -- engine health ------------------------------------------------------------

def _algebra(name: str, n: int) -> Presentation:
    return {"HolMat": hol_mat, "PolMat": pol_mat, "QMat2n": qmat2n}[name](n)


def _random_canonical_word(rng: random.Random, alg: Presentation, length: int):
    # a raw random word; normal-ordering it gives a random element
    return tuple(rng.randrange(alg.ngens) for _ in range(length))


def _random_element(rng: random.Random, alg: Presentation, max_len: int, terms: int = 2) -> NcPoly:
    expr = {}
    for _ in range(terms):
        w = _random_canonical_word(rng, alg, rng.randint(0, max_len))
        expr[w] = Scalar.monomial(rng.randint(-1, 1), rng.choice([1, -1, 2]))
    return NcPoly.from_words(alg, expr)


def check_pbw_dims(alg: Presentation, max_degree: int, max_anti: int = 0):
    """Canonical word counts against the commutative counts ``C(N+d-1, d)``."""
    if any(alg.blocks):
        per_block = alg.ngens // 2
        for a in range(max_degree + 1):
            for b in range(min(max_anti, max_degree - a) + 1):
                got = bigraded_dimension(alg, a, b)
                want = comb(per_block + a - 1, a) * comb(per_block + b - 1, b)
                if got != want:
                    return FAIL, f"bidegree ({a},{b}): {got} canonical words, expected {want}", None
    for d in range(max_degree + 1):
        got = graded_dimension(alg, d)
        want = comb(alg.ngens + d - 1, d)
        if got != want:
            return FAIL, f"degree {d}: {got} canonical words, expected {want}", None
    return PASS, None, None


def check_associativity(alg: Presentation, triples: int = 100, seed: int = 0, max_len: int = 3):
    rng = random.Random(seed)
    for _ in range(triples):
        a, b, c = (_random_element(rng, alg, max_len, 1) for _ in range(3))
        w = _poly_witness((a * b) * c, a * (b * c))
        if w is not None:
            return FAIL, w, None
    return PASS, None, None


def check_confluence(alg: Presentation, samples: int = 50, seed: int = 0, max_len: int = 5):
    """Leftmost and rightmost rewriting agree with the memoised normal form.

    Every critical overlap ``x y z`` with ``x > y > z`` is tried, then random words.
    """
    words = [w for w in itertools.combinations(range(alg.ngens - 1, -1, -1), 3)]
    rng = random.Random(seed)
    words += [_random_canonical_word(rng, alg, rng.randint(2, max_len)) for _ in range(samples)]
    for w in words:
        expr = {w: ONE}
        left = rewrite(expr, alg, "leftmost")
        right = rewrite(expr, alg, "rightmost")
        wit = _poly_witness(left, right)
        if wit is None:
            wit = _poly_witness(left, NcPoly.from_words(alg, expr))
        if wit is not None:
            return FAIL, f"{alg.render_word(w)} -> {wit}", None
    return PASS, None, None


def _det_central(n: int):
    alg = hol_mat(n)
    d = det_q(alg, "z")
    for label in alg.labels:
        g = alg.gen(label)
        w = _poly_witness(d * g, g * d)
        if w is not None:
            return FAIL, f"[det_q, {label}] {w}", None
    return PASS, None, None


def _star_involution(n: int, samples: int, seed: int):
    alg = pol_mat(n)
    star = lambda f: apply_involution("star_pol", f)  # noqa: E731
    rng = random.Random(seed)
    for _ in range(samples):
        f, g = (_random_element(rng, alg, 4) for _ in range(2))
        w = _poly_witness(star(star(f)), f) or _poly_witness(star(f * g), star(g) * star(f))
        if w is not None:
            return FAIL, w, None
    return PASS, None, None


# -- Pol(Mat_n) identities ----------------------------------------------------

def _commutativity_y(n: int):
    ys = [build_y(n, k) for k in range(1, n + 1)]
    for i, j in itertools.combinations(range(n), 2):
        w = _poly_witness(ys[i] * ys[j], ys[j] * ys[i])
        if w is not None:
            return FAIL, f"y{i + 1} y{j + 1}: {w}", None
    return PASS, None, None


def _y1_det_relation(n: int):
    alg = pol_mat(n)
    y1, d = build_y(n, 1), det_q(alg, "z")
    lhs = y1 * d
    rhs = d * (y1 + Q ** (-2 * n) - 1) * Q ** 2
    return _verdict(_poly_witness(lhs, rhs))


def _jn_homomorphism(n: int, pairs: int, seed: int):
    src = pol_mat(n)
    for (g, h), expr in defining_relations(src):
        img = jn_map(NcPoly(src, {w: c for w, c in expr.items() if c}))
        if not img.is_zero():
            return FAIL, f"relation {src.render_word((g, h))}: image {img.render()}", None
    rng = random.Random(seed)
    for _ in range(pairs):
        f, g = (_random_element(rng, src, 3) for _ in range(2))
        w = _poly_witness(jn_map(f * g), jn_map(f) * jn_map(g))
        if w is not None:
            return FAIL, w, None
        star = lambda x: apply_involution("star_pol", x)  # noqa: E731
        w = _poly_witness(jn_map(star(f)), star(jn_map(f)))
        if w is not None:
            return FAIL, f"star compatibility: {w}", None
    return PASS, None, None


def _gram_positivity(n: int, degree: int, q: str):
    q0 = Fraction(q)
    gram = gram_matrix(n, degree)
    values = [[entry.eval_at(q0) for entry in row] for row in gram]
    for size, minor in enumerate(leading_principal_minors(values), start=1):
        if minor <= 0:
            return FAIL, f"leading minor of size {size} is {minor}", None
    return PASS, None, None


def _y_spectrum(n: int, k: int, lam):
    try:
        got = eigenvalue_on(build_y(n, k), lam)
    except NotProportional as exc:
        return FAIL, str(exc), None
    return _verdict(_scalar_witness(got, spectral_rhs(SpectralFormula("Thm1", k), n, lam)))


# -- C[M_2n] identities -------------------------------------------------------

def _sigma_symmetry(n: int, k: int):
    lhs = sigma(build_x(n, k))
    rhs = build_x(n, k, inverse=True) * Q ** (2 * k * k)
    return _verdict(_poly_witness(lhs, rhs))


def _measure_factor(a: NcPoly, b: NcPoly) -> Optional[Scalar]:
    """``c`` (a signed monomial) with ``a == c * b``, else ``None``."""
    if a.is_zero() or b.is_zero():
        return None
    word = next(iter(b.sorted_terms()))[0]
    c = monomial_ratio(a.coefficient(word), b.coefficient(word))
    if c is None or a != b * c:
        return None
    return c


def _xk_two_forms(n: int, k: int):
    """Compare the star form with the literal complementary-minor display.

    The factor is measured per (I, J) summand, required to be one signed
    monomial shared by all summands, and then confirmed on the whole sum.
    The two involutions must also agree on every minor in the sum.
    """
    alg = qmat2n(n)
    det = det_q(alg)
    star = list(x_summands(n, k, "star"))
    star2 = list(x_summands(n, k, "star2"))
    literal = list(x_summands(n, k, "complementary_literal"))
    factor = None
    for (rows, cols, p1, e1), (_, _, _, e2), (_, _, p3, e3) in zip(star, star2, literal):
        w = _poly_witness(e1, e2)
        if w is not None:
            return FAIL, f"star and star2 differ on I={rows}, J={cols}: {w}", None
        try:
            m, high, low = equal_mod_det_factor(e1 * p1, e3 * p3, n)
        except DegreeMismatch as exc:
            return FAIL, str(exc), None
        c = _measure_factor(high, low)
        if c is None:
            return FAIL, f"I={rows}, J={cols}: summands are not proportional modulo det", None
        if factor is not None and c != factor:
            return FAIL, f"I={rows}, J={cols}: factor {c.render()} differs from {factor.render()}", None
        factor = c
    total_star, total_literal = build_x(n, k, "star"), build_x(n, k, "complementary_literal")
    scaled = total_literal * factor * det ** (k - 1)
    w = _poly_witness(total_star, scaled)
    if w is not None:
        return FAIL, w, None
    w = _poly_witness(total_star, build_x(n, k) * det ** (k - 1))
    if w is not None:
        return FAIL, f"corrected display: {w}", None
    if factor == ONE:
        return PASS, None, None
    return CONVENTION, factor.render(), factor.render()


# -- formulas -----------------------------------------------------------------

def _elementary_expansion(n: int, k: int):
    lhs, rhs = elementary_expansion_sides(n, k)
    if lhs == rhs:
        return PASS, None, None
    diff = lhs - rhs
    e = max(diff.terms)
    mono = "*".join(f"x{i + 1}^{p}" for i, p in enumerate(e) if p) or "1"
    return FAIL, f"{mono}: {lhs.terms.get(e, 0)} vs {rhs.terms.get(e, 0)}", None


def _x_from_y(n: int, k: int, lam):
    lhs, rhs = x_from_y_sides(n, k, lam)
    if lhs == rhs:
        return PASS, None, None
    c = monomial_ratio(lhs, rhs)
    if c is not None:
        return CONVENTION, c.render(), c.render()
    return FAIL, _scalar_witness(lhs, rhs), None


def _first_eigenvalue(n: int, lam, via: str):
    y1 = spectral_rhs(SpectralFormula("Y1"), n, lam)
    if via == "fock":
        try:
            got = eigenvalue_on(build_y(n, 1), lam)
        except NotProportional as exc:
            return FAIL, str(exc), None
    else:
        got = spectral_rhs(SpectralFormula("Thm1", 1), n, lam)
    return _verdict(_scalar_witness(got, y1))


def _classical_limit(n: int, k: int, lam):
    value = spectral_rhs(SpectralFormula("Thm1", k), n, lam)
    try:
        reduced = value.divide_exact((1 - Q ** 2) ** k)
    except ArithmeticError as exc:
        return FAIL, str(exc), None
    limit = reduced.eval_at(1)
    classical = spectral_rhs(SpectralFormula("Classical", k), n, lam).constant_term()
    return _verdict(None if limit == classical else f"{limit} vs {classical}")


def _pbw(algebra: str, n: int, max_degree: int, max_anti: int = 0):
    return check_pbw_dims(_algebra(algebra, n), max_degree, max_anti)


def _assoc(algebra: str, n: int, triples: int, seed: int):
    return check_associativity(_algebra(algebra, n), triples, seed)


def _confl(algebra: str, n: int, samples: int, seed: int):
    return check_confluence(_algebra(algebra, n), samples, seed)


_RUNNERS = {
    "pbw_dims": _pbw,
    "associativity": _assoc,
    "confluence_strategy": _confl,
    "det_central": _det_central,
    "star_involution": _star_involution,
    "commutativity_y": _commutativity_y,
    "coroll1": _y1_det_relation,
    "jn_homomorphism": _jn_homomorphism,
    "gram_positivity": _gram_positivity,
    "theorem1": lambda n, k, lam: _y_spectrum(n, k, lam),
    "lemma_sigma": _sigma_symmetry,
    "xk_two_forms": _xk_two_forms,
    "prop8": _elementary_expansion,
    "prop7_spectral": lambda n, k, lam: _x_from_y(n, k, lam),
    "thm1_vs_y1": lambda n, lam, via: _first_eigenvalue(n, lam, via),
    "classical_limit": lambda n, k, lam: _classical_limit(n, k, lam),
}


# -- grids --------------------------------------------------------------------

_ALGEBRAS = (("HolMat", 1), ("HolMat", 2), ("HolMat", 3), ("PolMat", 1), ("PolMat", 2), ("QMat2n", 1), ("QMat2n", 2))


def _lam_grid(ns: Iterable[int], bound):
    for n in ns:
        b = bound(n) if callable(bound) else bound
        for lam in partitions(n, b):
            yield n, tuple(lam)


def _fock_bound(n: int) -> int:
    return 3 if n <= 2 else 2


def expand(name: str, n: Optional[Sequence[int]] = None, lambda_max: Optional[int] = None,
           k: Optional[Sequence[int]] = None) -> List[CheckId]:
    """One CheckId per parameter point of the named check.

    ``n`` and ``k`` restrict the grid; ``lambda_max`` replaces the default
    bound on the largest part.
    """
    if name not in CHECK_NAMES:
        raise ValueError(f"unknown check {name!r}")
    ns = None if n is None else tuple(n)

    def pick(default):
        return tuple(default) if ns is None else ns

    def ks(m):
        return [v for v in range(1, m + 1) if k is None or v in k]

    bound = lambda_max if lambda_max is not None else None
    out: List[CheckId] = []
    if name in ("pbw_dims", "associativity", "confluence_strategy"):
        for alg, m in _ALGEBRAS:
            if ns is not None and m not in ns:
                continue
            if name == "pbw_dims":
                extra = {"max_anti": 4} if alg == "PolMat" else {}
                out.append(CheckId.of(name, algebra=alg, n=m, max_degree=4, **extra))
            elif name == "associativity":
                out.append(CheckId.of(name, algebra=alg, n=m, triples=100, seed=0))
            else:
                out.append(CheckId.of(name, algebra=alg, n=m, samples=50, seed=0))
    elif name == "det_central":
        out = [CheckId.of(name, n=m) for m in pick((1, 2, 3))]
    elif name == "star_involution":
        out = [CheckId.of(name, n=m, samples=20, seed=0) for m in pick((1, 2))]
    elif name in ("commutativity_y", "coroll1"):
        out = [CheckId.of(name, n=m) for m in pick((1, 2, 3))]
    elif name == "jn_homomorphism":
        out = [CheckId.of(name, n=m, pairs=50, seed=0) for m in pick((2, 3)) if m >= 2]
    elif name == "gram_positivity":
        out = [CheckId.of(name, n=m, degree=d, q="1/2") for m in pick((1, 2)) for d in range(4)]
    elif name in ("theorem1", "classical_limit", "prop7_spectral"):
        default_bound = _fock_bound if name == "theorem1" else 3
        for m, lam in _lam_grid(pick((1, 2, 3)), bound if bound is not None else default_bound):
            out += [CheckId.of(name, n=m, k=v, lam=lam) for v in ks(m)]
    elif name in ("lemma_sigma", "xk_two_forms"):
        out = [CheckId.of(name, n=m, k=v) for m in pick((1, 2)) for v in ks(m)]
    elif name == "prop8":
        out = [CheckId.of(name, n=m, k=v) for m in pick((1, 2, 3, 4)) for v in ks(m)]
    elif name == "thm1_vs_y1":
        for m, lam in _lam_grid(pick((1, 2, 3, 4)), bound if bound is not None else 4):
            out.append(CheckId.of(name, n=m, lam=lam, via="formula"))
        for m, lam in _lam_grid(pick((1, 2, 3)), bound if bound is not None else _fock_bound):
            out.append(CheckId.of(name, n=m, lam=lam, via="fock"))
    return sorted(out, key=CheckId.sort_key)


def default_grid(names: Optional[Sequence[str]] = None) -> List[CheckId]:
    names = CHECK_NAMES if names is None else names
    return [cid for name in names for cid in expand(name)]


# -- running ------------------------------------------------------------------

def run_check(cid: CheckId) -> ReportEntry:
    start = time.perf_counter()
    try:
        status, witness, factor = _RUNNERS[cid.name](**cid.kwargs)
    except (RewriteBudgetExceeded, ArithmeticError, ValueError) as exc:
        status, witness, factor = FAIL, f"{type(exc).__name__}: {exc}", None
    millis = int((time.perf_counter() - start) * 1000)
    return ReportEntry(cid, status, witness, factor, millis)


def run_suite(selection: Sequence[CheckId], parallelism: int = 1) -> VerificationReport:
    ids = sorted(set(selection), key=CheckId.sort_key)
    if parallelism > 1 and len(ids) > 1:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            entries = list(pool.map(run_check, ids))
    else:
        entries = [run_check(cid) for cid in ids]
    return VerificationReport(tuple(entries))
