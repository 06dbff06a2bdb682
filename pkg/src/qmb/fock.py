"""The Fock representation of Pol(Mat_n)_q.

The module is ``H = C[Mat_n]_q v0`` with every starred generator killing
``v0``.  A vector is stored as a map from canonical unstarred words ``w`` to
coefficients, the word standing for ``w v0``.  Since starred letters are
rightmost in canonical words, acting by an element amounts to normal-ordering
and dropping every word that still ends in a starred letter; here that
filtering is done eagerly while a starred letter is commuted to the right.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, Mapping, Sequence, Tuple

from .ncalg import NcPoly, Presentation, _acc, _acc_scaled
from .qmatrices import apply_involution, det_q, pol_mat, qminor
from .scalars import ONE, ZERO, NotDivisible, Scalar, as_scalar

__all__ = [
    "FockVector",
    "Partition",
    "NotProportional",
    "vacuum",
    "fock_apply",
    "fock_apply_literal",
    "inner_product",
    "u_lambda",
    "eigenvalue_on",
    "partitions",
    "monomial_basis",
    "gram_matrix",
    "leading_principal_minors",
]

Word = Tuple[int, ...]


class NotProportional(ArithmeticError):
    """The image of ``u_lambda`` is not a scalar multiple of ``u_lambda``."""


class Partition(tuple):
    """Weakly decreasing tuple of nonnegative integers."""

    def __new__(cls, parts: Sequence[int]):
        parts = tuple(int(p) for p in parts)
        if any(p < 0 for p in parts):
            raise ValueError(f"partition parts must be nonnegative: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"partition parts must be weakly decreasing: {parts}")
        return super().__new__(cls, parts)

    def __repr__(self):
        return f"Partition({tuple(self)})"

    def render(self) -> str:
        return "(" + ",".join(str(p) for p in self) + ")"


def partitions(n: int, max_part: int) -> Iterator[Partition]:
    """All partitions with exactly ``n`` parts (zeros allowed) and ``parts[0] <= max_part``.

    Generated in lexicographic order of the parts.
    """
    for combo in itertools.combinations_with_replacement(range(max_part + 1), n):
        yield Partition(sorted(combo, reverse=True))


@dataclass(frozen=True, eq=False)
class FockVector:
    algebra: Presentation
    terms: Mapping[Word, Scalar] = field(default_factory=dict)

    def __post_init__(self):
        blocks = self.algebra.blocks
        for w in self.terms:
            if any(blocks[x] for x in w):
                raise ValueError("Fock vectors contain no starred letters")

    def __add__(self, other: "FockVector") -> "FockVector":
        t = dict(self.terms)
        for w, c in other.terms.items():
            _acc(t, w, c)
        return FockVector(self.algebra, t)

    def __sub__(self, other: "FockVector") -> "FockVector":
        return self + other * -1

    def __mul__(self, c) -> "FockVector":
        c = as_scalar(c)
        if c is None:
            return NotImplemented
        if not c:
            return FockVector(self.algebra, {})
        return FockVector(self.algebra, {w: d * c for w, d in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, FockVector):
            return NotImplemented
        return self.algebra is other.algebra and dict(self.terms) == dict(other.terms)

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, word) -> Scalar:
        return self.terms.get(tuple(word), ZERO)

    def as_element(self) -> NcPoly:
        """The holomorphic element ``g`` with ``self = g v0``."""
        return NcPoly(self.algebra, dict(self.terms))

    def render(self) -> str:
        text = self.as_element().render()
        return text if text == "0" else f"({text})*v0"

    def __repr__(self):
        return f"FockVector[{self.algebra.name}]({self.render()!r})"


def vacuum(n: int) -> FockVector:
    return FockVector(pol_mat(n), {(): ONE})


def _caches(alg: Presentation):
    return alg.__dict__.setdefault("_fock_star_cache", {})


def _star_act(alg: Presentation, g: int, u: Word) -> Dict[Word, Scalar]:
    """``g u v0`` for a starred letter ``g`` and canonical holomorphic ``u``."""
    if not u:
        return {}
    cache = _caches(alg)
    key = (g, u)
    hit = cache.get(key)
    if hit is not None:
        return hit
    out: Dict[Word, Scalar] = {}
    rest = u[1:]
    for w, c in alg.rules[(g, u[0])]:
        if not w:
            _acc(out, rest, c)
            continue
        z, zs = w
        for v, d in _star_act(alg, zs, rest).items():
            _acc_scaled(out, alg.prepend(z, v), c * d)
    cache[key] = out
    return out


def _apply_word_terms(alg: Presentation, word: Word, terms: Mapping[Word, Scalar]) -> Dict[Word, Scalar]:
    blocks = alg.blocks
    cur = dict(terms)
    for x in reversed(word):
        nxt: Dict[Word, Scalar] = {}
        if blocks[x]:
            for u, c in cur.items():
                _acc_scaled(nxt, _star_act(alg, x, u), c)
        else:
            for u, c in cur.items():
                _acc_scaled(nxt, alg.prepend(x, u), c)
        cur = nxt
        if not cur:
            break
    return cur


def fock_apply(f: NcPoly, v: FockVector) -> FockVector:
    """``T_F(f) v``."""
    alg = f.algebra
    if v.algebra is not alg:
        raise ValueError("element and vector belong to different algebras")
    alg._enter()
    try:
        # group words by their starred tail so each tail acts on v once
        groups: Dict[Word, Dict[Word, Scalar]] = {}
        for w, c in f.terms.items():
            head, tail = alg._split(w)
            groups.setdefault(tail, {})[head] = c
        out: Dict[Word, Scalar] = {}
        for tail, heads in groups.items():
            partial = _apply_word_terms(alg, tail, v.terms)
            if not partial:
                continue
            for head, c in heads.items():
                _acc_scaled(out, _apply_word_terms(alg, head, partial), c)
        return FockVector(alg, out)
    finally:
        alg._exit()


def fock_apply_literal(f: NcPoly, v: FockVector) -> FockVector:
    """Reference path: full normal form of ``f g`` then deletion of starred words."""
    alg = f.algebra
    prod = f * v.as_element()
    blocks = alg.blocks
    return FockVector(alg, {w: c for w, c in prod.terms.items() if not any(blocks[x] for x in w)})


def inner_product(v: FockVector, w: FockVector) -> Scalar:
    """``(v, w)``: the ``v0`` coefficient of ``g* v`` where ``w = g v0``.

    Coefficients of ``w`` enter through the involution, which fixes every
    scalar because ``q`` is real.
    """
    if v.algebra is not w.algebra:
        raise ValueError("vectors belong to different Fock spaces")
    g_star = apply_involution("star_pol", w.as_element())
    return fock_apply(g_star, v).coefficient(())


def u_lambda(n: int, lam: Sequence[int]) -> FockVector:
    """``det^{l_n} prod_j (leading j-minor)^{l_j - l_{j+1}} v0``."""
    lam = Partition(lam)
    if len(lam) != n:
        raise ValueError(f"partition must have {n} parts, got {len(lam)}")
    alg = pol_mat(n)
    elem = det_q(alg, "z") ** lam[-1]
    for j in range(1, n):
        lead = tuple(range(1, j + 1))
        elem = elem * qminor(alg, "z", lead, lead) ** (lam[j - 1] - lam[j])
    return FockVector(alg, dict(elem.terms))


def eigenvalue_on(f: NcPoly, lam: Sequence[int]) -> Scalar:
    """Scalar by which ``f`` acts on ``u_lambda``; :class:`NotProportional` if it does not."""
    n = f.algebra.kind.n
    u = u_lambda(n, lam)
    w = fock_apply(f, u)
    word, base = min(u.terms.items(), key=lambda t: (-len(t[0]), t[0]))
    try:
        c = w.coefficient(word).divide_exact(base)
    except NotDivisible as exc:
        raise NotProportional(str(exc)) from exc
    if w != u * c:
        raise NotProportional(f"T_F(f) u_lambda is not a multiple of u_lambda for lambda={tuple(lam)}")
    return c


def monomial_basis(n: int, degree: int):
    """Canonical holomorphic words of the given degree (a basis of ``H_degree``)."""
    alg = pol_mat(n)
    rules = alg.rules
    words = [()]
    for _ in range(degree):
        words = [w + (x,) for w in words for x in range(n * n) if not w or (w[-1], x) not in rules]
    return [FockVector(alg, {w: ONE}) for w in words]


def gram_matrix(n: int, degree: int):
    basis = monomial_basis(n, degree)
    return [[inner_product(v, w) for w in basis] for v in basis]


def _det(a) -> Fraction:
    a = [list(row) for row in a]
    size = len(a)
    det = Fraction(1)
    for i in range(size):
        piv = next((r for r in range(i, size) if a[r][i] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != i:
            a[i], a[piv] = a[piv], a[i]
            det = -det
        det *= a[i][i]
        for r in range(i + 1, size):
            factor = a[r][i] / a[i][i]
            if factor:
                for c in range(i, size):
                    a[r][c] -= factor * a[i][c]
    return det


def leading_principal_minors(matrix) -> list:
    """Exact leading principal minors of a square matrix of rationals."""
    a = [[Fraction(x) for x in row] for row in matrix]
    size = len(a)
    minors = []
    det = Fraction(1)
    for i in range(size):
        piv = a[i][i]
        if piv == 0:
            # elimination without pivoting breaks down; finish directly
            minors.extend(_det([row[:k] for row in a[:k]]) for k in range(i + 1, size + 1))
            return minors
        det *= piv
        minors.append(det)
        for r in range(i + 1, size):
            factor = a[r][i] / piv
            if factor:
                for c in range(i, size):
                    a[r][c] -= factor * a[i][c]
    return minors
