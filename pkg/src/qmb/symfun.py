"""Commutative q-combinatorics and the closed-form spectra.

``MultiPoly`` is a sparse polynomial in commuting ``x1..xn`` with
:class:`~qmb.scalars.Scalar` coefficients.  Factorial Schur polynomials are
built as an exact determinant divided exactly by the Vandermonde product.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Sequence, Tuple

from .qmatrices import permutation_inversions
from .scalars import ONE, Q, ZERO, NotDivisible, Scalar, as_scalar

__all__ = [
    "MultiPoly",
    "SpectralFormula",
    "q_binomial",
    "elementary_symmetric",
    "factorial_schur",
    "spectral_point",
    "spectral_rhs",
    "elementary_expansion_sides",
    "prop8_identity_check",
    "x_from_y_sides",
    "prop7_spectral_check",
    "monomial_ratio",
]

Exps = Tuple[int, ...]


class MultiPoly:
    """Polynomial in ``nvars`` commuting variables over Q[q, q^-1]."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Dict[Exps, Scalar] | None = None):
        self.nvars = nvars
        self.terms = {}
        for e, c in (terms or {}).items():
            c = as_scalar(c)
            if c:
                if len(e) != nvars:
                    raise ValueError(f"exponent vector {e} has wrong length")
                self.terms[tuple(e)] = c

    @classmethod
    def const(cls, nvars: int, c) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, i: int) -> "MultiPoly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): ONE})

    def _lift(self, other):
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars:
                raise ValueError("polynomials in different numbers of variables")
            return other
        c = as_scalar(other)
        return None if c is None else MultiPoly.const(self.nvars, c)

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        t = dict(self.terms)
        for e, c in other.terms.items():
            v = t.get(e, ZERO) + c
            if v:
                t[e] = v
            else:
                t.pop(e, None)
        return MultiPoly(self.nvars, t)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        t: Dict[Exps, Scalar] = {}
        for e, c in self.terms.items():
            for f, d in other.terms.items():
                k = tuple(a + b for a, b in zip(e, f))
                t[k] = t.get(k, ZERO) + c * d
        return MultiPoly(self.nvars, t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = MultiPoly.const(self.nvars, ONE)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.terms

    def substitute(self, values: Sequence) -> Scalar:
        """Evaluate at Scalar (or rational) points."""
        vals = [as_scalar(v) for v in values]
        if len(vals) != self.nvars or any(v is None for v in vals):
            raise ValueError(f"need {self.nvars} scalar values")
        total = ZERO
        for e, c in self.terms.items():
            term = c
            for v, k in zip(vals, e):
                if k:
                    term = term * v ** k
            total = total + term
        return total

    def swap(self, i: int, j: int) -> "MultiPoly":
        def sw(e):
            e = list(e)
            e[i], e[j] = e[j], e[i]
            return tuple(e)

        return MultiPoly(self.nvars, {sw(e): c for e, c in self.terms.items()})

    def divide_linear(self, i: int, j: int) -> "MultiPoly":
        """Exact quotient by ``x_i - x_j``; :class:`NotDivisible` on a nonzero remainder."""
        rem = dict(self.terms)
        quot: Dict[Exps, Scalar] = {}
        while True:
            live = [e for e in rem if e[i] > 0]
            if not live:
                break
            # peel off the term of highest x_i degree: c*m = (x_i - x_j) * c*m/x_i + c*m*x_j/x_i
            e = max(live, key=lambda e: (e[i], e))
            c = rem.pop(e)
            f = list(e)
            f[i] -= 1
            f = tuple(f)
            quot[f] = quot.get(f, ZERO) + c
            g = list(f)
            g[j] += 1
            g = tuple(g)
            v = rem.get(g, ZERO) + c
            if v:
                rem[g] = v
            else:
                rem.pop(g, None)
        if rem:
            raise NotDivisible(f"polynomial is not divisible by x{i + 1} - x{j + 1}")
        return MultiPoly(self.nvars, quot)

    def render(self, var: str = "q", names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        names = list(names) if names else [f"x{i + 1}" for i in range(self.nvars)]
        pieces = []
        order = sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-k for k in t[0])))
        for e, c in order:
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            if not mono:
                text = c.render(var)
                if pieces and text.startswith("-"):
                    pieces.append(" - " + text[1:])
                else:
                    pieces.append((" + " if pieces else "") + text)
                continue
            if c.is_monomial():
                (x, a), = c.items()
                neg = a < 0
                coef = Scalar({x: -a if neg else a})
                body = mono if coef == ONE else f"{coef.render(var)}*{mono}"
            else:
                neg, body = False, f"({c.render(var)})*{mono}"
            if pieces:
                pieces.append((" - " if neg else " + ") + body)
            else:
                pieces.append(("-" if neg else "") + body)
        return "".join(pieces)

    def __repr__(self):
        return f"MultiPoly({self.render()!r})"


def _pochhammer(a: int) -> Scalar:
    # (q; q)_a
    out = ONE
    for i in range(1, a + 1):
        out = out * (1 - Q ** i)
    return out


@lru_cache(maxsize=None)
def q_binomial(a: int, b: int) -> Scalar:
    """Gaussian binomial ``(q;q)_a / ((q;q)_b (q;q)_{a-b})``."""
    if not (0 <= b <= a):
        raise ValueError(f"q_binomial needs 0 <= b <= a, got a={a}, b={b}")
    return _pochhammer(a).divide_exact(_pochhammer(b) * _pochhammer(a - b))


def elementary_symmetric(k: int, values: Sequence):
    """``e_k`` of the given values (Scalars or MultiPolys)."""
    values = list(values)
    if not 0 <= k <= len(values):
        raise ValueError(f"e_{k} of {len(values)} values is undefined")
    total = None
    for combo in itertools.combinations(values, k):
        term = ONE
        for v in combo:
            term = v * term
        total = term if total is None else total + term
    return total


def _det(matrix):
    size = len(matrix)
    total = None
    for perm in itertools.permutations(range(size)):
        term = -1 if permutation_inversions(perm) % 2 else 1
        for r, c in enumerate(perm):
            term = matrix[r][c] * term
        total = term if total is None else total + term
    return total


def _normalize_nu(nu: Sequence[int], n: int) -> Tuple[int, ...]:
    nu = tuple(int(v) for v in nu)
    if len(nu) > n:
        raise ValueError(f"partition {nu} has more than {n} parts")
    if any(v < 0 for v in nu) or any(a < b for a, b in zip(nu, nu[1:])):
        raise ValueError(f"{nu} is not a partition")
    return nu + (0,) * (n - len(nu))


@lru_cache(maxsize=None)
def _factorial_schur(nu: Tuple[int, ...], n: int, variant: str, param: Scalar) -> MultiPoly:
    xs = [MultiPoly.var(n, i) for i in range(n)]
    one = MultiPoly.const(n, ONE)
    if variant == "classical":
        shift = lambda m: Scalar.const(m)  # noqa: E731
    else:
        shift = lambda m: param ** m  # noqa: E731
    matrix = []
    for i in range(n):
        row = []
        for j in range(n):
            entry = one
            for m in range(nu[j] + n - (j + 1)):
                entry = entry * (xs[i] - shift(m))
            row.append(entry)
        matrix.append(row)
    poly = _det(matrix)
    for i in range(n):
        for j in range(i + 1, n):
            poly = poly.divide_linear(i, j)
    return poly


def factorial_schur(nu: Sequence[int], n: int, variant: str = "q", param=Q) -> MultiPoly:
    """Factorial Schur polynomial in ``x1..xn``.

    ``variant="q"`` uses the column entries ``prod_{m=0}^{nu_j+n-j-1} (x_i - p^m)``
    with ``p = param``; ``variant="classical"`` uses ``(x_i - m)``.
    """
    if variant not in ("q", "classical"):
        raise ValueError(f"unknown variant {variant!r}")
    p = as_scalar(param)
    if p is None:
        raise TypeError("param must be a Scalar or rational")
    return _factorial_schur(_normalize_nu(nu, n), n, variant, p)


@dataclass(frozen=True)
class SpectralFormula:
    tag: str  # "Thm1", "Y1", "Xk", "Classical"
    k: int = 1

    def __post_init__(self):
        if self.tag not in ("Thm1", "Y1", "Xk", "Classical"):
            raise ValueError(f"unknown spectral formula {self.tag!r}")


def spectral_point(n: int, lam: Sequence[int], power: int = 2):
    """``(q^{p(l_1+n-1)}, ..., q^{p l_n})``."""
    return [Q ** (power * (lam[i] + n - 1 - i)) for i in range(n)]


def _ones(k: int):
    return (1,) * k


def spectral_rhs(formula: SpectralFormula, n: int, lam: Sequence[int]) -> Scalar:
    lam = tuple(lam)
    if len(lam) != n:
        raise ValueError(f"partition must have {n} parts")
    k = formula.k
    if formula.tag != "Y1" and not 0 <= k <= n:
        raise ValueError(f"k must lie in 0..{n}")
    if formula.tag == "Thm1":
        if k == 0:
            return ONE
        const = Q ** (-k * (k - 1) - 2 * k * (n - k)) * (-1) ** k
        schur = factorial_schur(_ones(k), n, "q", Q ** 2)
        return const * schur.substitute(spectral_point(n, lam))
    if formula.tag == "Y1":
        return sum((Q ** (-2 * j) for j in range(n)), ZERO) - sum(
            (Q ** (2 * (lam[j] - j)) for j in range(n)), ZERO
        )
    if formula.tag == "Xk":
        return Q ** (k * (k - 1)) * elementary_symmetric(k, spectral_point(n, lam, -2))
    schur = factorial_schur(_ones(k), n, "classical")
    return schur.substitute([lam[i] + n - 1 - i for i in range(n)])


def elementary_expansion_sides(n: int, k: int) -> Tuple[MultiPoly, MultiPoly]:
    """Both sides of the expansion of ``e_{n-k}`` in q-factorial Schur polynomials ``s_{1^m}``."""
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in 1..{n}")
    zs = [MultiPoly.var(n, i) for i in range(n)]
    lhs = elementary_symmetric(n - k, zs)
    if not isinstance(lhs, MultiPoly):
        lhs = MultiPoly.const(n, lhs)
    lhs = lhs * Q ** (k * (k - 1) - n * (n - 1))
    rhs = MultiPoly(n)
    for m in range(n - k + 1):
        coef = Q ** (-m * (2 * n - m - 1)) * q_binomial(n - m, k).subs_power(-2)
        rhs = rhs + factorial_schur(_ones(m), n, "q", Q ** 2) * coef
    return lhs, rhs


def prop8_identity_check(n: int, k: int) -> bool:
    lhs, rhs = elementary_expansion_sides(n, k)
    return lhs == rhs


def x_from_y_sides(n: int, k: int, lam: Sequence[int]) -> Tuple[Scalar, Scalar]:
    """Cleared-denominator sides of the x_k / y_m relation on the line ``lam``."""
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in 1..{n}")
    ys = [spectral_rhs(SpectralFormula("Thm1", m), n, lam) for m in range(n + 1)]
    denom = sum(((-1) ** m * ys[m] for m in range(n + 1)), ZERO)
    numer = sum(
        ((-1) ** m * q_binomial(n - m, k).subs_power(-2) * ys[m] for m in range(n - k + 1)), ZERO
    )
    return spectral_rhs(SpectralFormula("Xk", k), n, lam) * denom, numer


def monomial_ratio(a: Scalar, b: Scalar):
    """``c`` with ``a == c * b`` when ``c`` is a single signed monomial, else ``None``."""
    if not a or not b:
        return None
    try:
        c = a.divide_exact(b)
    except NotDivisible:
        return None
    return c if c.is_monomial() and abs(next(iter(c.terms.values()))) == 1 else None


def prop7_spectral_check(n: int, k: int, lam: Sequence[int]) -> bool:
    lhs, rhs = x_from_y_sides(n, k, lam)
    return lhs == rhs
