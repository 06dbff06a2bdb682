"""Exact Laurent polynomials in ``q`` over the rationals.

A :class:`Scalar` is an immutable sparse map ``exponent -> coefficient`` with
no zero coefficients stored, so two equal values always have identical
representations.  Coefficients are ``int`` whenever integral and
``fractions.Fraction`` otherwise.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational

__all__ = ["Scalar", "NotDivisible", "ZERO", "ONE", "Q", "QINV", "as_scalar"]


class NotDivisible(ArithmeticError):
    """Raised when an exact division has a nonzero remainder."""


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c.numerator)
    return c


class Scalar:
    """Element of Q[q, q^-1]."""

    __slots__ = ("_t", "_hash")

    def __init__(self, terms=None):
        t = {}
        if terms:
            for e, c in terms.items():
                if c:
                    t[int(e)] = _norm(c)
        self._t = t
        self._hash = None

    @classmethod
    def _raw(cls, t):
        # t must already be canonical
        s = cls.__new__(cls)
        s._t = t
        s._hash = None
        return s

    @classmethod
    def const(cls, c) -> "Scalar":
        return cls({0: c}) if c else ZERO

    @classmethod
    def monomial(cls, e: int, c=1) -> "Scalar":
        return cls({e: c})

    # -- inspection -----------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._t)

    def items(self):
        """Pairs ``(exponent, coefficient)`` in increasing exponent order."""
        return sorted(self._t.items())

    def is_zero(self) -> bool:
        return not self._t

    def is_monomial(self) -> bool:
        return len(self._t) == 1

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and 0 in self._t)

    def constant_term(self):
        return self._t.get(0, 0)

    def min_exp(self) -> int:
        return min(self._t)

    def max_exp(self) -> int:
        return max(self._t)

    def __bool__(self):
        return bool(self._t)

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self._t == other._t
        if isinstance(other, (int, Rational)):
            return self._t == ({0: other} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    # -- ring operations ------------------------------------------------
    def __add__(self, other):
        other = as_scalar(other)
        if other is None:
            return NotImplemented
        if not other._t:
            return self
        if not self._t:
            return other
        t = dict(self._t)
        for e, c in other._t.items():
            v = t.get(e, 0) + c
            if v:
                t[e] = _norm(v)
            else:
                t.pop(e, None)
        return Scalar._raw(t)

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw({e: -c for e, c in self._t.items()})

    def __sub__(self, other):
        other = as_scalar(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = as_scalar(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = as_scalar(other)
        if other is None:
            return NotImplemented
        a, b = self._t, other._t
        if not a or not b:
            return ZERO
        if len(b) == 1:
            (f, d), = b.items()
            return Scalar._raw({e + f: _norm(c * d) for e, c in a.items()})
        if len(a) == 1:
            (e, c), = a.items()
            return Scalar._raw({e + f: _norm(c * d) for f, d in b.items()})
        t = {}
        for e, c in a.items():
            for f, d in b.items():
                k = e + f
                t[k] = t.get(k, 0) + c * d
        return Scalar._raw({e: _norm(c) for e, c in t.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            if not self.is_monomial():
                raise NotDivisible(f"{self} is not a unit in Q[q, q^-1]")
            (e, c), = self._t.items()
            return Scalar({e * k: Fraction(1) / Fraction(c) ** -k})
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, other):
        return self.divide_exact(other)

    def bar(self) -> "Scalar":
        """The involution ``q -> q^-1``."""
        return Scalar._raw({-e: c for e, c in self._t.items()})

    def subs_power(self, k: int) -> "Scalar":
        """Substitute ``q -> q^k`` (``k`` a nonzero integer)."""
        if k == 0:
            raise ValueError("substitution q -> q^0 is not an automorphism")
        return Scalar._raw({e * k: c for e, c in self._t.items()})

    def shift(self, k: int) -> "Scalar":
        """Multiply by ``q^k``."""
        return Scalar._raw({e + k: c for e, c in self._t.items()})

    def divide_exact(self, other) -> "Scalar":
        """Return ``c`` with ``self == other * c``; raise :class:`NotDivisible` otherwise."""
        b = as_scalar(other)
        if b is None:
            raise TypeError(f"cannot divide by {other!r}")
        if not b._t:
            raise ZeroDivisionError("division by zero Scalar")
        if not self._t:
            return ZERO
        if len(b._t) == 1:
            (f, d), = b._t.items()
            return Scalar._raw({e - f: _norm(Fraction(c) / d) for e, c in self._t.items()})
        # Long division on q^(-min) normalised polynomials, highest degree first.
        bmin, bmax = b.min_exp(), b.max_exp()
        lowest = self.min_exp() - bmin  # no quotient exponent can lie below this
        lead = Fraction(b._t[bmax])
        rem = dict(self._t)
        quot = {}
        while rem:
            shift = max(rem) - bmax
            if shift < lowest:
                raise NotDivisible(f"{self} is not divisible by {b}")
            top = max(rem)
            c = _norm(Fraction(rem[top]) / lead)
            quot[shift] = c
            for f, d in b._t.items():
                k = f + shift
                v = rem.get(k, 0) - c * d
                if v:
                    rem[k] = v
                else:
                    rem.pop(k, None)
        return Scalar(quot)

    def eval_at(self, q0) -> Fraction:
        """Exact rational value at ``q = q0`` (``q0 != 0``)."""
        q0 = Fraction(q0)
        if q0 == 0:
            raise ZeroDivisionError("cannot evaluate a Laurent polynomial at q = 0")
        return sum((Fraction(c) * q0 ** e for e, c in self._t.items()), Fraction(0))

    # -- text -----------------------------------------------------------
    def render(self, var: str = "q") -> str:
        if not self._t:
            return "0"
        out = []
        for e, c in sorted(self._t.items()):
            neg = c < 0
            a = -c if neg else c
            if e == 0:
                body = str(a)
            else:
                mono = var if e == 1 else f"{var}^{e}"
                body = mono if a == 1 else f"{a}*{mono}"
            if not out:
                out.append(("-" if neg else "") + body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"Scalar({self.render()!r})"

    @classmethod
    def parse(cls, text: str, var: str = "q") -> "Scalar":
        """Parse the rendering produced by :meth:`render` (and any sum of such terms)."""
        gap = re.search(r"[\w/^]\s+[\w/^]", text)
        if gap:
            raise ValueError(f"missing operator in scalar {text!r} at position {gap.start() + 1}")
        s = re.sub(r"\s+", "", text)
        if not s:
            raise ValueError("empty scalar")
        term_re = re.compile(
            r"([+-]?)(?:(\d+(?:/\d+)?)(?:\*)?)?(%s(?:\^(-?\d+))?)?" % re.escape(var)
        )
        pos, total = 0, ZERO
        while pos < len(s):
            m = term_re.match(s, pos)
            if not m or m.end() == pos or (m.group(2) is None and m.group(3) is None):
                raise ValueError(f"cannot parse scalar {text!r} at position {pos}")
            if m.group(3) is None and s[m.end() - 1] == "*":
                raise ValueError(f"dangling '*' in scalar {text!r}")
            sign = -1 if m.group(1) == "-" else 1
            if pos > 0 and not m.group(1):
                raise ValueError(f"missing operator in scalar {text!r} at position {pos}")
            coef = Fraction(m.group(2)) if m.group(2) else Fraction(1)
            exp = 0
            if m.group(3):
                exp = int(m.group(4)) if m.group(4) else 1
            total = total + Scalar({exp: sign * coef})
            pos = m.end()
        return total


def as_scalar(x):
    """Coerce ints, Fractions and Scalars to :class:`Scalar`; ``None`` otherwise."""
    if isinstance(x, Scalar):
        return x
    if isinstance(x, bool):
        return None
    if isinstance(x, (int, Rational)):
        return Scalar({0: x}) if x else ZERO
    return None


ZERO = Scalar._raw({})
ONE = Scalar._raw({0: 1})
Q = Scalar._raw({1: 1})
QINV = Scalar._raw({-1: 1})
