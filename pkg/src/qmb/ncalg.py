"""Presented quadratic algebras and their normal forms.

An algebra is given by a totally ordered set of generators and one rewrite
rule ``g h -> sum c_w w`` for every ordered pair ``(g, h)`` with ``g > h``
that is not allowed to appear in a canonical word.  Right-hand sides hold
words of length at most two, and every length-two word on the right is
already canonical, so each rewrite strictly lowers ``(length, inversions)``.

Words are tuples of generator indices.  Normal forms are computed by
appending one letter at a time to a canonical word; the result of every
``(canonical word, letter)`` product is memoised on the presentation.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Dict, Iterable, Mapping, Sequence, Tuple

from .scalars import ONE, ZERO, Scalar, as_scalar

__all__ = [
    "Presentation",
    "NcPoly",
    "RewriteBudgetExceeded",
    "PresentationError",
    "normal_form",
    "rewrite",
    "graded_dimension",
    "bigraded_dimension",
]

Word = Tuple[int, ...]
Terms = Dict[Word, Scalar]

DEFAULT_STEP_BUDGET = 50_000_000


class RewriteBudgetExceeded(RuntimeError):
    """A single reduction used more rewrite steps than the configured budget."""


class PresentationError(ValueError):
    """The rule table violates the orientation or coverage requirements."""


def step_budget() -> int:
    raw = os.environ.get("QMB_STEP_BUDGET")
    return int(raw) if raw else DEFAULT_STEP_BUDGET


def _acc(target: Terms, word: Word, c: Scalar) -> None:
    v = target.get(word)
    if v is None:
        target[word] = c
    else:
        v = v + c
        if v:
            target[word] = v
        else:
            del target[word]


def _acc_scaled(target: Terms, source: Mapping[Word, Scalar], c: Scalar) -> None:
    if c == ONE:
        for w, d in source.items():
            _acc(target, w, d)
    else:
        for w, d in source.items():
            _acc(target, w, d * c)


class Presentation:
    """Generators, their total order, and the oriented quadratic rules.

    ``blocks`` assigns each generator to a block (0 or 1).  When given, every
    canonical word is a block-0 word followed by a block-1 word, and rules
    never mix blocks except for ``(block 1, block 0)`` pairs.  This lets
    products be split into a holomorphic part, a cross part and an
    antiholomorphic part.
    """

    def __init__(
        self,
        name: str,
        labels: Sequence[str],
        rules: Mapping[Tuple[int, int], Iterable[Tuple[Word, object]]],
        blocks: Sequence[int] | None = None,
        q: Scalar | None = None,
    ):
        self.name = name
        self.labels = tuple(labels)
        self.index = {lab: i for i, lab in enumerate(self.labels)}
        if len(self.index) != len(self.labels):
            raise PresentationError("duplicate generator labels")
        self.q = q
        self.blocks = tuple(blocks) if blocks is not None else (0,) * len(self.labels)
        table = {}
        for (g, h), rhs in rules.items():
            terms: Terms = {}
            for w, c in rhs:
                c = as_scalar(c)
                if c:
                    _acc(terms, tuple(w), c)
            table[(g, h)] = tuple(terms.items())
        self.rules = table
        self._validate()
        self._two_block = any(self.blocks)
        self._append_cache: Dict[Tuple[Word, int], Terms] = {}
        self._prepend_cache: Dict[Tuple[int, Word], Terms] = {}
        self._cross_cache: Dict[Tuple[Word, Word], Terms] = {}
        self._left = None
        self._depth = 0

    # -- construction checks ----------------------------------------------
    def _validate(self) -> None:
        ngen = len(self.labels)
        for (g, h), rhs in self.rules.items():
            if not (0 <= g < ngen and 0 <= h < ngen):
                raise PresentationError(f"rule on unknown generators {(g, h)}")
            if g <= h:
                raise PresentationError(
                    f"rule {self.labels[g]}*{self.labels[h]} does not remove an inversion"
                )
            for w, _ in rhs:
                if len(w) > 2:
                    raise PresentationError("right-hand sides must have length <= 2")
                if len(w) == 2 and (w[0] > w[1] or w in self.rules):
                    raise PresentationError(
                        f"rule {self.labels[g]}*{self.labels[h]} produces non-canonical "
                        f"{'*'.join(self.labels[x] for x in w)}"
                    )
        if any(b not in (0, 1) for b in self.blocks):
            raise PresentationError("blocks must be 0 or 1")
        for g in range(ngen):
            for h in range(ngen):
                if self.blocks[g] == 1 and self.blocks[h] == 0 and g < h:
                    raise PresentationError("block-1 generators must follow block-0 generators")

    def __repr__(self):
        return f"Presentation({self.name!r}, {len(self.labels)} generators, {len(self.rules)} rules)"

    @property
    def ngens(self) -> int:
        return len(self.labels)

    def is_canonical(self, word: Word) -> bool:
        rules = self.rules
        return all((word[i], word[i + 1]) not in rules for i in range(len(word) - 1))

    def bidegree(self, word: Word) -> Tuple[int, int]:
        b = sum(self.blocks[x] for x in word)
        return len(word) - b, b

    def render_word(self, word: Word) -> str:
        return "*".join(self.labels[x] for x in word)

    def gen(self, label: str) -> "NcPoly":
        return NcPoly(self, {(self.index[label],): ONE})

    def one(self) -> "NcPoly":
        return NcPoly(self, {(): ONE})

    def zero(self) -> "NcPoly":
        return NcPoly(self, {})

    def scalar(self, c) -> "NcPoly":
        c = as_scalar(c)
        return NcPoly(self, {(): c} if c else {})

    # -- budget ------------------------------------------------------------
    def _enter(self):
        if self._depth == 0:
            self._left = step_budget()
        self._depth += 1

    def _exit(self):
        self._depth -= 1

    def _charge(self):
        self._left -= 1
        if self._left < 0:
            raise RewriteBudgetExceeded(
                f"{self.name}: reduction exceeded {step_budget()} rewrite steps"
            )

    # -- core products -----------------------------------------------------
    def _append(self, u: Word, x: int) -> Terms:
        """Normal form of ``u * x`` for canonical ``u``."""
        key = (u, x)
        hit = self._append_cache.get(key)
        if hit is not None:
            return hit
        rhs = self.rules.get((u[-1], x)) if u else None
        if rhs is None:
            out = {u + (x,): ONE}
        else:
            self._charge()
            out: Terms = {}
            pre = u[:-1]
            for w, c in rhs:
                part: Terms = {pre: c}
                for y in w:
                    part = self._append_terms(part, y)
                for v, d in part.items():
                    _acc(out, v, d)
        self._append_cache[key] = out
        return out

    def _append_terms(self, terms: Mapping[Word, Scalar], x: int) -> Terms:
        out: Terms = {}
        for u, c in terms.items():
            _acc_scaled(out, self._append(u, x), c)
        return out

    def _fold(self, u: Word, w: Word) -> Terms:
        part: Terms = {u: ONE}
        for x in w:
            part = self._append_terms(part, x)
        return part

    def prepend(self, x: int, w: Word) -> Terms:
        """Normal form of ``x * w`` for canonical ``w``."""
        key = (x, w)
        hit = self._prepend_cache.get(key)
        if hit is not None:
            return hit
        rhs = self.rules.get((x, w[0])) if w else None
        if rhs is None:
            out = {(x,) + w: ONE}
        else:
            self._charge()
            out: Terms = {}
            rest = w[1:]
            for v, c in rhs:
                part: Terms = {rest: c}
                for y in reversed(v):
                    nxt: Terms = {}
                    for u, d in part.items():
                        _acc_scaled(nxt, self.prepend(y, u), d)
                    part = nxt
                for u, d in part.items():
                    _acc(out, u, d)
        self._prepend_cache[key] = out
        return out

    def _split(self, w: Word) -> Tuple[Word, Word]:
        blocks = self.blocks
        i = len(w)
        while i and blocks[w[i - 1]] == 1:
            i -= 1
        return w[:i], w[i:]

    def _cross(self, b: Word, a: Word) -> Terms:
        key = (b, a)
        hit = self._cross_cache.get(key)
        if hit is None:
            hit = self._fold(b, a)
            self._cross_cache[key] = hit
        return hit

    def mul_words(self, u: Word, w: Word) -> Terms:
        """Normal form of the product of two canonical words."""
        if not u:
            return {w: ONE}
        if not w:
            return {u: ONE}
        if (u[-1], w[0]) not in self.rules:
            return {u + w: ONE}
        if not self._two_block:
            return self._fold(u, w)
        a1, b1 = self._split(u)
        a2, b2 = self._split(w)
        if not b1:
            left = self._fold(a1, a2)
            return {v + b2: c for v, c in left.items()}
        if not a2:
            right = self._fold(b1, b2)
            return {a1 + v: c for v, c in right.items()}
        out: Terms = {}
        for v, c in self._cross(b1, a2).items():
            a, b = self._split(v)
            left = self._fold(a1, a) if a1 else {a: ONE}
            right = self._fold(b, b2) if b2 else {b: ONE}
            for lw, lc in left.items():
                lc = lc * c
                for rw, rc in right.items():
                    _acc(out, lw + rw, lc * rc)
        return out

    def mul_terms(self, f: Mapping[Word, Scalar], g: Mapping[Word, Scalar]) -> Terms:
        self._enter()
        try:
            out: Terms = {}
            for u, c in f.items():
                for w, d in g.items():
                    _acc_scaled(out, self.mul_words(u, w), c * d)
            return out
        finally:
            self._exit()

    def reduce(self, expr: Mapping[Word, object]) -> Terms:
        """Normal form of an arbitrary linear combination of (possibly non-canonical) words."""
        self._enter()
        try:
            out: Terms = {}
            for w, c in expr.items():
                c = as_scalar(c)
                if not c:
                    continue
                w = tuple(w)
                for x in w:
                    if not 0 <= x < self.ngens:
                        raise ValueError(f"letter {x} does not belong to {self.name}")
                _acc_scaled(out, self._fold((), w), c)
            return out
        finally:
            self._exit()

    def clear_caches(self) -> None:
        self._append_cache.clear()
        self._prepend_cache.clear()
        self._cross_cache.clear()


@dataclass(frozen=True, eq=False)
class NcPoly:
    """Linear combination of canonical words of one presentation."""

    algebra: Presentation
    terms: Mapping[Word, Scalar] = field(default_factory=dict)

    @classmethod
    def from_words(cls, algebra: Presentation, expr: Mapping[Word, object]) -> "NcPoly":
        return cls(algebra, algebra.reduce(expr))

    def _check(self, other: "NcPoly") -> None:
        if other.algebra is not self.algebra:
            raise ValueError(
                f"elements of different algebras: {self.algebra.name} vs {other.algebra.name}"
            )

    def _lift(self, other) -> "NcPoly | None":
        if isinstance(other, NcPoly):
            self._check(other)
            return other
        c = as_scalar(other)
        if c is None:
            return None
        return self.algebra.scalar(c)

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        t = dict(self.terms)
        for w, c in other.terms.items():
            _acc(t, w, c)
        return NcPoly(self.algebra, t)

    __radd__ = __add__

    def __neg__(self):
        return NcPoly(self.algebra, {w: -c for w, c in self.terms.items()})

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
        if isinstance(other, NcPoly):
            self._check(other)
            return NcPoly(self.algebra, self.algebra.mul_terms(self.terms, other.terms))
        c = as_scalar(other)
        if c is None:
            return NotImplemented
        if not c:
            return NcPoly(self.algebra, {})
        return NcPoly(self.algebra, {w: d * c for w, d in self.terms.items()})

    def __rmul__(self, other):
        c = as_scalar(other)
        if c is None:
            return NotImplemented
        return self * c

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = self.algebra.one()
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, NcPoly):
            return self.algebra is other.algebra and dict(self.terms) == dict(other.terms)
        c = as_scalar(other)
        if c is None:
            return NotImplemented
        return dict(self.terms) == ({(): c} if c else {})

    __hash__ = None

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def coefficient(self, word: Word) -> Scalar:
        return self.terms.get(tuple(word), ZERO)

    def degrees(self) -> set:
        return {len(w) for w in self.terms}

    def degree(self) -> int:
        """Total degree of a homogeneous element (``ValueError`` if mixed)."""
        ds = self.degrees()
        if len(ds) != 1:
            raise ValueError(f"element is not homogeneous (degrees {sorted(ds)})")
        return ds.pop()

    def sorted_terms(self):
        """Terms ordered by decreasing length, then by generator order."""
        return sorted(self.terms.items(), key=lambda t: (-len(t[0]), t[0]))

    def render(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for w, c in self.sorted_terms():
            if not w:
                text = c.render()
                if pieces and text.startswith("-"):
                    pieces.append(" - " + text[1:])
                else:
                    pieces.append((" + " if pieces else "") + text)
                continue
            word = self.algebra.render_word(w)
            if c.is_monomial():
                (e, a), = c.items()
                neg = a < 0
                mono = Scalar({e: -a if neg else a})
                body = word if mono == ONE else f"{mono.render()}*{word}"
            else:
                neg = False
                body = f"({c.render()})*{word}"
            if pieces:
                pieces.append((" - " if neg else " + ") + body)
            else:
                pieces.append(("-" if neg else "") + body)
        return "".join(pieces)

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"NcPoly[{self.algebra.name}]({self.render()!r})"

    def first_difference(self, other: "NcPoly"):
        """Smallest word (in render order) whose coefficients differ, with both coefficients."""
        self._check(other)
        words = set(self.terms) | set(other.terms)
        for w in sorted(words, key=lambda w: (-len(w), w)):
            a, b = self.coefficient(w), other.coefficient(w)
            if a != b:
                return w, a, b
        return None


def normal_form(expr: Mapping[Word, object], algebra: Presentation) -> NcPoly:
    return NcPoly.from_words(algebra, expr)


def rewrite(expr: Mapping[Word, object], algebra: Presentation, strategy: str = "leftmost") -> NcPoly:
    """Worklist reduction that always rewrites the leftmost or rightmost redex.

    Independent of the memoised product path; used as confluence evidence.
    """
    if strategy not in ("leftmost", "rightmost"):
        raise ValueError(f"unknown strategy {strategy!r}")
    rules = algebra.rules
    budget = step_budget()
    steps = 0
    out: Terms = {}
    stack = [(tuple(w), as_scalar(c)) for w, c in expr.items() if as_scalar(c)]
    while stack:
        w, c = stack.pop()
        positions = range(len(w) - 1)
        if strategy == "rightmost":
            positions = reversed(positions)
        for i in positions:
            rhs = rules.get((w[i], w[i + 1]))
            if rhs is not None:
                break
        else:
            _acc(out, w, c)
            continue
        steps += 1
        if steps > budget:
            raise RewriteBudgetExceeded(f"{algebra.name}: {strategy} rewriting exceeded {budget} steps")
        pre, post = w[:i], w[i + 2:]
        for v, d in rhs:
            stack.append((pre + v + post, c * d))
    return NcPoly(algebra, out)


def _transfer_counts(algebra: Presentation, degree: int, track_blocks: bool):
    # counts[(last letter, block-1 count)] over canonical words of current length
    counts = {(None, 0): 1}
    for _ in range(degree):
        nxt = {}
        for (last, b), n in counts.items():
            for x in range(algebra.ngens):
                if last is not None and (last, x) in algebra.rules:
                    continue
                key = (x, b + algebra.blocks[x] if track_blocks else 0)
                nxt[key] = nxt.get(key, 0) + n
        counts = nxt
    return counts


def graded_dimension(algebra: Presentation, degree: int) -> int:
    """Number of canonical words of the given length."""
    if degree < 0:
        raise ValueError("degree must be >= 0")
    return sum(_transfer_counts(algebra, degree, False).values())


def bigraded_dimension(algebra: Presentation, hol: int, anti: int) -> int:
    """Number of canonical words with ``hol`` block-0 and ``anti`` block-1 letters."""
    counts = _transfer_counts(algebra, hol + anti, True)
    return sum(n for (_, b), n in counts.items() if b == anti)
