"""Quantum matrix algebras and their distinguished elements.

Three families of presentations are built here:

* ``HolMat(n)``  -- C[Mat_n]_q, generators ``z[a,al]``;
* ``PolMat(n)``  -- Pol(Mat_n)_q, generators ``z[a,al]`` and ``zs[a,al]`` (the
  starred letters);
* ``QMat2n(n)``  -- C[M_2n]_q, generators ``t[i,j]``, i.e. C[SL_2n]_q without
  the relation ``det_q t = 1``.  Statements that hold only modulo that
  relation are checked with :func:`equal_mod_det`.

Generator order: unstarred letters ascending row-major, starred letters after
them descending row-major, ``t`` letters ascending row-major.  With this order
every correction term produced by a rule is already canonical.

The parameter ``q`` is treated as real: the involutions and ``sigma`` are
antilinear only with respect to complex conjugation, which fixes every element
of Q[q, q^-1].  ``inverse=True`` builds the same algebra at parameter ``q^-1``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence, Tuple

from .ncalg import NcPoly, Presentation
from .scalars import ONE, Q, QINV, ZERO, Scalar

__all__ = [
    "AlgebraKind",
    "IndexOutOfRange",
    "DegreeMismatch",
    "build_presentation",
    "hol_mat",
    "pol_mat",
    "qmat2n",
    "r_coefficient",
    "qminor",
    "det_q",
    "build_y",
    "build_x",
    "x_summands",
    "X_FORMS",
    "complement",
    "apply_involution",
    "sigma",
    "jn_map",
    "equal_mod_det",
    "equal_mod_det_factor",
    "defining_relations",
    "permutation_inversions",
    "crossing_count",
]


class IndexOutOfRange(ValueError):
    """A minor or generator index lies outside the matrix."""


class DegreeMismatch(ValueError):
    """Degrees of two elements differ by something other than a multiple of 2n."""


@dataclass(frozen=True)
class AlgebraKind:
    tag: str  # "HolMat", "PolMat" or "QMat2n"
    n: int
    inverse: bool = False

    def __post_init__(self):
        if self.tag not in ("HolMat", "PolMat", "QMat2n"):
            raise ValueError(f"unknown algebra kind {self.tag!r}")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.tag == "PolMat" and self.inverse:
            raise ValueError("PolMat is only built at parameter q")


def _qm_rules(size: int, p: Scalar, key):
    """Rules of the quantum matrix algebra of a ``size x size`` matrix.

    ``key(i, j)`` maps a 1-based position to its generator index; positions
    must be numbered ascending row-major.  Returned as ``{(Y, X): rhs}``
    with ``X < Y``.
    """
    pinv = p ** -1
    rules = {}
    cells = [(i, j) for i in range(1, size + 1) for j in range(1, size + 1)]
    for (i, j), (k, l) in itertools.combinations(cells, 2):
        x, y = key(i, j), key(k, l)
        if i == k or j == l:
            rhs = [((x, y), pinv)]
        elif j > l:
            rhs = [((x, y), ONE)]
        else:
            rhs = [((x, y), ONE), ((key(i, l), key(k, j)), -(p - pinv))]
        rules[(y, x)] = rhs
    return rules


def r_coefficient(j: int, i: int, j2: int, i2: int) -> Scalar:
    """Entry ``R(j, i, j', i')`` of the cross-relation table."""
    if i != j and j == j2 and i == i2:
        return QINV
    if i == j == i2 == j2:
        return ONE
    if i == j and i2 == j2 and i2 > i:
        return -(Q ** -2 - 1)
    return ZERO


def _zkey(n, a, al):
    return n * (a - 1) + (al - 1)


def _zskey(n, a, al):
    # starred letters follow all unstarred ones, descending row-major
    return n * n + (n * n - 1 - _zkey(n, a, al))


@lru_cache(maxsize=None)
def hol_mat(n: int) -> Presentation:
    labels = [f"z[{a},{al}]" for a in range(1, n + 1) for al in range(1, n + 1)]
    rules = _qm_rules(n, Q, lambda a, al: _zkey(n, a, al))
    pres = Presentation(f"HolMat({n})", labels, rules, q=Q)
    pres.kind = AlgebraKind("HolMat", n)
    return pres


@lru_cache(maxsize=None)
def pol_mat(n: int) -> Presentation:
    cells = [(a, al) for a in range(1, n + 1) for al in range(1, n + 1)]
    labels = [f"z[{a},{al}]" for a, al in cells]
    labels += [f"zs[{a},{al}]" for a, al in reversed(cells)]
    hol = _qm_rules(n, Q, lambda a, al: _zkey(n, a, al))
    rules = dict(hol)
    star = _letter_star_pol(n)
    # (YX)* = X* Y*: reversed starred image of each holomorphic rule
    for (y, x), rhs in hol.items():
        rules[(star[x], star[y])] = [(tuple(star[v] for v in reversed(w)), c) for w, c in rhs]
    for b, be in cells:
        for a, al in cells:
            rhs = []
            for a2, b2 in itertools.product(range(1, n + 1), repeat=2):
                r1 = r_coefficient(b, a, b2, a2)
                if not r1:
                    continue
                for al2, be2 in itertools.product(range(1, n + 1), repeat=2):
                    r2 = r_coefficient(be, al, be2, al2)
                    if r2:
                        rhs.append(((_zkey(n, a2, al2), _zskey(n, b2, be2)), Q ** 2 * r1 * r2))
            if a == b and al == be:
                rhs.append(((), 1 - Q ** 2))
            rules[(_zskey(n, b, be), _zkey(n, a, al))] = rhs
    blocks = [0] * (n * n) + [1] * (n * n)
    pres = Presentation(f"PolMat({n})", labels, rules, blocks=blocks, q=Q)
    pres.kind = AlgebraKind("PolMat", n)
    return pres


def _letter_star_pol(n: int):
    out = {}
    for a in range(1, n + 1):
        for al in range(1, n + 1):
            z, zs = _zkey(n, a, al), _zskey(n, a, al)
            out[z], out[zs] = zs, z
    return out


def qmat2n(n: int, inverse: bool = False) -> Presentation:
    return _qmat2n(int(n), bool(inverse))


@lru_cache(maxsize=None)
def _qmat2n(n: int, inverse: bool) -> Presentation:
    size = 2 * n
    p = QINV if inverse else Q
    labels = [f"t[{i},{j}]" for i in range(1, size + 1) for j in range(1, size + 1)]
    rules = _qm_rules(size, p, lambda i, j: size * (i - 1) + (j - 1))
    suffix = ", q^-1" if inverse else ""
    pres = Presentation(f"QMat2n({n}{suffix})", labels, rules, q=p)
    pres.kind = AlgebraKind("QMat2n", n, inverse)
    return pres


def build_presentation(kind: AlgebraKind) -> Presentation:
    if kind.tag == "HolMat":
        if kind.inverse:
            raise ValueError("HolMat is only built at parameter q")
        return hol_mat(kind.n)
    if kind.tag == "PolMat":
        return pol_mat(kind.n)
    return qmat2n(kind.n, kind.inverse)


# -- index sets ---------------------------------------------------------------

def _index_set(values: Sequence[int], upper: int, what: str) -> Tuple[int, ...]:
    vals = tuple(values)
    if any(b <= a for a, b in zip(vals, vals[1:])):
        raise ValueError(f"{what} must be strictly increasing, got {vals}")
    if vals and (vals[0] < 1 or vals[-1] > upper):
        raise IndexOutOfRange(f"{what} {vals} not within 1..{upper}")
    return vals


def complement(values: Sequence[int], upper: int) -> Tuple[int, ...]:
    s = set(values)
    return tuple(i for i in range(1, upper + 1) if i not in s)


def permutation_inversions(perm: Sequence[int]) -> int:
    return sum(1 for a, b in itertools.combinations(perm, 2) if a > b)


def crossing_count(k_set: Sequence[int], k_comp: Sequence[int]) -> int:
    """``card{(i, j) : i in K, j in K^c, i > j}``."""
    return sum(1 for i in k_set for j in k_comp if i > j)


# -- minors -------------------------------------------------------------------

def _family(alg: Presentation, variables: str):
    kind = alg.kind
    if variables == "t":
        if kind.tag != "QMat2n":
            raise ValueError("t-minors live in QMat2n")
        size = 2 * kind.n
        return size, lambda i, j: alg.index[f"t[{i},{j}]"]
    if variables == "z":
        if kind.tag not in ("HolMat", "PolMat"):
            raise ValueError("z-minors live in HolMat or PolMat")
        n = kind.n
        return n, lambda i, j: _zkey(n, i, j)
    raise ValueError(f"unknown variable family {variables!r}")


def qminor(alg: Presentation, variables: str, rows: Sequence[int], cols: Sequence[int]) -> NcPoly:
    """q-minor on the given rows (kept in order) and columns (permuted).

    Each permutation ``s`` contributes ``(-q)^{l(s)}`` times
    ``x[r_1, c_s(1)] ... x[r_k, c_s(k)]`` with ``l`` the inversion number and
    ``q`` the algebra's own parameter.
    """
    size, key = _family(alg, variables)
    rows = _index_set(rows, size, "row set")
    cols = _index_set(cols, size, "column set")
    if len(rows) != len(cols) or not rows:
        raise ValueError("a q-minor needs equally many rows and columns (at least one)")
    mq = -alg.q
    expr = {}
    for perm in itertools.permutations(range(len(cols))):
        word = tuple(key(r, cols[s]) for r, s in zip(rows, perm))
        expr[word] = mq ** permutation_inversions(perm)
    return NcPoly.from_words(alg, expr)


def det_q(alg: Presentation, variables: str | None = None) -> NcPoly:
    if variables is None:
        variables = "t" if alg.kind.tag == "QMat2n" else "z"
    size, _ = _family(alg, variables)
    full = tuple(range(1, size + 1))
    return qminor(alg, variables, full, full)


# -- y_k ----------------------------------------------------------------------

def _check_k(n: int, k: int) -> None:
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in 1..{n}, got {k}")


def build_y(n: int, k: int) -> NcPoly:
    """Sum over all k-row / k-column sets of ``M M*`` with ``M`` the q-minor."""
    _check_k(n, k)
    alg = pol_mat(n)
    total = alg.zero()
    for rows in itertools.combinations(range(1, n + 1), k):
        for cols in itertools.combinations(range(1, n + 1), k):
            m = qminor(alg, "z", rows, cols)
            total = total + m * apply_involution("star_pol", m)
    return total


# -- involutions --------------------------------------------------------------

def _sign_noncompact(i: int, j: int, n: int) -> int:
    # sign of (i - n - 1/2)(n - j + 1/2), computed on doubled integers
    v = (2 * i - 2 * n - 1) * (2 * n - 2 * j + 1)
    return 1 if v > 0 else -1


def _generator_image_sl(alg: Presentation, variant: str, i: int, j: int) -> NcPoly:
    cache = alg.__dict__.setdefault("_involution_images", {})
    key = (variant, i, j)
    if key not in cache:
        n = alg.kind.n
        size = 2 * n
        rows = complement([i], size)
        cols = complement([j], size)
        coef = (-alg.q) ** (j - i)
        if variant == "star_sl":
            coef = coef * _sign_noncompact(i, j, n)
        cache[key] = qminor(alg, "t", rows, cols) * coef
    return cache[key]


def apply_involution(variant: str, f: NcPoly) -> NcPoly:
    """Antilinear antihomomorphism determined by its values on generators.

    ``star_pol`` swaps ``z[a,al]`` and ``zs[a,al]`` in Pol(Mat_n);
    ``star_sl`` sends ``t[i,j]`` to ``sign * (-q)^(j-i)`` times the q-minor
    with row ``i`` and column ``j`` removed, the sign being that of
    ``(i - n - 1/2)(n - j + 1/2)``; ``star2_sl`` is the same without the sign.
    """
    alg = f.algebra
    if variant == "star_pol":
        if alg.kind.tag != "PolMat":
            raise ValueError("star_pol acts on PolMat")
        star = _letter_star_pol(alg.kind.n)
        expr = {tuple(star[x] for x in reversed(w)): c for w, c in f.terms.items()}
        return NcPoly.from_words(alg, expr)
    if variant not in ("star_sl", "star2_sl"):
        raise ValueError(f"unknown involution {variant!r}")
    if alg.kind.tag != "QMat2n":
        raise ValueError(f"{variant} acts on QMat2n")
    size = 2 * alg.kind.n
    cells = {alg.index[f"t[{i},{j}]"]: (i, j) for i in range(1, size + 1) for j in range(1, size + 1)}
    total = alg.zero()
    for w, c in f.terms.items():
        img = alg.scalar(c)
        for x in reversed(w):
            img = img * _generator_image_sl(alg, variant, *cells[x])
        total = total + img
    return total


def sigma(f: NcPoly) -> NcPoly:
    """Antiautomorphism ``t[i,j] -> t[i,j]`` from C[M_2n]_q to C[M_2n]_{q^-1}.

    Words are reversed and normal-ordered with the rules at the inverse
    parameter; coefficients are kept (q is real).
    """
    alg = f.algebra
    if alg.kind.tag != "QMat2n":
        raise ValueError("sigma acts on QMat2n")
    target = qmat2n(alg.kind.n, not alg.kind.inverse)
    return NcPoly.from_words(target, {tuple(reversed(w)): c for w, c in f.terms.items()})


# -- x_k ----------------------------------------------------------------------

X_FORMS = ("complementary", "complementary_literal", "star", "star2")


def x_summands(n: int, k: int, form: str = "complementary", inverse: bool = False):
    """Yield ``(I, J, prefactor, element)`` for each summand of ``x_k``.

    ``I`` runs over k-subsets of ``1..n`` and ``J`` over k-subsets of
    ``n+1..2n``.  Every form carries ``q^{k(k-1)} q^{-2 sum(n-i_m)}``.

    * ``complementary``: ``t^k_{IJ} t^{2n-k}_{I^c J^c}`` times ``(-q)^{sum(j_m-i_m)}``;
    * ``complementary_literal``: the same with ``(-q)^{sum(j_m-i_m-n)}``, which
      is off by ``(-q)^{nk}`` (kept for the convention check);
    * ``star`` / ``star2``: ``t^k_{IJ} (t^k_{IJ})^*`` with ``star_sl`` / ``star2_sl``.

    The star forms have degree ``2nk`` and equal ``complementary`` times
    ``det_q^{k-1}``.  All powers of q are taken at the algebra's parameter.
    """
    _check_k(n, k)
    if form not in X_FORMS:
        raise ValueError(f"unknown x_k form {form!r}")
    alg = qmat2n(n, inverse)
    p = alg.q
    size = 2 * n
    for rows in itertools.combinations(range(1, n + 1), k):
        for cols in itertools.combinations(range(n + 1, size + 1), k):
            pref = p ** (k * (k - 1)) * p ** (-2 * sum(n - i for i in rows))
            minor = qminor(alg, "t", rows, cols)
            if form.startswith("complementary"):
                shift = n if form == "complementary_literal" else 0
                pref = pref * (-p) ** sum(j - i - shift for i, j in zip(rows, cols))
                other = qminor(alg, "t", complement(rows, size), complement(cols, size))
            else:
                variant = "star_sl" if form == "star" else "star2_sl"
                other = apply_involution(variant, minor)
            yield rows, cols, pref, minor * other


def build_x(n: int, k: int, form: str = "complementary", inverse: bool = False) -> NcPoly:
    alg = qmat2n(n, inverse)
    total = alg.zero()
    for _, _, pref, elem in x_summands(n, k, form, inverse):
        total = total + elem * pref
    return total


# -- J_n ------------------------------------------------------------------------

def jn_map(f: NcPoly) -> NcPoly:
    """The *-homomorphism Pol(Mat_n)_q -> Pol(Mat_{n-1})_q.

    Interior letters go to ``q^-1`` times the same letter, ``z[n,n]`` and
    ``zs[n,n]`` to 1, every other letter to 0.
    """
    src = f.algebra
    if src.kind.tag != "PolMat":
        raise ValueError("jn_map acts on PolMat")
    n = src.kind.n
    if n < 2:
        raise ValueError("jn_map needs n > 1")
    dst = pol_mat(n - 1)
    image = {}
    for a in range(1, n + 1):
        for al in range(1, n + 1):
            for starred in (False, True):
                key = _zskey(n, a, al) if starred else _zkey(n, a, al)
                if a == al == n:
                    image[key] = ()
                elif a < n and al < n:
                    image[key] = ((_zskey if starred else _zkey)(n - 1, a, al),)
                else:
                    image[key] = None
    expr = {}
    for w, c in f.terms.items():
        out, scale = (), 0
        for x in w:
            img = image[x]
            if img is None:
                break
            out += img
            scale += len(img)
        else:
            key = out
            expr[key] = expr.get(key, ZERO) + c * Q ** (-scale)
    return NcPoly.from_words(dst, expr)


def defining_relations(alg: Presentation):
    """Each rule as the element ``lhs - rhs`` of the free algebra, given as a word map."""
    for (g, h), rhs in sorted(alg.rules.items()):
        expr = {(g, h): ONE}
        for w, c in rhs:
            expr[w] = expr.get(w, ZERO) - c
        yield (g, h), expr


# -- equality modulo det_q t = 1 ------------------------------------------------

def _homogeneous_degree(f: NcPoly) -> int:
    if f.is_zero():
        return 0
    return f.degree()


def equal_mod_det_factor(a: NcPoly, b: NcPoly, n: int) -> Tuple[int, NcPoly, NcPoly]:
    """Return ``(m, high, low*det^m)`` with ``high`` the higher-degree side."""
    alg = a.algebra
    if b.algebra is not alg or alg.kind.tag != "QMat2n" or alg.kind.n != n:
        raise ValueError(f"both elements must live in QMat2n({n})")
    da, db = _homogeneous_degree(a), _homogeneous_degree(b)
    if da < db:
        a, b, da, db = b, a, db, da
    if (da - db) % (2 * n):
        raise DegreeMismatch(f"degrees {da} and {db} differ by a non-multiple of {2 * n}")
    m = (da - db) // (2 * n)
    return m, a, b * det_q(alg) ** m


def equal_mod_det(a: NcPoly, b: NcPoly, n: int) -> bool:
    """True iff ``a == b * det_q(t)^m`` (after ordering by degree)."""
    _, high, low = equal_mod_det_factor(a, b, n)
    return high == low
