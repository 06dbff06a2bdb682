"""Text expressions for elements of the quantum matrix algebras.

Grammar::

    expr   := term (("+" | "-") term)*
    term   := unary ("*" unary)*
    unary  := "-" unary | power
    power  := atom ("^" ["-"] INT)?
    atom   := NUMBER | "q" | GEN "[" INT "," INT "]" | MACRO "(" args ")" | "(" expr ")"

``GEN`` is ``z``, ``zs`` or ``t``; ``NUMBER`` is an integer or ``a/b``.
Macros: ``det_q(n)``, ``minor(I;J)``, ``y(k)``, ``x(k)``, ``u(l1,...,ln)``.
Expressions using ``t`` or ``x`` live in C[M_2n]_q, all others in Pol(Mat_n)_q.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Optional, Tuple

from .fock import u_lambda
from .ncalg import NcPoly, Presentation
from .qmatrices import build_x, build_y, det_q, pol_mat, qmat2n, qminor
from .scalars import NotDivisible, Q, Scalar

__all__ = ["ExpressionError", "parse_expression", "parse_tree", "infer_algebra"]


class ExpressionError(ValueError):
    """Malformed or ill-typed expression; ``position`` is a 0-based character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


_TOKEN = re.compile(r"(\d+(?:/\d+)?)|([A-Za-z_]+)|(\S)")
_MACROS = ("det_q", "minor", "y", "x", "u")


def _tokenize(text: str):
    out = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos == len(text):
            break
        m = _TOKEN.match(text, pos)
        start = pos
        if m.group(1):
            out.append(("num", m.group(1), start))
        elif m.group(2):
            out.append(("name", m.group(2), start))
        else:
            if m.group(3) not in "[](),;^*+-":
                raise ExpressionError(f"unexpected character {m.group(3)!r}", start)
            out.append(("op", m.group(3), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, pos = self.take()
        if val != value or kind not in ("op",):
            raise ExpressionError(f"expected {value!r}, found {val or 'end of input'!r}", pos)
        return pos

    def integer(self, signed: bool = False) -> int:
        sign = 1
        if signed and self.peek()[1] == "-":
            self.take()
            sign = -1
        kind, val, pos = self.take()
        if kind != "num" or "/" in val:
            raise ExpressionError(f"expected an integer, found {val or 'end of input'!r}", pos)
        return sign * int(val)

    def int_list(self, stop: str) -> Tuple[int, ...]:
        vals = [self.integer()]
        while self.peek()[1] == ",":
            self.take()
            vals.append(self.integer())
        if self.peek()[1] != stop:
            kind, val, pos = self.peek()
            raise ExpressionError(f"expected {stop!r}, found {val or 'end of input'!r}", pos)
        return tuple(vals)

    def parse(self):
        node = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ExpressionError(f"unexpected {val!r}", pos)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = ("add" if op == "+" else "sub", node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] == "*" and self.peek()[0] == "op":
            self.take()
            node = ("mul", node, self.unary())
        return node

    def unary(self):
        if self.peek()[1] == "-" and self.peek()[0] == "op":
            self.take()
            return ("neg", self.unary())
        return self.power()

    def power(self):
        node = self.atom()
        if self.peek()[1] == "^":
            pos = self.take()[2]
            node = ("pow", node, self.integer(signed=True), pos)
        return node

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            return ("num", Fraction(val))
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect(")")
            return node
        if kind != "name":
            raise ExpressionError(f"unexpected {val or 'end of input'!r}", pos)
        if val == "q":
            return ("q",)
        if val in ("z", "zs", "t"):
            self.expect("[")
            a = self.integer()
            self.expect(",")
            b = self.integer()
            self.expect("]")
            return ("gen", val, a, b, pos)
        if val in _MACROS:
            self.expect("(")
            if val == "minor":
                rows = self.int_list(";")
                self.expect(";")
                cols = self.int_list(")")
                args = (rows, cols)
            elif val == "u":
                args = (self.int_list(")"),)
            else:
                args = (self.integer(),)
            self.expect(")")
            return ("macro", val, args, pos)
        raise ExpressionError(f"unknown name {val!r}", pos)


def parse_tree(text: str):
    """Syntax tree of ``text`` (nested tuples)."""
    return _Parser(text).parse()


def _walk(node):
    yield node
    for child in node[1:]:
        if isinstance(child, tuple) and child and isinstance(child[0], str):
            yield from _walk(child)


def infer_algebra(tree, n: Optional[int] = None) -> Presentation:
    """Pick PolMat(n) or QMat2n(n); ``n`` defaults to the smallest size fitting every index."""
    nodes = list(_walk(tree))
    uses_t = any(
        (nd[0] == "gen" and nd[1] == "t") or (nd[0] == "macro" and nd[1] == "x") for nd in nodes
    )
    uses_z = any(nd[0] == "gen" and nd[1] in ("z", "zs") for nd in nodes) or any(
        nd[0] == "macro" and nd[1] in ("y", "u") for nd in nodes
    )
    if uses_t and uses_z:
        pos = next(nd[-1] for nd in nodes if nd[0] in ("gen", "macro") and nd[1] in ("z", "zs", "y", "u"))
        raise ExpressionError("cannot mix t with z, zs, y or u", pos)
    if n is None:
        need = 1
        for nd in nodes:
            if nd[0] == "gen":
                m = max(nd[2], nd[3])
                need = max(need, (m + 1) // 2 if uses_t else m)
            elif nd[0] == "macro":
                name, args = nd[1], nd[2]
                if name == "det_q":
                    need = max(need, args[0])
                elif name == "minor":
                    m = max(args[0] + args[1])
                    need = max(need, (m + 1) // 2 if uses_t else m)
                elif name == "u":
                    need = max(need, len(args[0]))
                else:
                    need = max(need, args[0])
        n = need
    return qmat2n(n) if uses_t else pol_mat(n)


def _evaluate(node, alg: Presentation):
    tag = node[0]
    if tag == "num":
        return Scalar.const(node[1])
    if tag == "q":
        return Q
    if tag == "add":
        return _evaluate(node[1], alg) + _evaluate(node[2], alg)
    if tag == "sub":
        return _evaluate(node[1], alg) - _evaluate(node[2], alg)
    if tag == "mul":
        return _evaluate(node[1], alg) * _evaluate(node[2], alg)
    if tag == "neg":
        return -_evaluate(node[1], alg)
    if tag == "pow":
        base, k, pos = _evaluate(node[1], alg), node[2], node[3]
        if k < 0 and isinstance(base, NcPoly):
            raise ExpressionError("negative powers are only allowed for monomials in q", pos)
        try:
            return base ** k
        except NotDivisible as exc:
            raise ExpressionError(str(exc), pos) from exc
    if tag == "gen":
        _, fam, a, b, pos = node
        label = f"{fam}[{a},{b}]"
        if label not in alg.index:
            raise ExpressionError(f"{label} is not a generator of {alg.name}", pos)
        return alg.gen(label)
    _, name, args, pos = node
    n = alg.kind.n
    fam = "t" if alg.kind.tag == "QMat2n" else "z"
    try:
        if name == "det_q":
            if args[0] != n:
                raise ValueError(f"det_q({args[0]}) does not match n = {n}")
            return det_q(alg, fam)
        if name == "minor":
            return qminor(alg, fam, *args)
        if name == "y":
            return build_y(n, args[0])
        if name == "x":
            return build_x(n, args[0])
        vec = u_lambda(n, args[0])
        return vec.as_element()
    except ValueError as exc:
        raise ExpressionError(str(exc), pos) from exc


def parse_expression(text: str, algebra: Optional[Presentation] = None, n: Optional[int] = None) -> NcPoly:
    """Parse and normal-order ``text``; the algebra is inferred unless given."""
    tree = parse_tree(text)
    alg = algebra if algebra is not None else infer_algebra(tree, n)
    value = _evaluate(tree, alg)
    if isinstance(value, Scalar):
        value = alg.scalar(value)
    return value
