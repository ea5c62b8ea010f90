"""Surface syntax for symbols, operators and closed 1-forms.

Tokens are x1..xn (coordinates), p1..pn (fiber variables of a symbol),
d1..dn (partial derivatives in an operator), dx1..dxn (1-form basis),
numbers (integers, decimals, exponent notation), ``+ - * / ^`` and
parentheses.  ``^`` binds tighter than ``*`` and ``/``, which bind tighter
than ``+`` and ``-``.  Division is only by constants.

Parsing yields a small AST; ``lower`` turns it into a value.  In operator
context ``*`` is composition, so ``d1*x1`` lowers to ``x1*d1 + 1``.
"""

import re
from dataclasses import dataclass

from .errors import DimensionError, ParseError
from .poly import SymbolPoly, unit, zeros
from .scalar import Mode, parse_scalar
from .symbols import ClosedOneForm
from .weyl import WeylOp

CONTEXTS = ("symbol", "operator", "oneform")

# which variable kinds each context admits
_ALLOWED = {
    "symbol": {"x", "p"},
    "operator": {"x", "d"},
    "oneform": {"x", "dx"},
}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<var>(?:dx|x|p|d)\d+)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # num, var, op, end
    text: str
    pos: int


def tokenize(text):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unknown token {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if kind != "ws":
            out.append(Token(kind, m.group(), pos))
        pos = m.end()
    out.append(Token("end", "", len(text)))
    return out


# AST


@dataclass(frozen=True)
class Num:
    text: str
    pos: int


@dataclass(frozen=True)
class Var:
    kind: str  # x, p, d, dx
    index: int  # 1-based as written
    pos: int


@dataclass(frozen=True)
class Neg:
    operand: object
    pos: int


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object
    pos: int


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int
    pos: int


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message, tok=None):
        tok = tok or self.peek()
        raise ParseError(message, tok.pos, self.text)

    def parse(self):
        if self.peek().kind == "end":
            self.fail("empty expression")
        node = self.expr()
        if self.peek().kind != "end":
            self.fail(f"unexpected {self.peek().text!r}")
        return node

    def expr(self):
        node = self.term()
        while self.peek().text in ("+", "-") and self.peek().kind == "op":
            tok = self.take()
            node = BinOp(tok.text, node, self.term(), tok.pos)
        return node

    def term(self):
        node = self.unary()
        while self.peek().text in ("*", "/") and self.peek().kind == "op":
            tok = self.take()
            node = BinOp(tok.text, node, self.unary(), tok.pos)
        return node

    def unary(self):
        tok = self.peek()
        if tok.kind == "op" and tok.text in ("+", "-"):
            self.take()
            inner = self.unary()
            return Neg(inner, tok.pos) if tok.text == "-" else inner
        return self.power()

    def power(self):
        base = self.primary()
        if self.peek().kind == "op" and self.peek().text == "^":
            caret = self.take()
            tok = self.peek()
            if tok.kind != "num" or not tok.text.isdigit():
                self.fail("exponent must be a non-negative integer literal", tok)
            self.take()
            base = Pow(base, int(tok.text), caret.pos)
            if self.peek().kind == "op" and self.peek().text == "^":
                self.fail("chained '^' is ambiguous; use parentheses")
        return base

    def primary(self):
        tok = self.take()
        if tok.kind == "num":
            return Num(tok.text, tok.pos)
        if tok.kind == "var":
            m = re.fullmatch(r"(dx|x|p|d)(\d+)", tok.text)
            index = int(m.group(2))
            if index < 1:
                raise ParseError("variable indices start at 1", tok.pos, self.text)
            return Var(m.group(1), index, tok.pos)
        if tok.kind == "op" and tok.text == "(":
            node = self.expr()
            if self.peek().text != ")":
                self.fail("expected ')'")
            self.take()
            return node
        if tok.kind == "end":
            raise ParseError("unexpected end of input", tok.pos, self.text)
        raise ParseError(f"unexpected {tok.text!r}", tok.pos, self.text)


def parse(text, context="symbol"):
    """Parse ``text`` into an AST, rejecting variables foreign to ``context``."""
    if context not in CONTEXTS:
        raise ValueError(f"context must be one of {CONTEXTS}")
    ast = _Parser(text).parse()
    for var in _variables(ast):
        if var.kind not in _ALLOWED[context]:
            hint = {"symbol": "p", "operator": "d", "oneform": "dx"}[context]
            raise ParseError(
                f"{var.kind}{var.index} is not allowed in {context} context (use {hint}i)", var.pos, text
            )
    return ast


def _variables(node):
    if isinstance(node, Var):
        yield node
    elif isinstance(node, Neg):
        yield from _variables(node.operand)
    elif isinstance(node, Pow):
        yield from _variables(node.base)
    elif isinstance(node, BinOp):
        yield from _variables(node.left)
        yield from _variables(node.right)


def max_index(text):
    """Largest variable index in ``text`` (0 if none); used to infer dimension."""
    return max((int(m.group(2)) for m in re.finditer(r"(dx|x|p|d)(\d+)", text)), default=0)


def infer_dim(texts, dim=None):
    """The given dimension, or the largest index seen (at least 1)."""
    if dim is not None:
        return dim
    return max([1] + [max_index(t) for t in texts])


# lowering


def _lower(node, context, dim, mode, text):
    cls = WeylOp if context == "operator" else SymbolPoly
    if isinstance(node, Num):
        try:
            value = parse_scalar(node.text, mode)
        except ValueError as exc:
            raise ParseError(str(exc), node.pos, text) from exc
        return cls.const(value, dim, mode)
    if isinstance(node, Var):
        if node.index > dim:
            raise ParseError(f"{node.kind}{node.index} exceeds dimension n={dim}", node.pos, text)
        i = node.index - 1
        if node.kind == "x":
            return cls.x(i, dim, mode)
        # p, d and dx all live in the fiber slot
        return cls._raw(dim, {(zeros(dim), unit(dim, i)): mode.one}, mode)
    if isinstance(node, Neg):
        return -_lower(node.operand, context, dim, mode, text)
    if isinstance(node, Pow):
        base = _lower(node.base, context, dim, mode, text)
        out = cls.const(1, dim, mode)
        for _ in range(node.exponent):
            out = out * base
        return out
    left = _lower(node.left, context, dim, mode, text)
    right = _lower(node.right, context, dim, mode, text)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    # division by a constant
    keys = list(right.keys())
    if right.is_zero() or keys != [(zeros(dim), zeros(dim))]:
        raise ParseError("division is only by nonzero constants", node.pos, text)
    return left.scale(mode.one / right.coeff(zeros(dim), zeros(dim)))


def lower(ast, context, dim, mode=Mode.EXACT, text=""):
    """Value of a parsed expression: SymbolPoly, WeylOp or ClosedOneForm."""
    if dim < 1:
        raise DimensionError("dimension must be at least 1")
    value = _lower(ast, context, dim, mode, text)
    if context != "oneform":
        return value
    comps = [SymbolPoly.zero(dim, mode) for _ in range(dim)]
    for (xa, pa), c in value.items():
        if sum(pa) != 1:
            raise ParseError("every term of a 1-form needs exactly one dx factor", 0, text)
        j = pa.index(1)
        comps[j] = comps[j] + SymbolPoly.monomial(xa, zeros(dim), c, mode)
    return ClosedOneForm(tuple(comps))


def read(text, context, dim=None, mode=Mode.EXACT):
    """parse + lower; dimension inferred from the text when not given."""
    ast = parse(text, context)
    return lower(ast, context, infer_dim([text], dim), mode, text)


def read_symbol(text, dim=None, mode=Mode.EXACT):
    return read(text, "symbol", dim, mode)


def read_operator(text, dim=None, mode=Mode.EXACT):
    return read(text, "operator", dim, mode)


def read_oneform(text, dim=None, mode=Mode.EXACT):
    return read(text, "oneform", dim, mode)


def read_vector(text, mode=Mode.EXACT):
    """A list of scalars separated by spaces or commas."""
    parts = [s for s in re.split(r"[\s,]+", text.strip()) if s]
    try:
        return tuple(parse_scalar(s, mode) for s in parts)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def read_matrix(text, mode=Mode.EXACT):
    """Rows separated by ';', entries by spaces or commas: ``"1 2; 0 1"``."""
    rows = [read_vector(r, mode) for r in text.split(";") if r.strip()]
    if not rows or any(len(r) != len(rows) for r in rows):
        raise ParseError(f"matrix must be square: {text!r}")
    return tuple(rows)


def show(value):
    """Canonical text; ``read(show(v)) == v`` for every value type."""
    return str(value)
