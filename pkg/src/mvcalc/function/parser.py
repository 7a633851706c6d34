"""Precedence-climbing parser for the expression language.

Binary operators, loosest to tightest, all left-associative::

    + -      1
    ^        2   wedge
    .        3   scalar product
    _| |_    4   left / right contraction
    *        5   Clifford product (juxtaposition also means *)

Prefix ``-`` and ``~`` (reverse) bind tighter than any binary operator.
Atoms are ``X``, a number, ``e<digits>``, ``number e<digits>``,
``( expr )``, ``< expr >_k``, ``[ literal ]`` and ``{ outer }( inner )``.
A postfix ``_k`` on an atom is also a grade projection.  A bare number
directly followed by ``*`` (or juxtaposed) denotes a scalar multiple.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..algebra import (
    LiteralError,
    MAX_DIM,
    Multivector,
    blade_bits,
    parse_multivector,
)
from .ast import (
    Add,
    Clifford,
    Compose,
    Const,
    Expr,
    GradeProj,
    LContract,
    Neg,
    RContract,
    Reverse,
    ScalarMul,
    ScalarProd,
    Var,
    Wedge,
)


class ParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.message = message
        self.offset = offset


class UnknownIdentifier(ParseError):
    pass


@dataclass(frozen=True)
class Token:
    kind: str  # num, blade, ident, op, literal, eof
    text: str
    offset: int


_TOKEN = re.compile(
    r"(?P<num>\d+\.?\d*|\.\d+)"
    r"|(?P<ident>[A-Za-z][A-Za-z0-9]*)"
    r"|(?P<op>_\||\|_|[-+^.*~_<>(){}])"
)

_BINARY = {"+": 1, "-": 1, "^": 2, ".": 3, "_|": 4, "|_": 4, "*": 5}
_NODE = {"^": Wedge, ".": ScalarProd, "_|": LContract, "|_": RContract, "*": Clifford}
_CLIFFORD_PREC = 5
_ATOM_START = {"num", "blade", "ident", "literal"}
_ATOM_START_OPS = {"(", "<", "{", "~"}


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        if not ch.isascii():
            raise ParseError(f"unexpected character {ch!r}", len(text[:pos].encode()))
        if ch == "[":
            close = text.find("]", pos)
            if close < 0:
                raise ParseError("unterminated '['", pos)
            tokens.append(Token("literal", text[pos + 1:close], pos + 1))
            pos = close + 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {ch!r}", pos)
        kind = m.lastgroup
        value = m.group(kind)
        if kind == "ident" and re.fullmatch(r"e\d+", value):
            kind = "blade"
        tokens.append(Token(kind, value, pos))
        pos = m.end()
    tokens.append(Token("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, dim: int):
        self.text = text
        self.dim = dim
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok.kind != "op" or tok.text != text:
            raise self.unexpected(tok, f"expected {text!r}")
        return self.advance()

    def unexpected(self, tok: Token, what: str | None = None) -> ParseError:
        if tok.kind == "eof":
            return ParseError(what or "unexpected end of input", tok.offset)
        return ParseError(what or f"unexpected token {tok.text!r}", tok.offset)

    def starts_atom(self, tok: Token) -> bool:
        return tok.kind in _ATOM_START or (tok.kind == "op" and tok.text in _ATOM_START_OPS)

    # grammar

    def parse(self) -> Expr:
        e = self.expr(1)
        tok = self.peek()
        if tok.kind != "eof":
            raise self.unexpected(tok)
        return e

    def expr(self, min_prec: int) -> Expr:
        left, bare = self.unary()
        while True:
            tok = self.peek()
            if tok.kind == "op" and tok.text in _BINARY:
                op, prec = tok.text, _BINARY[tok.text]
                if prec < min_prec:
                    break
                self.advance()
            elif self.starts_atom(tok) and _CLIFFORD_PREC >= min_prec:
                op, prec = "*", _CLIFFORD_PREC
            else:
                break
            right = self.expr(prec + 1)
            if op == "*" and bare is not None:
                left = ScalarMul(bare, right)
            elif op == "+":
                left = Add(left, right)
            elif op == "-":
                left = Add(left, Neg(right))
            else:
                left = _NODE[op](left, right)
            bare = None
        return left

    def unary(self) -> tuple[Expr, float | None]:
        tok = self.peek()
        if tok.kind == "op" and tok.text == "-":
            self.advance()
            operand, bare = self.unary()
            return Neg(operand), (-bare if bare is not None else None)
        if tok.kind == "op" and tok.text == "~":
            self.advance()
            operand, _ = self.unary()
            return Reverse(operand), None
        node, bare = self.atom()
        if self.peek().kind == "op" and self.peek().text == "_":
            self.advance()
            node = GradeProj(self.grade_digit(), node)
            bare = None
        return node, bare

    def grade_digit(self) -> int:
        tok = self.peek()
        if tok.kind != "num" or not re.fullmatch(r"\d", tok.text):
            raise self.unexpected(tok, "expected a single grade digit")
        self.advance()
        k = int(tok.text)
        if k > self.dim:
            raise ParseError(f"grade {k} out of range for dimension {self.dim}", tok.offset)
        return k

    def atom(self) -> tuple[Expr, float | None]:
        tok = self.peek()
        if tok.kind == "num":
            self.advance()
            value = float(tok.text)
            if self.peek().kind == "blade":
                bits = self.blade(self.advance())
                return Const(Multivector.blade(self.dim, bits, value)), None
            return Const(Multivector.scalar(self.dim, value)), value
        if tok.kind == "blade":
            self.advance()
            return Const(Multivector.blade(self.dim, self.blade(tok))), None
        if tok.kind == "ident":
            self.advance()
            if tok.text == "X":
                return Var(), None
            raise UnknownIdentifier(f"unknown identifier {tok.text!r}", tok.offset)
        if tok.kind == "literal":
            self.advance()
            try:
                value = parse_multivector(tok.text, self.dim, base_offset=tok.offset)
            except LiteralError as exc:
                raise ParseError(str(exc).rsplit(" at offset", 1)[0], exc.offset) from exc
            return Const(value), None
        if tok.kind == "op":
            if tok.text == "(":
                self.advance()
                e = self.expr(1)
                self.expect(")")
                return e, None
            if tok.text == "<":
                self.advance()
                e = self.expr(1)
                self.expect(">")
                self.expect("_")
                return GradeProj(self.grade_digit(), e), None
            if tok.text == "{":
                self.advance()
                outer = self.expr(1)
                self.expect("}")
                self.expect("(")
                inner = self.expr(1)
                self.expect(")")
                return Compose(outer, inner), None
        raise self.unexpected(tok)

    def blade(self, tok: Token) -> int:
        digits = [int(d) for d in tok.text[1:]]
        for k, d in enumerate(digits):
            if d < 1 or d > self.dim:
                raise ParseError(f"index {d} out of range for dimension {self.dim}",
                                 tok.offset + 1 + k)
        if any(b <= a for a, b in zip(digits, digits[1:])):
            raise ParseError("blade indices must be strictly ascending", tok.offset)
        return blade_bits(digits)


def parse(text: str, dim: int) -> Expr:
    """Parse ``text`` into an expression tree over a ``dim``-dimensional space."""
    if not 1 <= dim <= MAX_DIM:
        raise ValueError(f"dimension must be in [1, {MAX_DIM}], got {dim}")
    return _Parser(text, dim).parse()
