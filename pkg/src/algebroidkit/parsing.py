"""Recursive-descent parser for coefficient and exterior-algebra expressions.

Grammar (whitespace ignored)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/' | '/\\') factor)*
    factor := ('+' | '-') factor | power
    power  := atom ('^' INT)?
    atom   := INT | NAME | '(' expr ')'

Rationals are written ``p/q``.  Implicit multiplication is rejected, and so
are negative exponents.  The parser itself knows nothing about the values it
builds: a small ``ops`` object supplies numbers, names and the operators.
"""

from __future__ import annotations

import re

__all__ = ["ParseError", "ExpressionSyntaxError", "UnknownVariable", "parse"]


class ParseError(ValueError):
    """Base class for expression errors; ``pos`` is a 0-based offset."""

    def __init__(self, message, src="", pos=0):
        self.src = src
        self.pos = pos
        self.message = message
        super().__init__(f"{message} at position {pos}" + (f" in {src!r}" if src else ""))


class ExpressionSyntaxError(ParseError):
    pass


class UnknownVariable(ParseError):
    def __init__(self, name, src="", pos=0):
        self.name = name
        super().__init__(f"unknown name {name!r}", src, pos)


_TOKEN = re.compile(r"(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(/\\|[-+*/^()])")


def _tokenize(src):
    tokens = []
    pos = 0
    while pos < len(src):
        ch = src[pos]
        if ch.isspace():
            pos += 1
            continue
        m = _TOKEN.match(src, pos)
        if m is None:
            raise ExpressionSyntaxError(f"unexpected character {ch!r}", src, pos)
        if m.group(1) is not None:
            tokens.append(("int", m.group(1), pos))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), pos))
        else:
            tokens.append(("op", m.group(3), pos))
        pos = m.end()
    tokens.append(("end", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src, ops):
        self.src = src
        self.ops = ops
        self.tokens = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message, pos=None):
        if pos is None:
            pos = self.peek()[2]
        return ExpressionSyntaxError(message, self.src, pos)

    def is_op(self, *symbols):
        kind, text, _ = self.peek()
        return kind == "op" and text in symbols

    def parse(self):
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        value = self.expr()
        kind, text, pos = self.peek()
        if kind != "end":
            raise self.error(f"unexpected token {text!r}", pos)
        return value

    def expr(self):
        value = self.term()
        while self.is_op("+", "-"):
            _, op, _ = self.advance()
            rhs = self.term()
            value = self.ops.add(value, rhs) if op == "+" else self.ops.sub(value, rhs)
        return value

    def term(self):
        value = self.factor()
        while self.is_op("*", "/", "/\\"):
            _, op, pos = self.advance()
            rhs = self.factor()
            if op == "*":
                value = self.ops.mul(value, rhs, pos)
            elif op == "/":
                value = self.ops.div(value, rhs, pos)
            else:
                value = self.ops.wedge(value, rhs, pos)
        return value

    def factor(self):
        if self.is_op("-"):
            self.advance()
            return self.ops.neg(self.factor())
        if self.is_op("+"):
            self.advance()
            return self.factor()
        return self.power()

    def power(self):
        base = self.atom()
        if self.is_op("^"):
            _, _, pos = self.advance()
            kind, text, epos = self.peek()
            if kind != "int":
                raise self.error("exponent must be a nonnegative integer literal", epos)
            self.advance()
            if self.is_op("^"):
                raise self.error("chained '^' is ambiguous; use parentheses")
            base = self.ops.pow(base, int(text), pos)
        return base

    def atom(self):
        kind, text, pos = self.advance()
        if kind == "int":
            return self.ops.number(int(text))
        if kind == "name":
            return self.ops.name(text, self.src, pos)
        if kind == "op" and text == "(":
            value = self.expr()
            if not self.is_op(")"):
                raise self.error("expected ')'")
            self.advance()
            return value
        if kind == "end":
            raise self.error("unexpected end of expression", pos)
        raise self.error(f"unexpected token {text!r}", pos)


def parse(src, ops):
    """Parse ``src`` building values through ``ops``."""
    return _Parser(src, ops).parse()
