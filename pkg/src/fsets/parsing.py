"""Tiny arithmetic-expression parser shared by scenario files.

Expressions use integers, identifiers, ``+ - * / ^`` (``**`` also accepted)
and parentheses.  Parsing yields a small AST; ``evaluate`` folds it into any
ring whose elements support the Python operators.
"""

import re

from .errors import ParseError

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def tokenize(text):
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r} in {text!r}")
        num, ident, op = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif ident is not None:
            out.append(("id", ident))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r} in {self.text!r}")

    def parse(self):
        if not self.toks:
            raise ParseError("empty expression")
        node = self.expr()
        if self.i != len(self.toks):
            raise ParseError(f"trailing input in {self.text!r}")
        return node

    def expr(self):
        node = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            node = (op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            node = (op, node, self.unary())
        return node

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return ("neg", self.unary())
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            kind, val = self.take()
            if kind == "num":
                return ("pow", base, sign * val)
            if (kind, val) == ("op", "("):
                inner = self.unary()
                self.expect(")")
                if inner[0] == "num":
                    return ("pow", base, sign * inner[1])
                if inner[0] == "neg" and inner[1][0] == "num":
                    return ("pow", base, -sign * inner[1][1])
            raise ParseError(f"exponent must be an integer literal in {self.text!r}")
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return ("num", val)
        if kind == "id":
            return ("var", val)
        if (kind, val) == ("op", "("):
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError(f"unexpected token {val!r} in {self.text!r}")


def parse(text):
    if not isinstance(text, str):
        raise ParseError(f"expected an expression string, got {type(text).__name__}")
    return _Parser(text).parse()


def variables(node):
    kind = node[0]
    if kind == "var":
        return {node[1]}
    if kind == "num":
        return set()
    if kind in ("neg",):
        return variables(node[1])
    if kind == "pow":
        return variables(node[1])
    return variables(node[1]) | variables(node[2])


def evaluate(node, env, const):
    """Fold ``node``; ``env`` maps names to ring elements, ``const`` lifts ints."""
    kind = node[0]
    if kind == "num":
        return const(node[1])
    if kind == "var":
        try:
            return env[node[1]]
        except KeyError:
            raise ParseError(f"unknown symbol {node[1]!r}") from None
    if kind == "neg":
        return -evaluate(node[1], env, const)
    if kind == "pow":
        return evaluate(node[1], env, const) ** node[2]
    a = evaluate(node[1], env, const)
    b = evaluate(node[2], env, const)
    if kind == "+":
        return a + b
    if kind == "-":
        return a - b
    if kind == "*":
        return a * b
    if kind == "/":
        return a / b
    raise ParseError(f"bad node {kind!r}")  # pragma: no cover


def parse_tower(text, field):
    """Parse an element of the tower over ``t`` and ``s``."""
    env = {"t": field.t, "s": field.s}
    return evaluate(parse(text), env, field)
