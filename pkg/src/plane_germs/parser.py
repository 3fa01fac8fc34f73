"""Reader for germ expressions such as ``y^2 - x^3 + (1/2)*x*y``.

Grammar::

    expr     := term (("+"|"-") term)*
    term     := factor ("*" factor)*
    factor   := base ("^" nat)?
    base     := var | rational | "(" expr ")" | "-" factor
    rational := int ("/" nat)?
"""

from __future__ import annotations

import re

from flint import fmpq

from .bipoly import BiPoly


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


class ParseError(ValueError):
    """Syntax error with a 1-based line and column."""

    def __init__(self, msg, text, pos):
        self.line = text.count("\n", 0, pos) + 1
        self.column = pos - (text.rfind("\n", 0, pos) + 1) + 1
        self.msg = msg
        super().__init__("line %d, column %d: %s" % (self.line, self.column, msg))


class ExponentError(ParseError):
    """Exponent that is not a non-negative integer."""


class UnknownVariableError(ParseError):
    pass


def _tokenize(text):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:       # trailing whitespace
            break
        num, name, sym = m.groups()
        start = m.start(m.lastindex)
        if num is not None:
            out.append(("num", num, start))
        elif name is not None:
            out.append(("name", name, start))
        else:
            out.append(("sym", sym, start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text, variables):
        self.text = text
        self.vars = tuple(variables)
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def error(self, msg, cls=ParseError, tok=None):
        tok = tok or self.tok
        raise cls(msg, self.text, tok[2])

    def accept(self, sym):
        kind, val, _ = self.tok
        if kind == "sym" and val == sym:
            self.i += 1
            return True
        return False

    def expect(self, sym):
        if not self.accept(sym):
            found = self.tok[1] or "end of input"
            self.error("expected '%s', found '%s'" % (sym, found))

    def parse(self):
        if self.tok[0] == "end":
            self.error("empty expression")
        e = self.expr()
        if self.tok[0] != "end":
            self.error("unexpected '%s'" % self.tok[1])
        return e

    def expr(self):
        acc = self.term()
        while True:
            if self.accept("+"):
                acc = acc + self.term()
            elif self.accept("-"):
                acc = acc - self.term()
            else:
                return acc

    def term(self):
        acc = self.factor()
        while self.accept("*"):
            acc = acc * self.factor()
        return acc

    def factor(self):
        b = self.base()
        if self.accept("^"):
            kind, val, _ = self.tok
            if kind != "num":
                self.error("exponent must be a non-negative integer", ExponentError)
            self.i += 1
            nxt = self.tok
            if nxt[0] == "sym" and nxt[1] in "./":
                self.error("exponent must be a non-negative integer", ExponentError, nxt)
            b = b ** int(val)
        return b

    def base(self):
        kind, val, _ = self.tok
        if kind == "num":
            self.i += 1
            num = int(val)
            if self.accept("/"):
                k2, v2, _ = self.tok
                if k2 != "num":
                    self.error("expected a denominator")
                if int(v2) == 0:
                    self.error("zero denominator")
                self.i += 1
                return BiPoly.const(fmpq(num, int(v2)))
            return BiPoly.const(num)
        if kind == "name":
            if val not in self.vars:
                allowed = " and ".join(self.vars)
                self.error("unknown variable '%s' (expected %s)" % (val, allowed), UnknownVariableError)
            self.i += 1
            return BiPoly.x() if val == self.vars[0] else BiPoly.y()
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        if self.accept("-"):
            # -x^2 reads as -(x^2), so serialized output parses back unchanged
            return -self.factor()
        if kind == "end":
            self.error("unexpected end of input")
        self.error("unexpected '%s'" % val)


def parse_germ(text, variables=("x", "y")):
    """Parse an expression into an exact rational BiPoly in the given variable pair."""
    if tuple(variables) not in (("x", "y"), ("u", "v")):
        raise ValueError("variables must be ('x', 'y') or ('u', 'v')")
    return _Parser(text, variables).parse()


def parse_any(text):
    """Parse in (x, y), or in (u, v) if the expression only uses u and v."""
    names = {t[1] for t in _tokenize(text) if t[0] == "name"}
    if names and names <= {"u", "v"}:
        return parse_germ(text, ("u", "v")), ("u", "v")
    return parse_germ(text, ("x", "y")), ("x", "y")


def serialize(p, variables=("x", "y")):
    """Text form that parse_germ reads back to the same polynomial."""
    return p.to_str(variables)
