"""Recursive-descent parser for the coefficient expression language.

Grammar (whitespace-insensitive)::

    expr   := term (("+" | "-") term)*
    term   := factor ("*" factor)*
    factor := atom ("^" integer)?
    atom   := rational | "k" | "poch(" num "," num ")" | "pow(" num ")"
            | "recip(" expr ")" | "prefix(" num_list ";" expr ")" | "(" expr ")"

``rational`` accepts ``3``, ``3/2`` and ``2.5`` (read exactly as 5/2).
``pow(p)`` is ``(k+1)^p`` and ``poch(l,m)`` is ``(l)_k/(m)_k``. An empty tail
in ``prefix(...;)`` denotes a finite, materialized prefix.
"""

from __future__ import annotations

from fractions import Fraction

from . import expr as E
from .errors import ParseError


class _Parser:
    def __init__(self, text):
        self.s = text
        self.i = 0

    def error(self, msg, pos=None):
        raise ParseError(self.i if pos is None else pos, msg)

    def ws(self):
        while self.i < len(self.s) and self.s[self.i].isspace():
            self.i += 1

    def peek(self):
        self.ws()
        return self.s[self.i] if self.i < len(self.s) else ""

    def eat(self, tok):
        self.ws()
        if self.s.startswith(tok, self.i):
            self.i += len(tok)
            return True
        return False

    def expect(self, tok):
        if not self.eat(tok):
            found = self.s[self.i] if self.i < len(self.s) else "end of input"
            self.error(f"expected {tok!r}, found {found!r}")

    def digits(self):
        start = self.i
        while self.i < len(self.s) and self.s[self.i].isdigit():
            self.i += 1
        return self.s[start : self.i]

    def decimal(self):
        self.ws()
        start = self.i
        whole = self.digits()
        frac = ""
        if self.i < len(self.s) and self.s[self.i] == ".":
            self.i += 1
            frac = self.digits()
            if not frac:
                self.error("digits expected after decimal point")
        if not whole and not frac:
            self.error("number expected", start)
        return Fraction(f"{whole or '0'}.{frac or '0'}")

    def rational(self):
        value = self.decimal()
        save = self.i
        self.ws()
        if self.i < len(self.s) and self.s[self.i] == "/":
            self.i += 1
            self.ws()
            if self.i < len(self.s) and (self.s[self.i].isdigit() or self.s[self.i] == "."):
                pos = self.i
                den = self.decimal()
                if den == 0:
                    self.error("division by zero", pos)
                return value / den
            self.i = save
        return value

    def num(self, allow_negative=False):
        self.ws()
        sign = 1
        if allow_negative and self.eat("-"):
            sign = -1
        return sign * self.rational()

    def parse(self):
        e = self.expr()
        self.ws()
        if self.i != len(self.s):
            self.error(f"unexpected {self.s[self.i]!r}")
        return e

    def expr(self):
        terms = [self.term()]
        while True:
            if self.eat("+"):
                terms.append(self.term())
            elif self.eat("-"):
                terms.append(E.neg(self.term()))
            else:
                return E.add(*terms)

    def term(self):
        factors = [self.factor()]
        while self.eat("*"):
            factors.append(self.factor())
        return E.mul(*factors)

    def factor(self):
        base = self.atom()
        if self.eat("^"):
            self.ws()
            pos = self.i
            n = self.digits()
            if not n:
                self.error("integer exponent expected", pos)
            return E.power(base, int(n))
        return base

    def atom(self):
        c = self.peek()
        if c == "":
            self.error("unexpected end of input")
        if c.isdigit() or c == ".":
            return E.Const(self.rational())
        if self.eat("poch("):
            pos = self.i
            lam = self.num()
            self.expect(",")
            pos_mu = self.i
            mu = self.num()
            self.expect(")")
            if lam <= 0:
                self.error("poch parameters must be positive", pos)
            if mu <= 0:
                self.error("poch parameters must be positive", pos_mu)
            return E.PochRatio(lam, mu)
        if self.eat("pow("):
            p = self.num(allow_negative=True)
            self.expect(")")
            return E.pow_k1(p)
        if self.eat("recip("):
            pos = self.i
            inner = self.expr()
            self.expect(")")
            if isinstance(inner, E.Const) and inner.value == 0:
                self.error("reciprocal of zero", pos)
            return E.recip(inner)
        if self.eat("prefix("):
            head = []
            if self.peek() != ";":
                head.append(self.num())
                while self.eat(","):
                    head.append(self.num())
            self.expect(";")
            tail = None
            if self.peek() != ")":
                tail = self.expr()
            self.expect(")")
            if not head:
                return tail if tail is not None else self.error("empty prefix")
            return E.PrefixTail(tuple(head), tail)
        if self.eat("k"):
            return E.k_var()
        if self.eat("("):
            inner = self.expr()
            self.expect(")")
            return inner
        self.error(f"unexpected {c!r}")


def parse(text: str) -> E.SeqExpr:
    """Parse ``text`` into a normalized :class:`~momentkit.expr.SeqExpr`."""
    return _Parser(text).parse()
