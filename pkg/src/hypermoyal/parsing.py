"""Minimal expression grammar for symbols, scalars and Grassmann elements.

Accepted tokens: integer and rational literals (``3``, ``3/2``), the
variables ``q``/``p`` with an optional 1-based index (``q2``; bare ``q``
means ``q1``), the formal parameter ``h``, the imaginary unit (``j`` for
the hyperbolic signature, ``i`` for the complex one), Grassmann generators
``t<k>``/``θ<k>``, the operators ``+ - * ^`` and parentheses.  Whitespace
is insignificant.  ``^`` takes a nonnegative integer exponent; ``/``
appears only inside rational literals.  A numeric literal may carry the
unit as a suffix (``2j``, ``3/2i``), matching the scalar text rendering.

Deliberately not a general expression parser: no functions, no floating
literals, no implicit multiplication.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import ParseError
from .grassmann import GrassmannElement
from .scalars import Binarion, as_sigma
from .symbols import HPoly, PolySymbol

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>\d+)"
    r"|(?P<name>[qp]\d*|h|[ij]|(?:t|θ)\d+)"
    r"|(?P<op>[-+*^/()]))"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            where = len(text) - len(stripped)
            raise ParseError(f"unexpected character {stripped[0]!r}", where)
        if m.group("number") is not None:
            tokens.append(("number", m.group("number"), m.start("number")))
        elif m.group("name") is not None:
            tokens.append(("name", m.group("name"), m.start("name")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    """Recursive-descent parser over a ring of values.

    The ring is supplied through small factory callbacks so the same
    grammar serves phase-space symbols and Grassmann elements.
    """

    def __init__(self, tokens, make_number, make_name):
        self.tokens = tokens
        self.index = 0
        self.make_number = make_number
        self.make_name = make_name

    def peek(self):
        return self.tokens[self.index]

    def advance(self):
        token = self.tokens[self.index]
        self.index += 1
        return token

    def expect_op(self, op):
        kind, value, pos = self.peek()
        if kind != "op" or value != op:
            raise ParseError(f"expected {op!r}", pos)
        return self.advance()

    def parse(self):
        value = self.expression()
        kind, text, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected trailing {text!r}", pos)
        return value

    def expression(self):
        kind, value, _ = self.peek()
        negate = False
        while kind == "op" and value in "+-":
            self.advance()
            if value == "-":
                negate = not negate
            kind, value, _ = self.peek()
        total = self.term()
        if negate:
            total = -total
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.advance()
                rhs = self.term()
                total = total - rhs if value == "-" else total + rhs
            else:
                return total

    def term(self):
        total = self.factor()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value == "*":
                self.advance()
                total = total * self.factor()
            else:
                return total

    def factor(self):
        base = self.primary()
        kind, value, pos = self.peek()
        if kind == "op" and value == "^":
            self.advance()
            kind, text, pos = self.peek()
            if kind != "number":
                raise ParseError("exponent must be a nonnegative integer", pos)
            self.advance()
            return base ** int(text)
        return base

    def primary(self):
        kind, text, pos = self.advance()
        if kind == "number":
            numerator = int(text)
            k2, v2, _ = self.peek()
            if k2 == "op" and v2 == "/":
                self.advance()
                k3, v3, p3 = self.peek()
                if k3 != "number":
                    raise ParseError("expected denominator", p3)
                self.advance()
                if int(v3) == 0:
                    raise ParseError("zero denominator", p3)
                value = self.make_number(Fraction(numerator, int(v3)))
            else:
                value = self.make_number(Fraction(numerator))
            k2, v2, p2 = self.peek()
            if k2 == "name" and v2 in ("i", "j"):
                # unit-suffixed literal such as 2j or 3/2i
                self.advance()
                value = value * self.make_name(v2, p2)
            return value
        if kind == "name":
            return self.make_name(text, pos)
        if kind == "op" and text == "(":
            value = self.expression()
            self.expect_op(")")
            return value
        if kind == "op" and text == "-":
            return -self.primary()
        raise ParseError(f"unexpected {text!r}" if text else "unexpected end of input", pos)


def _scan_dof(tokens) -> int:
    dof = 1
    for kind, text, _ in tokens:
        if kind == "name" and text[0] in "qp" and len(text) > 1:
            dof = max(dof, int(text[1:]))
    return dof


def parse_symbol(text: str, sigma, dof: int = None) -> PolySymbol:
    """Parse a phase-space symbol expression into a :class:`PolySymbol`.

    The number of degrees of freedom defaults to the highest variable index
    used (bare ``q``/``p`` count as index 1).
    """
    sigma = as_sigma(sigma)
    tokens = _tokenize(text)
    k = _scan_dof(tokens) if dof is None else int(dof)

    def make_number(value: Fraction) -> PolySymbol:
        return PolySymbol.constant(value, k, sigma)

    def make_name(name: str, pos: int) -> PolySymbol:
        if name == "h":
            return PolySymbol.constant(HPoly.h_power(1, sigma), k, sigma)
        if name in ("i", "j"):
            if name != sigma.unit_symbol:
                raise ParseError(
                    f"unit {name!r} belongs to sigma={'-1' if name == 'i' else '+1'}; "
                    f"the requested signature is sigma={sigma}",
                    pos,
                )
            return PolySymbol.constant(Binarion.unit(sigma), k, sigma)
        if name[0] in "qp":
            index = int(name[1:]) if len(name) > 1 else 1
            if index < 1 or index > k:
                raise ParseError(f"variable {name!r} out of range for dof {k}", pos)
            return PolySymbol.coordinate(name[0], index - 1, k, sigma)
        raise ParseError(f"unknown name {name!r} in a symbol expression", pos)

    return _Parser(tokens, make_number, make_name).parse()


def parse_binarion(text: str, sigma) -> Binarion:
    """Parse scalar text such as ``3/2 + 1j`` into a :class:`Binarion`."""
    symbol = parse_symbol(text, sigma, dof=1)
    value = HPoly.zero(symbol.sigma)
    for alpha, beta, coeff in symbol.terms():
        if any(alpha) or any(beta):
            raise ParseError("expected a scalar, found phase-space variables", 0)
        value = value + coeff
    if value.degree() > 0:
        raise ParseError("expected a scalar, found the parameter h", 0)
    return value.constant_term


def parse_grassmann(text: str, sigma, n: int = None) -> GrassmannElement:
    """Parse a Grassmann expression over generators ``t1..tn`` (or ``θ1..θn``)."""
    sigma = as_sigma(sigma)
    tokens = _tokenize(text)
    count = 1
    for kind, t, _ in tokens:
        if kind == "name" and t[0] in ("t", "θ"):
            count = max(count, int(t[1:]))
    n = count if n is None else int(n)

    def make_number(value: Fraction) -> GrassmannElement:
        return GrassmannElement.scalar(value, n, sigma)

    def make_name(name: str, pos: int) -> GrassmannElement:
        if name in ("i", "j"):
            if name != sigma.unit_symbol:
                raise ParseError(f"unit {name!r} does not match sigma={sigma}", pos)
            return GrassmannElement.scalar(Binarion.unit(sigma), n, sigma)
        if name[0] in ("t", "θ"):
            index = int(name[1:])
            if index < 1 or index > n:
                raise ParseError(f"generator {name!r} out of range for n={n}", pos)
            return GrassmannElement.generator(index - 1, n, sigma)
        raise ParseError(f"unknown name {name!r} in a Grassmann expression", pos)

    return _Parser(tokens, make_number, make_name).parse()
