"""
Polynomial text grammar.

    expr   := term (("+" | "-") term)*
    term   := unary ("*" unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" integer)?
    atom   := number | number "/" number | variable | "(" expr ")"

Juxtaposition is rejected: ``2x`` must be written ``2*x``.
"""

import re
from fractions import Fraction

from dualbilliards.core.errors import PolynomialSyntaxError
from dualbilliards.core.exactpoly import XYZ, MultiPoly

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(.))")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match.end() == pos or not text[pos:].strip():
            break
        start = match.start(match.lastindex)
        number, name, symbol = match.groups()
        if number is not None:
            tokens.append(("num", number, start))
        elif name is not None:
            tokens.append(("name", name, start))
        elif symbol in "+-*/^()":
            tokens.append((symbol, symbol, start))
        else:
            raise PolynomialSyntaxError(f"unexpected character {symbol!r}", start)
        pos = match.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, variables):
        self.tokens = _tokenize(text)
        self.i = 0
        self.variables = tuple(variables)

    @property
    def current(self):
        return self.tokens[self.i]

    def take(self, kind):
        token = self.current
        if token[0] != kind:
            found = "end of input" if token[0] == "end" else repr(token[1])
            raise PolynomialSyntaxError(f"expected {kind!r}, found {found}", token[2])
        self.i += 1
        return token

    def expr(self):
        result = self.term()
        while self.current[0] in ("+", "-"):
            op = self.take(self.current[0])[0]
            rhs = self.term()
            result = result + rhs if op == "+" else result - rhs
        return result

    def term(self):
        result = self.unary()
        while self.current[0] == "*":
            self.take("*")
            result = result * self.unary()
        return result

    def unary(self):
        if self.current[0] == "-":
            self.take("-")
            return -self.unary()
        if self.current[0] == "+":
            self.take("+")
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.current[0] == "^":
            self.take("^")
            exponent = int(self.take("num")[1])
            return base**exponent
        return base

    def atom(self):
        kind, value, position = self.current
        if kind == "num":
            self.take("num")
            number = Fraction(int(value))
            if self.current[0] == "/":
                self.take("/")
                den_token = self.take("num")
                if int(den_token[1]) == 0:
                    raise PolynomialSyntaxError("zero denominator", den_token[2])
                number /= int(den_token[1])
            return MultiPoly.constant(number, self.variables)
        if kind == "name":
            if value not in self.variables:
                raise PolynomialSyntaxError(f"unknown variable {value!r}", position)
            self.take("name")
            return MultiPoly.var(value, self.variables)
        if kind == "(":
            self.take("(")
            inner = self.expr()
            self.take(")")
            return inner
        found = "end of input" if kind == "end" else repr(value)
        raise PolynomialSyntaxError(f"unexpected {found}", position)


def parse_polynomial(text, variables=XYZ):
    """Parses ``text`` into a MultiPoly over ``variables``."""
    if not text or not text.strip():
        raise PolynomialSyntaxError("empty polynomial", 0)
    parser = _Parser(text, variables)
    result = parser.expr()
    kind, value, position = parser.current
    if kind != "end":
        raise PolynomialSyntaxError(f"unexpected {value!r}", position)
    return result
