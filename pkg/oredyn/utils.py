import re
from typing import List, NamedTuple, Sequence

import sympy
from django.utils.regex_helper import _lazy_re_compile
from sympy import Poly

from oredyn.exceptions import ValidationError

token_re = _lazy_re_compile(
    r"""
    \s*
    (?:
        (?P<number>\d+)             # integer literal
        |(?P<name>[A-Za-z_]\w*)     # variable
        |(?P<op>\*\*|[-+*/^()])     # operator or parenthesis
    )
    """,
    re.VERBOSE,
)


class Token(NamedTuple):
    kind: str
    text: str
    position: int


def tokenize(text: str) -> List[Token]:
    """
    Split a polynomial expression into tokens, remembering the offset of each.
    """
    tokens = []
    position = 0
    while position < len(text):
        if text[position:].strip() == "":
            break
        match = token_re.match(text, position)
        if not match:
            offset = position + len(text[position:]) - len(text[position:].lstrip())
            raise ValidationError("Unexpected character %r" % text[offset], offset)
        kind = match.lastgroup
        tokens.append(Token(kind, match.group(kind), match.start(kind)))
        position = match.end()
    return tokens


class _Parser:
    """
    Recursive descent over the grammar

        expr   := term (("+" | "-") term)*
        term   := unary (("*" | "/") unary)*
        unary  := ("+" | "-") unary | power
        power  := atom (("^" | "**") integer)?
        atom   := integer | variable | "(" expr ")"

    Division is only allowed by nonzero constants.
    """

    def __init__(self, text: str, variables: Sequence[sympy.Symbol]):
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0
        self.variables = {str(v): v for v in variables}

    def peek(self):
        return self.tokens[self.index] if self.index < len(self.tokens) else None

    def error(self, message: str, token=None):
        token = token or self.peek()
        raise ValidationError(message, token.position if token else len(self.text))

    def take(self, *texts):
        token = self.peek()
        if token is not None and token.kind == "op" and token.text in texts:
            self.index += 1
            return token
        return None

    def parse(self):
        if not self.tokens:
            self.error("Empty polynomial")
        expr = self.expr()
        if self.peek() is not None:
            self.error("Unexpected %r" % self.peek().text)
        return expr

    def expr(self):
        value = self.term()
        while True:
            token = self.take("+", "-")
            if token is None:
                return value
            rhs = self.term()
            value = value + rhs if token.text == "+" else value - rhs

    def term(self):
        value = self.unary()
        while True:
            token = self.take("*", "/")
            if token is None:
                return value
            rhs = self.unary()
            if token.text == "*":
                value = value * rhs
            elif not rhs.is_number or rhs == 0:
                self.error("Division is only allowed by a nonzero constant", token)
            else:
                value = value / rhs

    def unary(self):
        token = self.take("+", "-")
        if token is None:
            return self.power()
        value = self.unary()
        return -value if token.text == "-" else value

    def power(self):
        base = self.atom()
        if self.take("^", "**") is None:
            return base
        token = self.peek()
        if token is None or token.kind != "number":
            self.error("Exponent must be a non-negative integer")
        self.index += 1
        return base ** int(token.text)

    def atom(self):
        token = self.peek()
        if token is None:
            self.error("Unexpected end of polynomial")
        if token.kind == "number":
            self.index += 1
            return sympy.Integer(int(token.text))
        if token.kind == "name":
            if token.text not in self.variables:
                self.error("Unknown variable %r; expected one of %s" % (token.text, ", ".join(self.variables)))
            self.index += 1
            return self.variables[token.text]
        if self.take("("):
            value = self.expr()
            if self.take(")") is None:
                self.error("Expected ')'")
            return value
        self.error("Unexpected %r" % token.text)


def parse_polynomial(text: str, variables: Sequence[sympy.Symbol]) -> Poly:
    """
    Parse a polynomial with rational coefficients in the given variables.
    """
    if not isinstance(text, str):
        raise ValidationError("Polynomials are given as strings, got %r" % (text,))
    expr = _Parser(text, variables).parse()
    return Poly(sympy.expand(expr), *variables, domain="QQ")
