"""Insertion-expression grammar for the command line and case files.

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := ('-')* atom ('^' integer)?
    atom   := 'H' | 'h' | 'psi' | 'lambda' | integer | '(' expr ')'

Division is exact in the insertion algebra: denominators must have a
nonzero lambda-constant term (H, h, psi are nilpotent).
"""

from __future__ import annotations

from fractions import Fraction

from .coh_ring import CohClass, DescendantInsertion, FormalInsertion, RingId
from .exact_arith import RationalFunction


class ParseError(Exception):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_TOKENS = ("H", "h", "psi", "lambda")


def _tokenize(s: str):
    tokens = []
    i = 0
    while i < len(s):
        c = s[i]
        if c.isspace():
            i += 1
            continue
        if c in "+-*/^()":
            tokens.append((c, i))
            i += 1
            continue
        if c.isdigit():
            j = i
            while j < len(s) and s[j].isdigit():
                j += 1
            tokens.append((("int", int(s[i:j])), i))
            i = j
            continue
        if c.isalpha():
            j = i
            while j < len(s) and s[j].isalpha():
                j += 1
            name = s[i:j]
            if name not in _TOKENS:
                raise ParseError(f"unknown symbol {name!r}", i)
            tokens.append((("name", name), i))
            i = j
            continue
        raise ParseError(f"unexpected character {c!r}", i)
    return tokens


class _Parser:
    def __init__(self, tokens, atoms):
        self.tokens = tokens
        self.pos = 0
        self.atoms = atoms

    def peek(self):
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def where(self):
        return self.tokens[self.pos][1] if self.pos < len(self.tokens) else -1

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok[0]

    def expr(self):
        value = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.factor()
        while self.peek() in ("*", "/"):
            op = self.take()
            rhs = self.factor()
            value = value * rhs if op == "*" else value / rhs
        return value

    def factor(self):
        sign = 1
        while self.peek() == "-":
            self.take()
            sign = -sign
        value = self.atom()
        if self.peek() == "^":
            self.take()
            tok = self.peek()
            if not (isinstance(tok, tuple) and tok[0] == "int"):
                raise ParseError("exponent must be an integer", self.where())
            self.take()
            value = value ** tok[1]
        if sign < 0:
            value = -value
        return value

    def atom(self):
        tok = self.peek()
        if tok == "(":
            self.take()
            value = self.expr()
            if self.peek() != ")":
                raise ParseError("missing closing parenthesis", self.where())
            self.take()
            return value
        if isinstance(tok, tuple) and tok[0] == "int":
            self.take()
            return self.atoms["one"] * Fraction(tok[1])
        if isinstance(tok, tuple) and tok[0] == "name":
            self.take()
            name = tok[1]
            key = {"H": "H", "h": "h", "psi": "psi", "lambda": "lam"}[name]
            if key not in self.atoms:
                raise ParseError(f"{name!r} does not exist in this ring", self.where())
            return self.atoms[key]
        raise ParseError("expected an atom", self.where())


def parse_formal(s: str, ring: RingId, dim_bound: int) -> FormalInsertion:
    tokens = _tokenize(s)
    if not tokens:
        raise ParseError("empty expression", 0)
    atoms = {
        "H": FormalInsertion.from_class(ring, dim_bound, CohClass.hyperplane(ring)),
        "psi": FormalInsertion.psi(ring, dim_bound),
        "lam": FormalInsertion.scalar(ring, dim_bound, RationalFunction.lam()),
        "one": FormalInsertion.scalar(ring, dim_bound, 1),
    }
    if ring.is_bundle:
        atoms["h"] = FormalInsertion.from_class(ring, dim_bound, CohClass.fiber_class(ring))
    parser = _Parser(tokens, atoms)
    value = parser.expr()
    if parser.pos != len(tokens):
        raise ParseError("trailing input", parser.where())
    return value


def parse_insertion(s: str, ring: RingId, dim_bound: int) -> DescendantInsertion:
    """Parse and expand an insertion expression into a finite psi-series."""
    return parse_formal(s, ring, dim_bound).to_descendant()


def parse_class(s: str, ring: RingId) -> CohClass:
    """Parse an expression that must be a plain cohomology class."""
    ins = parse_insertion(s, ring, 0)
    if not ins.is_plain_class():
        raise ParseError("expression contains psi", 0)
    return ins.plain_class()
