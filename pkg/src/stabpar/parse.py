"""Text formats: rational expressions, matrix blocks and problem files.

Expressions use ``+ - * / ^`` and parentheses over integers and ring
variables, e.g. ``1/(1 - 2*z)`` or ``z1^2*z2 - 3/2*z1 + 1``. A matrix block
is ``[a, b; c, d]``. A problem file is a sequence of statements separated
by newlines or top-level ``;``::

    ring z1 z2 order grevlex
    plant [ z1/(1 - z1*z2) ]
    fraction N [ z1 ] D [ 1 - z1*z2 ]      # optional

``#`` starts a comment.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .fracring import Fraction, in_A
from .linalg import Mat
from .polyring import Poly, PolyRing

__all__ = ["ParseError", "ProblemFile", "parse_expr", "parse_poly", "parse_matrix", "parse_problem"]


class ParseError(ValueError):
    def __init__(self, message, line=None, col=None):
        self.line, self.col = line, col
        where = f"line {line}, column {col}: " if line is not None else ""
        super().__init__(where + message)


_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<comment>#[^\n]*)|(?P<nl>\n)|(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^()\[\],;])"
)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text):
    tokens = []
    line, line_start, pos = 1, 0, 0
    depth = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        col = pos - line_start + 1
        tok = m.group()
        if kind == "nl":
            if depth == 0:
                tokens.append(Token("sep", "\n", line, col))
            line, line_start = line + 1, m.end()
        elif kind == "op":
            if tok in "([":
                depth += 1
            elif tok in ")]":
                depth = max(0, depth - 1)
            if tok == ";" and depth == 0:
                tokens.append(Token("sep", ";", line, col))
            else:
                tokens.append(Token("op", tok, line, col))
        elif kind in ("num", "name"):
            tokens.append(Token(kind, tok, line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text, ring=None):
        self.toks = tokenize(text)
        self.i = 0
        self.ring = ring

    # -- helpers ------------------------------------------------------------
    @property
    def tok(self):
        return self.toks[self.i]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        return ParseError(msg, tok.line, tok.col)

    def accept(self, text):
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text):
        if not self.accept(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")

    def skip_seps(self):
        while self.tok.kind == "sep":
            self.i += 1

    # -- expressions --------------------------------------------------------
    def expr(self):
        value = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.tok.text
            self.i += 1
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op, tok = self.tok.text, self.tok
            self.i += 1
            rhs = self.unary()
            if op == "*":
                value = value * rhs
            else:
                if not rhs:
                    raise self.error("division by zero", tok)
                value = _div(value, rhs)
        return value

    def unary(self):
        if self.accept("-"):
            return -self.unary()
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.accept("^"):
            if self.tok.kind != "num":
                raise self.error("expected a non-negative integer exponent")
            k = int(self.tok.text)
            self.i += 1
            return base**k
        return base

    def atom(self):
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            return self.ring.const(int(tok.text))
        if tok.kind == "name":
            if tok.text not in self.ring.variables:
                raise self.error(f"unknown variable {tok.text!r}")
            self.i += 1
            return self.ring.gen(tok.text)
        if self.accept("("):
            v = self.expr()
            self.expect(")")
            return v
        raise self.error(f"unexpected {tok.text or 'end of input'!r}")

    # -- matrices -----------------------------------------------------------
    def matrix(self):
        start = self.tok
        self.expect("[")
        rows = [[]]
        if self.accept("]"):
            raise self.error("empty matrix", start)
        while True:
            rows[-1].append(self.expr())
            if self.accept(","):
                continue
            if self.accept(";"):
                rows.append([])
                continue
            self.expect("]")
            break
        width = len(rows[0])
        for r in rows:
            if len(r) != width:
                raise ParseError(f"ragged matrix: rows of length {width} and {len(r)}", start.line, start.col)
        return Mat(self.ring, rows)

    def end(self):
        self.skip_seps()
        if self.tok.kind != "eof":
            raise self.error(f"unexpected trailing {self.tok.text!r}")


def _div(a, b):
    if isinstance(b, Poly) and isinstance(a, Poly) and b.is_constant():
        return a * (1 / b.constant_term())
    if isinstance(a, Poly):
        a = Fraction(a)
    return a / b


def _ring_of(ring):
    if isinstance(ring, PolyRing):
        return ring
    return PolyRing(ring)


def parse_expr(text, ring):
    """Parse a rational expression; returns :class:`Poly` or :class:`Fraction`."""
    p = _Parser(text, _ring_of(ring))
    v = p.expr()
    p.end()
    return v


def parse_poly(text, ring):
    v = parse_expr(text, ring)
    if isinstance(v, Poly):
        return v
    q = in_A(v)
    if q is None:
        raise ParseError(f"{text!r} is not a polynomial")
    return q


def parse_matrix(text, ring):
    p = _Parser(text, _ring_of(ring))
    p.skip_seps()
    M = p.matrix()
    p.end()
    return M


@dataclass
class ProblemFile:
    ring: PolyRing
    plant: Mat
    N: Mat = None
    D: Mat = None
    text: str = ""

    @property
    def declared(self):
        return self.N is not None

    def to_plant(self):
        from .feedback import Plant

        return Plant(self.plant, self.N, self.D)


_ORDERS = ("grevlex", "lex")


def parse_problem(text, ring=None):
    """Parse a problem file; ``ring`` (names string) may stand in for the ``ring`` statement."""
    p = _Parser(text, None)
    if ring is not None:
        p.ring = _ring_of(ring)
    plant = N = D = None
    p.skip_seps()
    while p.tok.kind != "eof":
        tok = p.tok
        if tok.kind == "op" and tok.text == "[" and plant is None and p.ring is not None:
            # bare matrix: shorthand for a plant statement
            plant = p.matrix()
            if p.tok.kind not in ("sep", "eof"):
                raise p.error(f"unexpected {p.tok.text!r} after matrix")
            p.skip_seps()
            continue
        if tok.kind != "name":
            raise p.error(f"expected a statement keyword, found {tok.text!r}")
        p.i += 1
        if tok.text == "ring":
            if p.ring is not None and ring is None:
                raise p.error("ring declared twice", tok)
            names, order = [], "grevlex"
            while p.tok.kind == "name":
                if p.tok.text == "order":
                    p.i += 1
                    otok = p.tok
                    if otok.kind != "name":
                        raise p.error("expected a monomial order")
                    order = otok.text
                    p.i += 1
                    if order not in _ORDERS:
                        raise p.error(f"unknown monomial order {order!r}", otok)
                    break
                names.append(p.tok.text)
                p.i += 1
            if not names:
                raise p.error("ring needs at least one variable", tok)
            try:
                new_ring = PolyRing(names, order)
            except ValueError as e:
                raise ParseError(str(e), tok.line, tok.col) from None
            if ring is None:
                p.ring = new_ring
        elif tok.text == "plant":
            if p.ring is None:
                raise p.error("plant before ring", tok)
            plant = p.matrix()
        elif tok.text == "fraction":
            if p.ring is None:
                raise p.error("fraction before ring", tok)
            for label in ("N", "D"):
                if p.tok.kind != "name" or p.tok.text != label:
                    raise p.error(f"expected {label!r}")
                p.i += 1
                M = p.matrix()
                if label == "N":
                    N = M
                else:
                    D = M
        else:
            raise p.error(f"unknown statement {tok.text!r}", tok)
        if p.tok.kind not in ("sep", "eof"):
            raise p.error(f"unexpected {p.tok.text!r} after statement")
        p.skip_seps()
    if p.ring is None:
        raise ParseError("missing ring statement", 1, 1)
    if plant is None:
        raise ParseError("missing plant statement", 1, 1)
    if N is not None:
        if N.shape != plant.shape:
            raise ParseError(f"N has shape {N.shape}, plant has {plant.shape}")
        if D.shape != (plant.cols, plant.cols):
            raise ParseError(f"D must be {plant.cols} x {plant.cols}, got {D.shape}")
    return ProblemFile(p.ring, plant, N, D, text)
