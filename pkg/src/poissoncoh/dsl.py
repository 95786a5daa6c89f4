"""Text format for Poisson bivectors.

Example::

    # circle model
    coords(t, x1, x2, x3)
    x1*dx2^dx3 + x2*dx1^dx3 - x3*dx1^dx2

Grammar (``[]`` optional, ``*`` repetition)::

    doc       := coords [weights] [volume] bivector
    coords    := "coords" "(" ident ("," ident)* ")"
    weights   := "weights" "(" int ("," int)* ")"
    volume    := "volume" "(" number ")"
    bivector  := term (("+" | "-") term)*        -- a lone "0" is the zero bivector
    term      := ["-"] [polyfactor "*"] basis
    basis     := "d" ident "^" "d" ident
    polyfactor: products/powers of numbers, coordinates and parenthesised sums

Numbers are integers or rationals ``p/q``; floating-point literals are
rejected.  ``#`` starts a comment.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import Polynomial
from .multivec import Multivector, VolumeForm
from .poisson import PoissonStructure


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int, token: str):
        super().__init__(f"line {line}, column {col}: {message} (at {token!r})")
        self.message = message
        self.line = line
        self.col = col
        self.token = token


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT, NUMBER, OP, EOF
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)"
    r"|(?P<float>\d+\.\d*|\.\d+|\d+[eE][+-]?\d+)"
    r"|(?P<number>\d+(?:/\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)"
    r"|(?P<op>[-+*^(),])"
)


def tokenize(text: str) -> List[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError("unexpected character", line, col, text[pos])
        kind = m.lastgroup
        s = m.group()
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "float":
            raise ParseError("floating-point literals are not allowed; use p/q", line, col, s)
        elif kind == "number":
            if "/" in s and int(s.split("/")[1]) == 0:
                raise ParseError("zero denominator", line, col, s)
            tokens.append(Token("NUMBER", s, line, col))
        elif kind == "ident":
            tokens.append(Token("IDENT", s, line, col))
        elif kind == "op":
            tokens.append(Token("OP", s, line, col))
        pos = m.end()
    col = pos - line_start + 1
    tokens.append(Token("EOF", "", line, col))
    return tokens


@dataclass
class StructureDoc:
    coords: Tuple[str, ...]
    weights: Optional[Tuple[int, ...]] = None
    volume: Optional[Fraction] = None
    terms: List[Tuple[Polynomial, Tuple[int, int]]] = field(default_factory=list)

    @property
    def bivector(self) -> Multivector:
        n = len(self.coords)
        out = Multivector.zero(2, n)
        for coeff, (a, b) in self.terms:
            out = out + Multivector.basis((a, b), n, coeff)
        return out

    def to_structure(self, name: Optional[str] = None) -> PoissonStructure:
        return PoissonStructure(self.coords, self.bivector, self.weights or (),
                                VolumeForm(self.volume or 1), name=name)


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0
        self.coords: Tuple[str, ...] = ()
        self.index: Dict[str, int] = {}

    # token helpers
    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.pos + k, len(self.tokens) - 1)]

    def error(self, message: str, tok: Optional[Token] = None):
        tok = tok or self.tok
        raise ParseError(message, tok.line, tok.col, tok.text or "end of input")

    def advance(self) -> Token:
        t = self.tok
        self.pos += 1
        return t

    def expect(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind not in ("OP", "IDENT"):
            self.error(f"expected {text!r}")
        return self.advance()

    def at(self, text: str) -> bool:
        return self.tok.kind == "OP" and self.tok.text == text

    # grammar
    def doc(self) -> StructureDoc:
        coords = self.coord_decl()
        weights = None
        volume = None
        if self.tok.kind == "IDENT" and self.tok.text == "weights" and self.peek().text == "(":
            weights = self.weight_decl()
        if self.tok.kind == "IDENT" and self.tok.text == "volume" and self.peek().text == "(":
            volume = self.volume_decl()
        terms = self.bivector()
        if self.at(")"):
            self.error("unbalanced parentheses: unexpected ')'")
        if self.tok.kind != "EOF":
            self.error("unexpected token after the bivector")
        return StructureDoc(coords, weights, volume, terms)

    def coord_decl(self) -> Tuple[str, ...]:
        if not (self.tok.kind == "IDENT" and self.tok.text == "coords"):
            self.error("expected 'coords(...)' declaration")
        self.advance()
        self.expect("(")
        names = []
        while True:
            t = self.tok
            if t.kind != "IDENT":
                self.error("expected a coordinate name")
            if t.text in names:
                self.error("coordinate declared twice", t)
            names.append(t.text)
            self.advance()
            if self.at(","):
                self.advance()
                continue
            if self.at(")"):
                self.advance()
                break
            self.error("expected ',' or ')' in coordinate list")
        self.coords = tuple(names)
        self.index = {c: j for j, c in enumerate(names)}
        return self.coords

    def int_list(self, what: str) -> List[Tuple[Token, str]]:
        self.advance()
        self.expect("(")
        out = []
        while True:
            t = self.tok
            if t.kind != "NUMBER":
                self.error(f"expected a number in {what}")
            out.append((t, t.text))
            self.advance()
            if self.at(","):
                self.advance()
                continue
            if self.at(")"):
                self.advance()
                return out
            self.error(f"expected ',' or ')' in {what}")

    def weight_decl(self) -> Tuple[int, ...]:
        items = self.int_list("weights")
        ws = []
        for t, s in items:
            if "/" in s or int(s) <= 0:
                self.error("weights must be positive integers", t)
            ws.append(int(s))
        if len(ws) != len(self.coords):
            self.error(f"{len(ws)} weights given for {len(self.coords)} coordinates", items[-1][0])
        return tuple(ws)

    def volume_decl(self) -> Fraction:
        items = self.int_list("volume")
        if len(items) != 1:
            self.error("volume takes a single positive number", items[-1][0])
        t, s = items[0]
        v = Fraction(s)
        if v <= 0:
            self.error("volume scale must be positive", t)
        return v

    def bivector(self) -> List[Tuple[Polynomial, Tuple[int, int]]]:
        terms = [self.term(1)]
        while self.at("+") or self.at("-"):
            sign = 1 if self.advance().text == "+" else -1
            terms.append(self.term(sign))
        return [t for t in terms if t is not None]

    def _is_basis_start(self) -> bool:
        t = self.tok
        if t.kind != "IDENT" or not t.text.startswith("d") or t.text[1:] not in self.index:
            return False
        nxt = self.peek()
        if not (nxt.kind == "OP" and nxt.text == "^"):
            return False
        if t.text in self.index:
            # a coordinate literally named like a basis token: "^" followed by a number is a power
            return self.peek(2).kind != "NUMBER"
        return True

    def term(self, sign: int):
        n = len(self.coords)
        start = self.tok
        if self.at("-"):
            self.advance()
            sign = -sign
        coeff = Polynomial.constant(sign, n)
        while True:
            if self._is_basis_start():
                return coeff, self.basis()
            coeff = coeff * self.power()
            if self.at("*"):
                self.advance()
                continue
            break
        if coeff.is_zero() and not self.at(")"):
            return None
        if self.at(")"):
            self.error("unbalanced parentheses: unexpected ')'")
        self.error("term has no basis bivector 'd<a>^d<b>'", start if self.tok.kind == "EOF" else None)

    def basis(self) -> Tuple[int, int]:
        first = self.advance()
        caret = self.expect("^")
        second = self.tok
        if second.kind != "IDENT" or not second.text.startswith("d") or second.text[1:] not in self.index:
            if second.kind == "IDENT" and second.text.startswith("d"):
                self.error(f"unknown coordinate {second.text[1:]!r} in basis", second)
            self.error("malformed basis: expected 'd<coordinate>' after '^'", caret)
        self.advance()
        a, b = self.index[first.text[1:]], self.index[second.text[1:]]
        if a == b:
            self.error("repeated coordinate in basis bivector", second)
        if self.at("^"):
            self.error("only bivector basis elements 'd<a>^d<b>' are allowed")
        return a, b

    # polynomial expressions
    def poly_sum(self) -> Polynomial:
        n = len(self.coords)
        sign = 1
        if self.at("-"):
            self.advance()
            sign = -1
        acc = self.poly_product() * sign
        while self.at("+") or self.at("-"):
            s = 1 if self.advance().text == "+" else -1
            acc = acc + self.poly_product() * s
        return acc

    def poly_product(self) -> Polynomial:
        acc = self.power()
        while self.at("*"):
            self.advance()
            acc = acc * self.power()
        return acc

    def power(self) -> Polynomial:
        base = self.atom()
        if self.at("^"):
            caret = self.advance()
            t = self.tok
            if t.kind != "NUMBER" or "/" in t.text:
                self.error("exponent must be a non-negative integer", t if t.kind != "EOF" else caret)
            self.advance()
            base = base ** int(t.text)
        return base

    def atom(self) -> Polynomial:
        n = len(self.coords)
        t = self.tok
        if t.kind == "NUMBER":
            self.advance()
            return Polynomial.constant(Fraction(t.text), n)
        if t.kind == "IDENT":
            if t.text not in self.index:
                if t.text.startswith("d") and t.text[1:] in self.index:
                    self.error("basis bivector must be the last factor of a term", t)
                self.error(f"unknown identifier {t.text!r}", t)
            self.advance()
            return Polynomial.variable(self.index[t.text], n)
        if self.at("("):
            open_tok = self.advance()
            inner = self.poly_sum()
            if not self.at(")"):
                if self.tok.kind == "EOF":
                    self.error("unbalanced parentheses: '(' is never closed", open_tok)
                self.error("expected ')'")
            self.advance()
            return inner
        if self.at(")"):
            self.error("unbalanced parentheses: unexpected ')'")
        self.error("expected a number, coordinate or '('")


def parse_structure(text: str) -> StructureDoc:
    return _Parser(text).doc()


def parse_poisson(text: str, name: Optional[str] = None) -> PoissonStructure:
    return parse_structure(text).to_structure(name)


def format_structure(pi: PoissonStructure) -> str:
    """DSL text for pi; parsing it back gives the same bivector."""
    for c in pi.coords:
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", c) or c in ("coords", "weights", "volume"):
            raise ValueError(f"coordinate name {c!r} cannot be written in the text format")
    lines = [f"coords({', '.join(pi.coords)})"]
    if any(w != 1 for w in pi.weights):
        lines.append(f"weights({', '.join(str(w) for w in pi.weights)})")
    if pi.volume.scale != 1:
        lines.append(f"volume({pi.volume.scale})")
    lines.append(pi.bivector.to_string(pi.coords))
    return "\n".join(lines) + "\n"
