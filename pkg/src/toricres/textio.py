"""Canonical polynomial text and a small expression tokenizer/parser."""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

from .poly import Poly, qnorm


class InputError(Exception):
    """Base class for errors in user input; carries an optional position."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.message = message
        self.line = line
        self.col = col
        where = f" at line {line}, column {col}" if line is not None else ""
        super().__init__(message + where)


class PolySyntaxError(InputError):
    pass


class UndeclaredSymbol(InputError):
    pass


class DuplicateDefinition(InputError):
    pass


def _coeff_text(c) -> str:
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def format_monomial(e: Sequence[int], gens: Sequence[str]) -> str:
    parts = []
    for g, k in zip(gens, e):
        if k == 1:
            parts.append(g)
        elif k:
            parts.append(f"{g}^{k}")
    return "*".join(parts)


def format_polynomial(p: Poly, gens: Sequence[str] | None = None) -> str:
    """Canonical text: graded-lex order, explicit signs, no unit coefficients."""
    if gens is not None:
        p = p.with_gens(tuple(gens) + tuple(g for g in p.used_gens() if g not in gens))
    if not p.terms:
        return "0"
    out = []
    for i, (e, c) in enumerate(p.sorted_terms()):
        neg = c < 0
        a = -c if neg else c
        mono = format_monomial(e, p.gens)
        if not mono:
            body = _coeff_text(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_coeff_text(a)}*{mono}"
        if i == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


# -- tokenizer ---------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<range>\.\.)
  | (?P<number>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),;=\[\]])
    """,
    re.VERBOSE,
)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int
    gap_line: int  # position right after the previous token, for "missing *" errors
    gap_col: int


def tokenize(text: str) -> List[Token]:
    toks: List[Token] = []
    line, col = 1, 1
    pos = 0
    last_end = (1, 1)
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise PolySyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        s = m.group()
        if kind == "nl":
            line += 1
            col = 1
        elif kind in ("ws", "comment"):
            col += len(s)
        else:
            toks.append(Token(kind, s, line, col, *last_end))
            col += len(s)
            last_end = (line, col)
        pos = m.end()
    toks.append(Token("eof", "", line, col, *last_end))
    return toks


class ExprParser:
    """Recursive-descent parser over a token list.

    ``resolve(name, token)`` maps identifiers to polynomials; the default
    makes a fresh generator for each new name.
    """

    def __init__(self, toks: List[Token], resolve=None):
        self.toks = toks
        self.i = 0
        self.resolve = resolve or (lambda name, tok: Poly.var(name))

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def accept(self, text: str) -> Optional[Token]:
        if self.tok.kind == "op" and self.tok.text == text:
            return self.next()
        return None

    def expect(self, text: str) -> Token:
        t = self.accept(text)
        if t is None:
            self.error(f"expected {text!r}")
        return t

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        found = tok.text or "end of input"
        raise PolySyntaxError(f"{msg}, found {found!r}", tok.line, tok.col)

    def expr(self, summands: list | None = None) -> Poly:
        """Parse a sum; top-level summands are appended to ``summands`` if given."""
        p = self.term()
        if summands is not None:
            summands.append(p)
        while True:
            if self.accept("+"):
                q = self.term()
                p = p + q
            elif self.accept("-"):
                q = -self.term()
                p = p + q
            else:
                break
            if summands is not None:
                summands.append(q)
        nt = self.tok
        if nt.kind in ("ident", "number") or (nt.kind == "op" and nt.text == "("):
            raise PolySyntaxError(f"missing '*' before {nt.text!r}", nt.gap_line, nt.gap_col)
        return p

    def term(self) -> Poly:
        p = self.unary()
        while True:
            if self.accept("*"):
                p = p * self.unary()
            elif self.tok.kind == "op" and self.tok.text == "/":
                t = self.next()
                d = self.unary()
                if not d.is_constant() or d.constant_value() == 0:
                    self.error("division only by a nonzero number", t)
                p = p / d.constant_value()
            else:
                break
        return p

    def unary(self) -> Poly:
        if self.accept("-"):
            return -self.unary()
        if self.accept("+"):
            return self.unary()
        return self.power()

    def signed_int(self) -> int:
        sign = -1 if self.accept("-") else 1
        if self.accept("("):
            v = self.signed_int()
            self.expect(")")
            return sign * v
        t = self.tok
        if t.kind != "number":
            self.error("expected integer exponent")
        self.next()
        return sign * int(t.text)

    def power(self) -> Poly:
        base_tok = self.tok
        base = self.atom()
        if self.accept("^"):
            k = self.signed_int()
            if k < 0 and not base.is_monomial():
                self.error("negative exponent on a non-monomial", base_tok)
            base = base**k
        return base

    def atom(self) -> Poly:
        t = self.tok
        if t.kind == "number":
            self.next()
            return Poly.const(int(t.text))
        if t.kind == "ident":
            self.next()
            return self.resolve(t.text, t)
        if self.accept("("):
            p = self.expr()
            self.expect(")")
            return p
        self.error("expected a number, symbol or '('")


def parse_polynomial(text: str, gens: Sequence[str] | None = None) -> Poly:
    """Parse a polynomial expression.

    With ``gens`` given, every identifier must be one of them and the result
    is expressed over exactly ``gens``.
    """
    toks = tokenize(text)
    if gens is not None:
        allowed = set(gens)

        def resolve(name, tok):
            if name not in allowed:
                raise UndeclaredSymbol(f"undeclared symbol {name!r}", tok.line, tok.col)
            return Poly.var(name)

    else:
        resolve = None
    ps = ExprParser(toks, resolve)
    p = ps.expr()
    if ps.tok.kind != "eof":
        ps.error("unexpected token")
    if gens is not None:
        p = p.with_gens(gens)
    return p


def parse_rational(text: str):
    return qnorm(Fraction(text.strip()))
