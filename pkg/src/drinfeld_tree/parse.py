"""Literal grammar for elements of F_q(T), shared by the library and the CLI.

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor | implicit factor)*
    factor := ('-' factor) | atom ('^' integer)?
    atom   := integer | 'T' | 'a' | '(' expr ')'

Integers map to F_q through Z -> F_p.  The symbol ``a`` is the fixed
multiplicative generator of F_q (for q = p^e, e > 1 it is a root of the
primitive polynomial used to build the field tables).
"""

from __future__ import annotations

import re

from .arith import Fq, Poly, RatFn, field


class ParseError(ValueError):
    pass


_TOKEN = re.compile(r"\s*(?:(\d+)|([Ta])|(\*\*|[-+*/^()]))")


def _tokenize(text: str) -> list[str]:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at position {pos} in {text!r}")
        tok = m.group(1) or m.group(2) or m.group(3)
        out.append("^" if tok == "**" else tok)
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


class _Parser:
    def __init__(self, text: str, F: Fq):
        self.toks = _tokenize(text)
        self.i = 0
        self.F = F
        if not self.toks:
            raise ParseError("empty expression")

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input" + (f", expected {expected!r}" if expected else ""))
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r}, got {tok!r}")
        self.i += 1
        return tok

    def parse(self) -> RatFn:
        val = self.expr()
        if self.peek() is not None:
            raise ParseError(f"trailing input starting at {self.peek()!r}")
        return val

    def expr(self) -> RatFn:
        val = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self) -> RatFn:
        val = self.factor()
        while True:
            tok = self.peek()
            if tok in ("*", "/"):
                self.take()
                rhs = self.factor()
                if tok == "*":
                    val = val * rhs
                else:
                    if not rhs:
                        raise ParseError("division by zero")
                    val = val / rhs
            elif tok is not None and (tok in ("T", "a", "(") or tok.isdigit()):
                val = val * self.factor()
            else:
                return val

    def factor(self) -> RatFn:
        if self.peek() == "-":
            self.take()
            return -self.factor()
        base = self.atom()
        if self.peek() == "^":
            self.take()
            neg = False
            if self.peek() == "-":
                self.take()
                neg = True
            tok = self.take()
            if not tok.isdigit():
                raise ParseError(f"exponent must be an integer, got {tok!r}")
            e = int(tok)
            if neg:
                if not base:
                    raise ParseError("negative power of zero")
                e = -e
            return base**e
        return base

    def atom(self) -> RatFn:
        tok = self.take()
        F = self.F
        if tok.isdigit():
            return RatFn.of(int(tok), F)
        if tok == "T":
            return RatFn(Poly.T(F), reduced=True)
        if tok == "a":
            return RatFn(Poly.const(F, F.gen), reduced=True)
        if tok == "(":
            val = self.expr()
            self.take(")")
            return val
        raise ParseError(f"unexpected token {tok!r}")


def parse_ratfn(text: str, q: int = 2) -> RatFn:
    """Parse a literal like ``(T+1)^3/T`` into a reduced rational function."""
    try:
        F = field(q)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    return _Parser(text, F).parse()


def parse_poly(text: str, q: int = 2) -> Poly:
    x = parse_ratfn(text, q)
    if not x.is_poly():
        raise ParseError(f"{text!r} is not a polynomial")
    return x.num


def _coef_str(F: Fq, c: int) -> str:
    if F.e == 1:
        return str(c)
    # powers of the generator; c == 1 is a^0
    j = next(j for j in range(F.q - 1) if F.pow(F.gen, j) == c)
    return "1" if j == 0 else ("a" if j == 1 else f"a^{j}")


def format_poly(f: Poly) -> str:
    if not f:
        return "0"
    F = f.F
    parts = []
    for k in range(f.deg, -1, -1):
        c = f[k]
        if not c:
            continue
        cs = _coef_str(F, c)
        mono = "" if k == 0 else ("T" if k == 1 else f"T^{k}")
        if not mono:
            parts.append(cs)
        elif cs == "1":
            parts.append(mono)
        else:
            parts.append(f"{cs}*{mono}")
    return "+".join(parts)


def format_ratfn(x: RatFn) -> str:
    num = format_poly(x.num)
    if x.den.is_one():
        return num
    den = format_poly(x.den)
    if len(x.num.c) > 1 and "+" in num:
        num = f"({num})"
    if "+" in den or "*" in den:
        den = f"({den})"
    return f"{num}/{den}"
