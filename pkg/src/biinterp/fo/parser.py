"""Recursive-descent parser for the formula language.

Grammar (whitespace-insensitive)::

    formula := ("exists"|"forall") binder ("," binder)* "." formula | disj
    binder  := ident ":" ident
    disj    := conj ("or" conj)*
    conj    := lit ("and" lit)*
    lit     := "not" lit | "(" formula ")" | atom
    atom    := term "=" term | term "in" ident
    term    := factor ("*" factor)*
    factor  := base ("^" base | "^-1")*
    base    := ident | "$" ident | "1" | "(" term ")"
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from biinterp.errors import VerifierError
from biinterp.fo.syntax import (
    KEYWORDS,
    And,
    Conj,
    Eq,
    Exists,
    Forall,
    Formula,
    InSort,
    Inverse,
    Not,
    One,
    Or,
    Param,
    Product,
    Term,
    Var,
)


class ParseError(VerifierError):
    """Lexing or parsing failure at ``line``/``column`` (1-based)."""

    def __init__(self, message: str, line: int, column: int, expected: frozenset[str] = frozenset()):
        self.line = line
        self.column = column
        self.expected = frozenset(expected)
        detail = f" (expected one of: {', '.join(sorted(self.expected))})" if self.expected else ""
        super().__init__(f"{line}:{column}: {message}{detail}")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<inv>\^\s*-\s*1(?![0-9]))
  | (?P<param>\$[A-Za-z_][A-Za-z0-9_]*)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<one>1(?![0-9]))
  | (?P<op>[()*^=:,.])
    """,
    re.VERBOSE,
)

_TERM_START = frozenset({"identifier", "$parameter", "'1'", "'('"})


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            line, col = _line_col(text, pos)
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind != "ws":
            value = m.group()
            if kind == "ident" and value in KEYWORDS:
                kind = value
            elif kind == "op":
                kind = value
            tokens.append(Token(kind, value, pos))
        pos = m.end()
    tokens.append(Token("eof", "", len(text)))
    return tokens


def _line_col(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


_DESCRIBE = {
    "ident": "identifier",
    "param": "$parameter",
    "one": "'1'",
    "inv": "'^-1'",
    "eof": "end of input",
}


def _describe(kind: str) -> str:
    if kind in _DESCRIBE:
        return _DESCRIBE[kind]
    if kind in KEYWORDS:
        return f"'{kind}'"
    return f"'{kind}'"


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        # furthest failure seen, for error reporting after backtracking
        self.err_pos = -1
        self.err_expected: set[str] = set()

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def fail(self, expected) -> ParseError:
        tok = self.tok
        if tok.pos > self.err_pos:
            self.err_pos = tok.pos
            self.err_expected = set(expected)
        elif tok.pos == self.err_pos:
            self.err_expected |= set(expected)
        line, col = _line_col(self.text, self.err_pos)
        found = "end of input" if self.tokens[self.i].kind == "eof" else repr(tok.text)
        if self.err_pos != tok.pos:
            at = next(t for t in self.tokens if t.pos >= self.err_pos)
            found = "end of input" if at.kind == "eof" else repr(at.text)
        return ParseError(f"unexpected {found}", line, col, frozenset(self.err_expected))

    def expect(self, kind: str) -> Token:
        if self.tok.kind != kind:
            raise self.fail({_describe(kind)})
        tok = self.tok
        self.i += 1
        return tok

    def accept(self, kind: str) -> bool:
        if self.tok.kind == kind:
            self.i += 1
            return True
        return False

    # formulas

    def formula(self) -> Formula:
        if self.tok.kind in ("exists", "forall"):
            q = Exists if self.tok.kind == "exists" else Forall
            self.i += 1
            binders = [self.binder()]
            while self.accept(","):
                binders.append(self.binder())
            self.expect(".")
            return q(tuple(binders), self.formula())
        return self.disj()

    def binder(self) -> tuple[str, str]:
        var = self.expect("ident").text
        self.expect(":")
        sort = self.expect("ident").text
        return var, sort

    def disj(self) -> Formula:
        args = [self.conj()]
        while self.accept("or"):
            args.append(self.conj())
        return args[0] if len(args) == 1 else Or(tuple(args))

    def conj(self) -> Formula:
        args = [self.lit()]
        while self.accept("and"):
            args.append(self.lit())
        return args[0] if len(args) == 1 else And(tuple(args))

    def lit(self) -> Formula:
        if self.accept("not"):
            return Not(self.lit())
        if self.tok.kind == "(":
            start = self.i
            try:
                return self.atom()
            except ParseError:
                self.i = start
            self.expect("(")
            f = self.formula()
            self.expect(")")
            return f
        return self.atom()

    def atom(self) -> Formula:
        left = self.term()
        if self.accept("="):
            return Eq(left, self.term())
        if self.accept("in"):
            return InSort(left, self.expect("ident").text)
        raise self.fail({"'='", "'in'", "'*'", "'^'", "'^-1'"})

    # terms

    def term(self) -> Term:
        t = self.factor()
        while self.accept("*"):
            t = Product(t, self.factor())
        return t

    def factor(self) -> Term:
        t = self.base()
        while True:
            if self.accept("^"):
                t = Conj(t, self.base())
            elif self.accept("inv"):
                t = Inverse(t)
            else:
                return t

    def base(self) -> Term:
        tok = self.tok
        if tok.kind == "ident":
            self.i += 1
            return Var(tok.text)
        if tok.kind == "param":
            self.i += 1
            return Param(tok.text[1:])
        if tok.kind == "one":
            self.i += 1
            return One()
        if tok.kind == "(":
            self.i += 1
            t = self.term()
            self.expect(")")
            return t
        raise self.fail(_TERM_START)


def parse(text: str) -> Formula:
    """Parse ``text`` into a :class:`Formula`.

    Raises:
        ParseError: with line, column and the set of expected tokens.
    """
    p = _Parser(text)
    f = p.formula()
    if p.tok.kind != "eof":
        raise p.fail({"end of input", "'and'", "'or'"})
    return f


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    if p.tok.kind != "eof":
        raise p.fail({"end of input", "'*'", "'^'"})
    return t
