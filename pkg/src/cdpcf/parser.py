"""Recursive-descent parser for ``.cdpcf`` source text.

Grammar (``+`` binds loosest, prefix operators bind tighter than application)::

    program ::= ("def" NAME "=" term ";")* term
    term    ::= unary ("+" unary)*
    unary   ::= "\\" NAME ":" type "." term
              | "let[d](" NAME "=" term ")" [":" tyatom] term
              | prefix prefix*
    prefix  ::= op prefix | "lin" prefix prefix | atom
    op      ::= succ[d] | pred[d] | proj[i,d] | inj[i,d] | sum[d] | flip[d,l] | D | fix | dlin
    atom    ::= NAME | NUM | "(" term ")" | "if[d](" term "," term "," term ")" [":" tyatom]
              | "zero" ":" tyatom
    type    ::= tyatom ["->" type]
    tyatom  ::= "Nat" | "D" tyatom | "(" type ")"
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .differential import sugar_ldiffd, sugar_linapp
from .syntax import (
    NAT,
    Abs,
    App,
    Arrow,
    DOp,
    Fix,
    Flip,
    If,
    Inj,
    Let,
    Num,
    Plus,
    Pred,
    Proj,
    Succ,
    SumOp,
    Term,
    Ty,
    Var,
    Zero,
    d_type,
    subst,
)

KEYWORDS = {
    "succ", "pred", "proj", "inj", "sum", "flip", "D", "fix", "dlin", "lin",
    "if", "let", "zero", "Nat", "def",
}
PREFIX_OPS = {"succ", "pred", "proj", "inj", "sum", "flip", "D", "fix", "dlin"}

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<num>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<arrow>->|→)
  | (?P<sym>[\\λ().:,=+\[\];])
    """,
    re.VERBOSE,
)


class ParseError(Exception):
    def __init__(self, msg: str, line: int, col: int) -> None:
        super().__init__(f"{line}:{col}: {msg}")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        tok = m.group()
        if kind != "ws":
            if kind == "arrow":
                tok = "->"
            if tok == "λ":
                tok = "\\"
            out.append(Token(kind, tok, line, pos - line_start + 1))
        nl = tok.count("\n") if kind == "ws" else 0
        if nl:
            line += nl
            line_start = pos + m.group().rindex("\n") + 1
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


@dataclass
class SourceProgram:
    text: str
    term: Term
    expected: Optional[str] = None


class _Parser:
    def __init__(self, text: str) -> None:
        self.toks = tokenize(text)
        self.i = 0

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str) -> ParseError:
        t = self.tok
        found = t.text or "end of input"
        return ParseError(f"{msg}, found {found!r}", t.line, t.col)

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind != "eof"

    def eat(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(f"expected {text!r}")
        t = self.tok
        self.i += 1
        return t

    def name(self) -> str:
        t = self.tok
        if t.kind != "name" or t.text in KEYWORDS:
            raise self.error("expected a variable name")
        self.i += 1
        return t.text

    def nat(self) -> int:
        t = self.tok
        if t.kind != "num":
            raise self.error("expected a natural number")
        self.i += 1
        return int(t.text)

    def bracket(self, count: int, bit_first: bool = False) -> list[int]:
        self.eat("[")
        first = self.tok
        vals = [self.nat()]
        if bit_first and vals[0] not in (0, 1):
            raise ParseError(f"index {vals[0]} is not a bit", first.line, first.col)
        for _ in range(count - 1):
            self.eat(",")
            vals.append(self.nat())
        self.eat("]")
        return vals

    # types
    def type_(self) -> Ty:
        a = self.tyatom()
        if self.at("->"):
            self.i += 1
            return Arrow(a, self.type_())
        return a

    def tyatom(self) -> Ty:
        if self.at("Nat"):
            self.i += 1
            return NAT
        if self.at("D"):
            self.i += 1
            return d_type(self.tyatom())
        if self.at("("):
            self.i += 1
            a = self.type_()
            self.eat(")")
            return a
        raise self.error("expected a type")

    # terms
    def program(self) -> Term:
        defs: list[tuple[str, Term]] = []
        while self.at("def"):
            self.i += 1
            n = self.name()
            self.eat("=")
            body = self.term()
            self.eat(";")
            defs.append((n, body))
        t = self.term()
        if self.tok.kind != "eof":
            raise self.error("unexpected trailing input")
        for n, body in reversed(defs):
            t = subst(t, body, n)
        return t

    def term(self) -> Term:
        t = self.unary()
        while self.at("+"):
            self.i += 1
            t = Plus(t, self.unary())
        return t

    def unary(self) -> Term:
        if self.at("\\"):
            self.i += 1
            x = self.name()
            self.eat(":")
            a = self.type_()
            self.eat(".")
            return Abs(x, a, self.term())
        if self.at("let"):
            self.i += 1
            (d,) = self.bracket(1)
            self.eat("(")
            x = self.name()
            self.eat("=")
            bound = self.term()
            self.eat(")")
            ann = None
            if self.at(":"):
                self.i += 1
                ann = self.tyatom()
            return Let(d, x, bound, self.term(), ann)
        t = self.prefix()
        while self.starts_prefix():
            t = App(t, self.prefix())
        return t

    def starts_prefix(self) -> bool:
        t = self.tok
        if t.kind == "num":
            return True
        if t.kind == "name":
            return t.text not in KEYWORDS or t.text in PREFIX_OPS | {"lin", "if", "zero"}
        return t.text == "("

    def prefix(self) -> Term:
        t = self.tok
        if t.kind == "name" and t.text in PREFIX_OPS:
            self.i += 1
            op = t.text
            if op == "succ":
                (d,) = self.bracket(1)
                return Succ(d, self.prefix())
            if op == "pred":
                (d,) = self.bracket(1)
                return Pred(d, self.prefix())
            if op == "proj":
                i, d = self.bracket(2, bit_first=True)
                return Proj(i, d, self.prefix())
            if op == "inj":
                i, d = self.bracket(2, bit_first=True)
                return Inj(i, d, self.prefix())
            if op == "sum":
                (d,) = self.bracket(1)
                return SumOp(d, self.prefix())
            if op == "flip":
                d, l = self.bracket(2)
                return Flip(d, l, self.prefix())
            if op == "D":
                return DOp(self.prefix())
            if op == "fix":
                return Fix(self.prefix())
            return sugar_ldiffd(self.prefix())
        if t.kind == "name" and t.text == "lin":
            self.i += 1
            f = self.prefix()
            return sugar_linapp(f, self.prefix())
        return self.atom()

    def atom(self) -> Term:
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return Num(int(t.text))
        if t.text == "(" and t.kind == "sym":
            self.i += 1
            inner = self.term()
            self.eat(")")
            return inner
        if t.kind == "name" and t.text == "if":
            self.i += 1
            (d,) = self.bracket(1)
            self.eat("(")
            c = self.term()
            self.eat(",")
            p = self.term()
            self.eat(",")
            q = self.term()
            self.eat(")")
            ann = None
            if self.at(":"):
                self.i += 1
                ann = self.tyatom()
            return If(d, c, p, q, ann)
        if t.kind == "name" and t.text == "zero":
            self.i += 1
            self.eat(":")
            return Zero(self.tyatom())
        if t.kind == "name":
            return Var(self.name())
        raise self.error("expected a term")


_EXPECT = re.compile(r"^#\s*expect:\s*(\S+)", re.MULTILINE)


def parse(text: str) -> Term:
    return _Parser(text).program()


def parse_type(text: str) -> Ty:
    p = _Parser(text)
    a = p.type_()
    if p.tok.kind != "eof":
        raise p.error("unexpected trailing input")
    return a


def parse_program(text: str) -> SourceProgram:
    m = _EXPECT.search(text)
    return SourceProgram(text, parse(text), m.group(1) if m else None)


def load(path: str) -> SourceProgram:
    with open(path, encoding="utf-8") as fh:
        return parse_program(fh.read())
