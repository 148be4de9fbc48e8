"""Concrete syntax: recursive-descent parser and minimal-parentheses printer.

Grammar (loosest to tightest)::

    formula := equiv
    equiv   := impl ('<->' impl)*            left associative
    impl    := disj ('->' impl)?             right associative
    disj    := conj ('|' conj)*
    conj    := unary ('&' unary)*
    unary   := '~' unary | 'exists' var '.' unary | 'forall' var '.' unary | atom
    atom    := ident ['(' term (',' term)* ')'] | '$' ident ['(' ... ')'] | '(' formula ')'
    term    := 'eps' var '.' unary | ident '(' [term (',' term)*] ')' | var

An uppercase identifier without arguments is a nullary formula variable;
`$A(t1, ..., tn)` writes an n-ary one. Any identifier followed by
parentheses is a predicate (formula position) or function (term position).
A bare identifier in term position is an individual variable.
Unicode aliases are accepted on input: exists forall eps ~ & | -> <->
may be written as the corresponding logic symbols.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .syntax import (
    ArityError, Bin, Connective, Eps, FmlApp, FnApp, Formula, Node, Not,
    PredApp, Quant, Quantifier, Term, Var, check_arities,
)

__all__ = [
    "SourceSpan", "ParseError", "parse_formula", "parse_term",
    "print_formula", "print_term", "read_corpus",
]


@dataclass(frozen=True)
class SourceSpan:
    """Byte offsets into the (UTF-8 encoded) input."""
    start: int
    end: int

    def __post_init__(self):
        if not 0 <= self.start <= self.end:
            raise ValueError(f"bad span {self.start}..{self.end}")


class ParseError(ValueError):
    def __init__(self, message: str, span: SourceSpan | None = None, text: str = ""):
        self.span = span
        self.text = text
        where = f" at bytes {span.start}-{span.end}" if span else ""
        super().__init__(f"{message}{where}")


_ALIASES = {
    "∃": "exists", "∀": "forall", "ε": "eps", "¬": "~",
    "∧": "&", "∨": "|", "→": "->", "↔": "<->",
}
_KEYWORDS = {"exists", "forall", "eps"}

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<op><->|->|[~&|(),.$])
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<uni>[∃∀ε¬∧∨→↔])
""", re.VERBOSE)


@dataclass
class _Tok:
    kind: str  # "op" | "ident" | "kw" | "eof"
    text: str
    start: int
    end: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    i = 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if m is None:
            raise ParseError(f"unexpected character {text[i]!r}", _span(text, i, i + 1), text)
        kind = m.lastgroup
        if kind == "uni":
            val = _ALIASES[m.group()]
            toks.append(_Tok("kw" if val in _KEYWORDS else "op", val, i, m.end()))
        elif kind == "ident":
            val = m.group()
            toks.append(_Tok("kw" if val in _KEYWORDS else "ident", val, i, m.end()))
        elif kind == "op":
            toks.append(_Tok("op", m.group(), i, m.end()))
        i = m.end()
    toks.append(_Tok("eof", "", len(text), len(text)))
    return toks


def _span(text: str, start: int, end: int) -> SourceSpan:
    return SourceSpan(len(text[:start].encode()), len(text[:end].encode()))


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, message: str, tok: _Tok | None = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(message, _span(self.text, tok.start, max(tok.end, tok.start)), self.text)

    def at(self, text: str) -> bool:
        return self.tok.kind in ("op", "kw") and self.tok.text == text

    def expect(self, text: str) -> _Tok:
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        tok = self.tok
        self.i += 1
        return tok

    def ident(self, what: str) -> str:
        if self.tok.kind != "ident":
            found = self.tok.text or "end of input"
            raise self.error(f"expected {what}, found {found!r}")
        name = self.tok.text
        self.i += 1
        return name

    def end(self):
        if self.tok.kind != "eof":
            if self.at(")"):
                raise self.error("unbalanced ')'")
            raise self.error(f"unexpected {self.tok.text!r}")

    # formulas

    def formula(self) -> Formula:
        left = self.impl()
        while self.at("<->"):
            self.i += 1
            left = Bin(Connective.EQUIV, left, self.impl())
        return left

    def impl(self) -> Formula:
        left = self.disj()
        if self.at("->"):
            self.i += 1
            return Bin(Connective.IMPLIES, left, self.impl())
        return left

    def disj(self) -> Formula:
        left = self.conj()
        while self.at("|"):
            self.i += 1
            left = Bin(Connective.OR, left, self.conj())
        return left

    def conj(self) -> Formula:
        left = self.unary()
        while self.at("&"):
            self.i += 1
            left = Bin(Connective.AND, left, self.unary())
        return left

    def unary(self) -> Formula:
        if self.at("~"):
            self.i += 1
            return Not(self.unary())
        if self.at("exists") or self.at("forall"):
            q = Quantifier(self.tok.text)
            self.i += 1
            x = self.ident("a bound variable")
            self.expect(".")
            return Quant(q, x, self.unary())
        return self.atom()

    def atom(self) -> Formula:
        tok = self.tok
        if self.at("("):
            self.i += 1
            f = self.formula()
            if not self.at(")"):
                raise self.error("unbalanced '(': missing ')'", tok)
            self.i += 1
            return f
        if self.at("$"):
            self.i += 1
            name = self.ident("a formula variable name")
            return FmlApp(name, self.args() if self.at("(") else ())
        if tok.kind == "ident":
            self.i += 1
            if self.at("("):
                return PredApp(tok.text, self.args())
            if tok.text[0].isupper():
                return FmlApp(tok.text, ())
            return PredApp(tok.text, ())
        if tok.kind == "eof":
            raise self.error("unexpected end of input")
        raise self.error(f"unexpected {tok.text!r}")

    def args(self) -> tuple[Term, ...]:
        open_tok = self.expect("(")
        if self.at(")"):
            self.i += 1
            return ()
        out = [self.term()]
        while self.at(","):
            self.i += 1
            out.append(self.term())
        if not self.at(")"):
            if self.tok.kind == "eof":
                raise self.error("unbalanced '(': missing ')'", open_tok)
            raise self.error(f"expected ',' or ')', found {self.tok.text!r}")
        self.i += 1
        return tuple(out)

    def term(self) -> Term:
        if self.at("eps"):
            self.i += 1
            x = self.ident("a bound variable")
            self.expect(".")
            return Eps(x, self.unary())
        name = self.ident("a term")
        if self.at("("):
            return FnApp(name, self.args())
        return Var(name)


def _checked(node: Node, text: str) -> Node:
    try:
        check_arities(node)
    except ArityError as exc:
        raise ParseError(str(exc), SourceSpan(0, len(text.encode())), text) from exc
    return node


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    p.end()
    return _checked(f, text)


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    p.end()
    return _checked(t, text)


def read_corpus(text: str) -> list[Formula]:
    """One formula per line; blank lines and `#` comments are skipped."""
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            out.append(parse_formula(line))
        except ParseError as exc:
            raise ParseError(f"line {lineno}: {exc}", exc.span, line) from exc
    return out


# -- printing ----------------------------------------------------------------

_PREC = {Connective.EQUIV: 1, Connective.IMPLIES: 2, Connective.OR: 3, Connective.AND: 4}
_UNARY = 5
# operand precedence required on the (left, right) side of each connective
_SIDES = {
    Connective.EQUIV: (1, 2),
    Connective.IMPLIES: (3, 2),
    Connective.OR: (3, 4),
    Connective.AND: (4, 5),
}


def print_formula(f: Formula) -> str:
    return _fmt(f, 0)


def _fmt(f: Formula, ctx: int) -> str:
    if isinstance(f, Bin):
        lp, rp = _SIDES[f.op]
        s = f"{_fmt(f.left, lp)} {f.op.value} {_fmt(f.right, rp)}"
        return f"({s})" if _PREC[f.op] < ctx else s
    if isinstance(f, Not):
        return "~" + _fmt(f.arg, _UNARY)
    if isinstance(f, Quant):
        return f"{f.q.value} {f.var}. {_fmt(f.body, _UNARY)}"
    if isinstance(f, PredApp):
        return f"{f.symbol}({_fmt_args(f.args)})"
    if isinstance(f, FmlApp):
        if not f.args and f.name[0].isupper():
            return f.name
        return f"${f.name}({_fmt_args(f.args)})" if f.args else f"${f.name}"
    raise TypeError(f"not a formula: {f!r}")


def _fmt_args(args) -> str:
    return ", ".join(print_term(a) for a in args)


def print_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, FnApp):
        return f"{t.symbol}({_fmt_args(t.args)})"
    if isinstance(t, Eps):
        return f"eps {t.var}. {_fmt(t.body, _UNARY)}"
    raise TypeError(f"not a term: {t!r}")
