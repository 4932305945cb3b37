"""Concrete syntax: tokenizer, recursive-descent parser and pretty-printer.

Grammar (loosest to tightest): ``+``, ``||``, ``|>``, ``|``, prefix ``.``.
All binary operators associate to the left.  Variables carry a ``$`` sigil;
indexed variables are written ``$x@a`` and only live in configurations.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .syntax import (NIL, TAU, Action, CMerge, Choice, CPar, DomainError,
                     Equation, IVar, LMerge, Nil, Node, Par, Prefix, Term, Var,
                     par_of)


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    length: int

    def __str__(self):
        return f"{self.line}:{self.column}"


class ParseError(ValueError):
    def __init__(self, message: str, span: SourceSpan):
        super().__init__(f"{span}: {message}")
        self.message = message
        self.span = span


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    span: SourceSpan


_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+) |
    (?P<nl>\n) |
    (?P<comment>\#[^\n]*) |
    (?P<op>\|\||\|>|[|+.()~:=;,@]) |
    (?P<var>\$[A-Za-z][A-Za-z0-9_]*) |
    (?P<ident>[A-Za-z_][A-Za-z0-9_']*) |
    (?P<num>[0-9]+) |
    (?P<bad>.)
""", re.VERBOSE)


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start = 1, 0
    for m in _TOKEN_RE.finditer(text):
        kind = m.lastgroup
        col = m.start() - line_start + 1
        span = SourceSpan(line, col, m.end() - m.start())
        if kind == "nl":
            line += 1
            line_start = m.end()
            continue
        if kind in ("ws", "comment"):
            continue
        if kind == "bad":
            if m.group() == "$":
                raise ParseError("unknown sigil: '$' must be followed by a variable name", span)
            raise ParseError(f"unexpected character {m.group()!r}", span)
        if kind == "num" and m.group() != "0":
            raise ParseError(f"unexpected number {m.group()!r} (only 0 is a term)", span)
        tokens.append(Token(kind if kind != "op" else m.group(), m.group(), span))
    end_col = len(text) - line_start + 1
    tokens.append(Token("eof", "", SourceSpan(line, end_col, 0)))
    return tokens


class _Parser:
    def __init__(self, text: str, allow_ivars: bool):
        self.text = text
        self.toks = tokenize(text)
        self.pos = 0
        self.allow_ivars = allow_ivars

    # helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def advance(self) -> Token:
        t = self.toks[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def expect(self, kind: str, what: str | None = None) -> Token:
        t = self.tok
        if t.kind != kind:
            found = "end of input" if t.kind == "eof" else repr(t.text)
            raise ParseError(f"expected {what or repr(kind)}, found {found}", t.span)
        return self.advance()

    def _need_term(self, node: Node, span: SourceSpan, where: str) -> Term:
        if not isinstance(node, Term):
            raise ParseError(f"indexed variables may not occur {where}", span)
        return node

    # grammar
    def parse_sum(self) -> Node:
        left = self.parse_par()
        while self.tok.kind == "+":
            op = self.advance()
            right = self.parse_par()
            self._need_term(left, op.span, "under choice")
            self._need_term(right, op.span, "under choice")
            left = Choice(left, right)
        return left

    def parse_par(self) -> Node:
        left = self.parse_lm()
        while self.tok.kind == "||":
            self.advance()
            left = par_of(left, self.parse_lm())
        return left

    def parse_lm(self) -> Node:
        left = self.parse_cm()
        while self.tok.kind == "|>":
            op = self.advance()
            right = self.parse_cm()
            left = LMerge(self._need_term(left, op.span, "under left merge"),
                          self._need_term(right, op.span, "under left merge"))
        return left

    def parse_cm(self) -> Node:
        left = self.parse_prefix()
        while self.tok.kind == "|":
            op = self.advance()
            right = self.parse_prefix()
            left = CMerge(self._need_term(left, op.span, "under communication merge"),
                          self._need_term(right, op.span, "under communication merge"))
        return left

    def parse_action(self) -> Action:
        t = self.tok
        if t.kind == "~":
            self.advance()
            n = self.tok
            if n.kind != "ident":
                self.expect("ident", "a name after '~'")
            if n.text == "tau":
                raise ParseError("tau cannot be used as a co-name", n.span)
            self._check_name(n)
            self.advance()
            return Action(n.text, True)
        if t.kind == "ident":
            if t.text == "tau":
                self.advance()
                return TAU
            self._check_name(t)
            self.advance()
            return Action(t.text)
        self.expect("ident", "an action")
        raise AssertionError  # unreachable

    @staticmethod
    def _check_name(t: Token):
        if not re.fullmatch(r"[a-z][a-zA-Z0-9_]*", t.text):
            raise ParseError(f"invalid action name {t.text!r}", t.span)

    def parse_prefix(self) -> Node:
        t = self.tok
        if t.kind in ("ident", "~"):
            act = self.parse_action()
            self.expect(".", "'.' after action")
            body = self.parse_prefix()
            return Prefix(act, self._need_term(body, t.span, "under prefix"))
        return self.parse_atom()

    def parse_atom(self) -> Node:
        t = self.tok
        if t.kind == "num":
            self.advance()
            return NIL
        if t.kind == "var":
            self.advance()
            name = t.text[1:]
            if self.tok.kind == "@":
                at = self.advance()
                act = self.parse_action()
                if not self.allow_ivars:
                    raise ParseError("indexed variables are only allowed in configurations",
                                     SourceSpan(t.span.line, t.span.column,
                                                t.span.length + at.span.length))
                return IVar(name, act)
            return Var(name)
        if t.kind == "(":
            self.advance()
            inner = self.parse_sum()
            self.expect(")", "')'")
            return inner
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise ParseError(f"expected a term, found {found}", t.span)

    def finish(self):
        if self.tok.kind != "eof":
            raise ParseError(f"unexpected {self.tok.text!r} after term", self.tok.span)


def parse_term(text: str) -> Term:
    p = _Parser(text, allow_ivars=False)
    t = p.parse_sum()
    p.finish()
    return t


def parse_configuration(text: str) -> Node:
    p = _Parser(text, allow_ivars=True)
    c = p.parse_sum()
    p.finish()
    return c


def parse_equation(text: str) -> Equation:
    p = _Parser(text, allow_ivars=False)
    lhs = p.parse_sum()
    p.expect("=", "'='")
    rhs = p.parse_sum()
    p.finish()
    return Equation(lhs, rhs)


def parse_axiom_file(text: str):
    """Parse ``NAME: t = u;`` entries, with an optional ``alphabet a, b;``
    header, into an AxiomSystem."""
    from .equational.axioms import AxiomSystem

    p = _Parser(text, allow_ivars=False)
    alphabet: list[str] = []
    if p.tok.kind == "ident" and p.tok.text == "alphabet" and p.toks[p.pos + 1].kind != ":":
        p.advance()
        while True:
            n = p.expect("ident", "an action name")
            p._check_name(n)
            alphabet.append(n.text)
            if p.tok.kind == ",":
                p.advance()
                continue
            break
        p.expect(";", "';'")
    eqs: list[Equation] = []
    seen: dict[str, SourceSpan] = {}
    while p.tok.kind != "eof":
        name = p.expect("ident", "an axiom name")
        if name.text in seen:
            raise ParseError(f"duplicate axiom name {name.text!r} (first defined at {seen[name.text]})",
                             name.span)
        seen[name.text] = name.span
        p.expect(":", "':'")
        lhs = p.parse_sum()
        p.expect("=", "'='")
        rhs = p.parse_sum()
        p.expect(";", "';'")
        eqs.append(Equation(lhs, rhs, name.text))
    return AxiomSystem.from_equations("file", eqs, alphabet)


# ---------------------------------------------------------------------------
# Pretty printing

_LEVEL = {Choice: 1, Par: 2, CPar: 2, LMerge: 3, CMerge: 4}
_SYMBOL = {Choice: "+", Par: "||", CPar: "||", LMerge: "|>", CMerge: "|"}
_PREFIX_LEVEL = 5


def _level(n: Node) -> int:
    return _LEVEL.get(type(n), 6 if not isinstance(n, Prefix) else _PREFIX_LEVEL)


def _pp(n: Node) -> str:
    cached = n._pp
    if cached is not None:
        return cached
    if isinstance(n, Nil):
        s = "0"
    elif isinstance(n, Var):
        s = "$" + n.name
    elif isinstance(n, IVar):
        s = f"${n.name}@{n.act}"
    elif isinstance(n, Prefix):
        body = _pp(n.body)
        if _level(n.body) < _PREFIX_LEVEL:
            body = f"({body})"
        s = f"{n.act}.{body}"
    else:
        lvl = _LEVEL[type(n)]
        left, right = _pp(n.left), _pp(n.right)
        if _level(n.left) < lvl:
            left = f"({left})"
        if _level(n.right) <= lvl:
            right = f"({right})"
        s = f"{left} {_SYMBOL[type(n)]} {right}"
    object.__setattr__(n, "_pp", s)
    return s


def pretty_print(x) -> str:
    """Render a term, configuration or equation with minimal parentheses."""
    if isinstance(x, Equation):
        return f"{_pp(x.lhs)} = {_pp(x.rhs)}"
    if isinstance(x, Node):
        return _pp(x)
    if isinstance(x, Action):
        return str(x)
    raise DomainError(f"cannot pretty-print {type(x).__name__}")
