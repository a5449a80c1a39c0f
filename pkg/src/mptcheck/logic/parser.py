"""Parser for the ASCII (and Unicode) formula surface syntax.

Precedence, loosest first::

    <->   ->(right)   |   &   U R L (right)   unary ! X G F, quantifiers
    comparison   + -   * /   unary minus

``forall v . f`` / ``exists v . f`` quantify over whole traces of ``v``;
``forall_val`` / ``exists_val`` bind a single value.  ``v'`` is the value of
``v`` at the next step.  A bare boolean variable ``b`` abbreviates ``b = 1``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .semantics import range_of
from .syntax import (FALSE, TRUE, Always, Arith, Atom, Const, Eventually, ExistsTrace,
                     ExistsValue, ForallTrace, ForallValue, Formula, Iff, Implies, Ite, Leads,
                     Next, NextVar, Not, Release, Term, Until, Var, conj, disj)
from .vocab import Domain, Vocabulary


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, col: int = 1):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


KEYWORDS = {"G", "F", "X", "U", "R", "L", "true", "false", "forall", "exists",
            "forall_val", "exists_val", "if", "then", "else", "and", "or", "not"}

_ALIASES = {
    "¬": "!", "~": "!", "not": "!", "∧": "&", "&&": "&", "and": "&", "∨": "|", "||": "|",
    "or": "|", "⇒": "->", "→": "->", "=>": "->", "⇔": "<->", "↔": "<->", "<=>": "<->",
    "≠": "!=", "≤": "<=", "≥": ">=", "□": "G", "⊡": "G", "◇": "F", "○": "X",
    "∀": "forall", "∃": "exists", "==": "=",
}

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op><->|<=>|->|=>|&&|\|\||!=|<=|>=|==|[()!~&|=<>+\-*/.,:'¬∧∨⇒→⇔↔≠≤≥□⊡◇○∀∃])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str  # num | ident | op | eof
    text: str
    line: int
    col: int


def tokenize(text: str, line: int = 1, col: int = 1) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        s = m.group()
        kind = m.lastgroup
        if kind != "ws":
            if kind == "ident" and s in ("and", "or", "not"):
                kind = "op"
            if kind == "op":
                s = _ALIASES.get(s, s)
            elif kind == "ident":
                s = _ALIASES.get(s, s)
            tokens.append(Token(kind, s, line, col))
        for ch in m.group():
            if ch == "\n":
                line += 1
                col = 1
            else:
                col += 1
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


@dataclass(frozen=True)
class _Name:
    """An identifier that is not a variable: only legal as an enum literal."""

    name: str
    tok: Token


_BOOL = "bool"
_INT = "int"


class _Parser:
    def __init__(self, tokens: list[Token], vocab: Vocabulary,
                 macros: dict[str, Formula] | None = None):
        self.toks = tokens
        self.macros = macros or {}
        self.i = 0
        self.vocab = vocab
        self.domains = {v.name: v.domain for v in vocab}

    # -- token helpers --------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def at(self, *texts: str) -> bool:
        t = self.tok
        return t.kind in ("op", "ident") and t.text in texts

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        return self.advance()

    def fail(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        raise ParseError(msg, tok.line, tok.col)

    # -- formulas -------------------------------------------------------------

    def formula(self) -> Formula:
        return self.as_formula(self.iff(), self.tok)

    def iff(self):
        left = self.imp()
        while self.at("<->"):
            tok = self.advance()
            right = self.imp()
            left = Iff(self.as_formula(left, tok), self.as_formula(right, tok))
        return left

    def imp(self):
        left = self.or_()
        if self.at("->"):
            tok = self.advance()
            right = self.imp()
            return Implies(self.as_formula(left, tok), self.as_formula(right, tok))
        return left

    def or_(self):
        left = self.and_()
        while self.at("|"):
            tok = self.advance()
            right = self.and_()
            left = disj(self.as_formula(left, tok), self.as_formula(right, tok))
        return left

    def and_(self):
        left = self.temporal()
        while self.at("&"):
            tok = self.advance()
            right = self.temporal()
            left = conj(self.as_formula(left, tok), self.as_formula(right, tok))
        return left

    def temporal(self):
        left = self.unary()
        if self.at("U", "R", "L"):
            tok = self.advance()
            right = self.temporal()
            cls = {"U": Until, "R": Release, "L": Leads}[tok.text]
            return cls(self.as_formula(left, tok), self.as_formula(right, tok))
        return left

    def unary(self):
        if self.at("!"):
            tok = self.advance()
            return Not(self.as_formula(self.unary(), tok))
        if self.at("X", "G", "F"):
            tok = self.advance()
            cls = {"X": Next, "G": Always, "F": Eventually}[tok.text]
            return cls(self.as_formula(self.unary(), tok))
        if self.at("forall", "exists", "forall_val", "exists_val"):
            return self.quantifier()
        return self.comparison()

    def quantifier(self) -> Formula:
        kw = self.advance()
        name_tok = self.advance()
        if name_tok.kind != "ident" or name_tok.text in KEYWORDS:
            self.fail("expected a variable name after quantifier", name_tok)
        var = self.vocab.get(name_tok.text)
        if var is None:
            self.fail(f"unknown identifier {name_tok.text!r}", name_tok)
        if self.at(".", ":"):
            self.advance()
        body = self.formula()
        cls = {"forall": ForallTrace, "exists": ExistsTrace,
               "forall_val": ForallValue, "exists_val": ExistsValue}[kw.text]
        return cls(var, body)

    def comparison(self):
        left = self.additive()
        if self.at("=", "!=", "<", "<=", ">", ">="):
            tok = self.advance()
            right = self.additive()
            return self.make_compare(tok, left, right)
        # a bare term; consumers that need a formula convert it via as_formula
        return left

    def make_compare(self, tok: Token, left, right) -> Formula:
        op = tok.text
        if isinstance(left, Formula) or isinstance(right, Formula):
            if op not in ("=", "!="):
                self.fail(f"operator {op!r} is not defined on formulas", tok)
            f = Iff(self.as_formula(left, tok), self.as_formula(right, tok))
            return f if op == "=" else Not(f)
        left, right = self.resolve_names(left, right, tok)
        lt, rt = self.type_of(left, tok), self.type_of(right, tok)
        if lt == "name":
            lt = rt
        elif rt == "name":
            rt = lt
        if lt == "lit" and rt == "lit":
            lt = rt = _INT
        if lt == "lit":
            lt = self.lit_type(left, rt, tok)
        if rt == "lit":
            rt = self.lit_type(right, lt, tok)
        if lt != rt:
            self.fail(f"type mismatch: cannot compare {self.tname(lt)} with {self.tname(rt)}", tok)
        # booleans are 0/1, so they may be ordered against 0 or 1
        bool_vs_lit = lt == _BOOL and (isinstance(left, Const) or isinstance(right, Const))
        if lt != _INT and op not in ("=", "!=") and not bool_vs_lit:
            self.fail(f"operator {op!r} needs integer operands", tok)
        return Atom(op, left, right)

    def lit_type(self, lit: Const, other, tok):
        if other == _BOOL:
            if lit.value not in (0, 1):
                self.fail("type mismatch: boolean compared with integer", tok)
            return _BOOL
        return _INT

    def resolve_names(self, left, right, tok):
        if isinstance(left, _Name) and isinstance(right, _Name):
            self.fail(f"unknown identifier {left.name!r}", left.tok)
        if isinstance(left, _Name):
            left = self.enum_literal(left, self.type_of(right, tok))
        if isinstance(right, _Name):
            right = self.enum_literal(right, self.type_of(left, tok))
        return left, right

    def enum_literal(self, name: _Name, other) -> Const:
        if isinstance(other, Domain) and name.name in other.names:
            return Const(name.name)
        self.fail(f"unknown identifier {name.name!r}", name.tok)

    @staticmethod
    def tname(t) -> str:
        return str(t) if isinstance(t, Domain) else ("integer" if t in (_INT, "lit") else "boolean")

    # -- terms ----------------------------------------------------------------

    def additive(self):
        left = self.multiplicative()
        while self.at("+", "-"):
            tok = self.advance()
            right = self.multiplicative()
            left = self.arith(tok, left, right)
        return left

    def multiplicative(self):
        left = self.negation()
        while self.at("*", "/"):
            tok = self.advance()
            right = self.negation()
            left = self.arith(tok, left, right)
        return left

    def arith(self, tok, left, right) -> Term:
        for side in (left, right):
            if isinstance(side, _Name):
                self.fail(f"unknown identifier {side.name!r}", side.tok)
            if isinstance(side, Formula) or self.type_of(side, tok) not in (_INT, "lit"):
                self.fail(f"type mismatch: operator {tok.text!r} needs integer operands", tok)
        if isinstance(left, Const) and isinstance(right, Const):
            try:
                value = {"+": lambda a, b: a + b, "-": lambda a, b: a - b,
                         "*": lambda a, b: a * b, "/": lambda a, b: a // b}[tok.text](left.value, right.value)
            except ZeroDivisionError:
                self.fail("division by zero", tok)
            return Const(value)
        node = Arith(tok.text, left, right)
        return Arith(tok.text, left, right, range_of(node, self.domains))

    def negation(self):
        if self.at("-"):
            tok = self.advance()
            operand = self.negation()
            if isinstance(operand, Const) and isinstance(operand.value, int):
                return Const(-operand.value)
            return self.arith(Token("op", "-", tok.line, tok.col), Const(0), operand)
        return self.primary()

    def primary(self):
        tok = self.tok
        if tok.kind == "num":
            self.advance()
            return Const(int(tok.text))
        if self.at("true"):
            self.advance()
            return TRUE
        if self.at("false"):
            self.advance()
            return FALSE
        if self.at("("):
            self.advance()
            inner = self.iff()
            self.expect(")")
            return inner
        if self.at("if"):
            self.advance()
            cond = self.formula()
            self.expect("then")
            a = self.additive()
            self.expect("else")
            b = self.additive()
            ta, tb = self.type_of(a, tok), self.type_of(b, tok)
            if {ta, tb} <= {_INT, "lit"}:
                pass
            elif ta != tb and not ({ta, tb} == {_BOOL, "lit"}):
                self.fail("type mismatch between if-then-else branches", tok)
            return Ite(cond, a, b)
        if tok.kind == "ident" and tok.text not in KEYWORDS:
            self.advance()
            var = self.vocab.get(tok.text)
            if self.at("'"):
                self.advance()
                if var is None:
                    self.fail(f"unknown identifier {tok.text!r}", tok)
                return NextVar(tok.text)
            if var is None:
                if tok.text in self.macros:
                    return self.macros[tok.text]
                return _Name(tok.text, tok)
            return Var(tok.text)
        if tok.kind == "eof":
            self.fail("unexpected end of input", tok)
        self.fail(f"unexpected token {tok.text!r}", tok)

    # -- typing ---------------------------------------------------------------

    def type_of(self, t, tok):
        if isinstance(t, _Name):
            return "name"
        if isinstance(t, Formula):
            return _BOOL
        if isinstance(t, Const):
            return "lit" if isinstance(t.value, int) else "name"
        if isinstance(t, (Var, NextVar)):
            d = self.vocab[t.name].domain
            return {"bool": _BOOL, "int": _INT}.get(d.kind, d)
        if isinstance(t, Arith):
            return _INT
        if isinstance(t, Ite):
            ta = self.type_of(t.then, tok)
            return self.type_of(t.other, tok) if ta == "lit" else ta
        self.fail("malformed term", tok)

    def as_formula(self, node, tok) -> Formula:
        if isinstance(node, Formula):
            return node
        if isinstance(node, _Name):
            self.fail(f"unknown identifier {node.name!r}", node.tok)
        if self.type_of(node, tok) == _BOOL:
            return Atom("=", node, Const(1))
        self.fail("expected a formula, found a non-boolean term", tok)


def parse_formula(text: str, vocab: Vocabulary, line: int = 1, col: int = 1,
                  macros: dict[str, Formula] | None = None) -> Formula:
    """Parse ``text`` with every identifier resolved against ``vocab``.

    Identifiers that are not variables but keys of ``macros`` stand for the
    mapped formula.
    """
    p = _Parser(tokenize(text, line, col), vocab, macros)
    f = p.formula()
    if p.tok.kind != "eof":
        p.fail(f"unexpected token {p.tok.text!r}")
    return f
