"""The spec-file language: declarations, components, systems and checks.

Statements are line-oriented; a statement continues onto the next line while
braces, brackets or parentheses are open.  ``#`` starts a comment.

    var NAME[, NAME...] : bool | int LO..HI | enum {a, b}
    component NAME = KIND [{ field: formula ; ... }] [state(..)] [in(..)] [out(..)]
    system NAME = EXPR
    formula NAME = FORMULA | pre(EXPR) | fail(EXPR) | grd(EXPR)
    check ID : [not] FORM

Component kinds: ``contract {pre; rel}``, ``assert {pre}``, ``demonic {rel}``,
``guarded {rel}``, ``sts {init; p; r}``, ``guarded_sts {init; r}`` and the
built-ins Skip, Fail, Magic, Havoc, AssertLive, LiveHavoc and ReqResp.

System expressions: ``;`` (sequential) binds tighter than ``&`` (meet);
``constrain UNARY { F }`` strengthens the output relation by ``F``;
``{ F }`` is an inline assert over the variables of ``F``.

Check forms: ``refines S <= T``, ``compatible S ; T``, ``equal S T``,
``guarded S``, ``fail S == F``, ``grd S == F``, ``wp S (Q) == F``,
``satisfiable F`` and ``valid F``.  A leading ``not`` expects the negative
verdict.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field

from ..logic import ParseError, parse_formula
from ..logic.syntax import TRUE, Formula, RESERVED_PREFIX, free_vars
from ..logic.vocab import Domain, Variable, Vocabulary, VocabularyError
from ..sts import GuardedSts, Sts, StsError
from ..transformers import (Assert, ConstrainOutputs, Demonic, Expr, Fail, Guarded, Havoc,
                            LocalSts, Magic, Meet, Relational, Seq, Skip, TransformerError,
                            assert_live, fail_formula, guard_formula, live_havoc, normalize,
                            req_resp)


class SpecError(ValueError):
    def __init__(self, message: str, line: int = 1, col: int = 1):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


CHECK_KINDS = ("refines", "compatible", "equal", "guarded", "fail", "grd", "wp",
               "satisfiable", "valid")
BODY_KINDS = {
    "contract": ("pre", "rel"),
    "assert": ("pre",),
    "demonic": ("rel",),
    "guarded": ("rel",),
    "sts": ("init", "p", "r"),
    "guarded_sts": ("init", "r"),
}
BUILTINS = ("Skip", "Fail", "Magic", "Havoc", "AssertLive", "LiveHavoc", "ReqResp")


@dataclass(frozen=True)
class Check:
    id: str
    kind: str
    negated: bool
    text: str
    line: int
    systems: tuple[Expr, ...] = ()
    formulas: tuple[Formula, ...] = ()
    vocab: Vocabulary | None = None  # for satisfiable / valid


@dataclass
class SpecFile:
    variables: dict[str, Variable] = field(default_factory=dict)
    systems: dict[str, Expr] = field(default_factory=dict)
    formulas: dict[str, Formula] = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def check(self, check_id: str) -> Check | None:
        return next((c for c in self.checks if c.id == check_id), None)


# ---------------------------------------------------------------------------
# statements


def _statements(text: str):
    """Yield ``(start line, statement text)`` with comments removed."""
    buf: list[str] = []
    start = 0
    depth = 0
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not buf and not line.strip():
            continue
        if not buf:
            start = n
        buf.append(line)
        depth += sum(line.count(c) for c in "{([") - sum(line.count(c) for c in "})]")
        if depth <= 0:
            yield start, "\n".join(buf)
            buf, depth = [], 0
    if buf:
        yield start, "\n".join(buf)


_IDENT = r"[A-Za-z_][A-Za-z0-9_]*"
_STATEMENT_RE = re.compile(rf"\s*(var|component|system|formula|check)\b\s*(.*)", re.S)


class _Cursor:
    """A position in a statement; errors report file coordinates."""

    def __init__(self, text: str, line: int, pos: int = 0):
        self.text = text
        self.line = line
        self.pos = pos

    def where(self, pos: int | None = None) -> tuple[int, int]:
        pos = self.pos if pos is None else pos
        before = self.text[:pos]
        return self.line + before.count("\n"), pos - (before.rfind("\n") + 1) + 1

    def fail(self, message: str, pos: int | None = None):
        raise SpecError(message, *self.where(pos))

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def peek(self, pattern: str) -> re.Match | None:
        self.skip_ws()
        return re.compile(pattern).match(self.text, self.pos)

    def accept(self, pattern: str) -> str | None:
        m = self.peek(pattern)
        if m is None:
            return None
        self.pos = m.end()
        return m.group()

    def expect(self, pattern: str, what: str) -> str:
        got = self.accept(pattern)
        if got is None:
            self.fail(f"expected {what}")
        return got

    def ident(self, what: str = "a name") -> str:
        start = self.pos
        name = self.expect(_IDENT, what)
        if name.startswith(RESERVED_PREFIX):
            self.fail(f"names starting with {RESERVED_PREFIX!r} are reserved: {name!r}", start)
        return name

    def balanced(self, open_: str, close: str) -> tuple[str, int]:
        """Consume ``open_ ... close`` and return the inner text and its offset."""
        self.expect(re.escape(open_), repr(open_))
        start = self.pos
        depth = 1
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch == open_:
                depth += 1
            elif ch == close:
                depth -= 1
                if depth == 0:
                    self.pos += 1
                    return self.text[start:self.pos - 1], start
            self.pos += 1
        self.fail(f"missing {close!r}", start - 1)

    def rest(self) -> tuple[str, int]:
        self.skip_ws()
        start = self.pos
        self.pos = len(self.text)
        return self.text[start:], start


class _Builder:
    def __init__(self):
        self.spec = SpecFile()

    # -- helpers --------------------------------------------------------------

    def all_vars(self) -> Vocabulary:
        return Vocabulary(tuple(self.spec.variables.values()))

    def formula(self, cur: _Cursor, text: str, offset: int, vocab: Vocabulary) -> Formula:
        line, col = cur.where(offset)
        if not text.strip():
            cur.fail("expected a formula", offset)
        try:
            return parse_formula(text, vocab, line, col, self.spec.formulas)
        except ParseError as e:
            raise SpecError(e.message, e.line, e.col) from None
        except VocabularyError as e:
            cur.fail(str(e), offset)

    def variables(self, cur: _Cursor, names: list[str], role: str, pos: int) -> Vocabulary:
        out = []
        for n in names:
            v = self.spec.variables.get(n)
            if v is None:
                cur.fail(f"unknown variable {n!r}", pos)
            out.append(v.with_role(role))
        try:
            return Vocabulary(tuple(out))
        except VocabularyError as e:
            cur.fail(str(e), pos)

    def define(self, cur: _Cursor, name: str, pos: int) -> None:
        if name in self.spec.systems or name in self.spec.formulas or name in self.spec.variables:
            cur.fail(f"{name!r} is already defined", pos)

    def validated(self, cur: _Cursor, e: Expr, pos: int) -> Expr:
        """Normalize once so that interface mismatches surface as spec errors."""
        try:
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always")
                normalize(e)
        except (TransformerError, StsError, VocabularyError) as err:
            cur.fail(str(err), pos)
        for w in caught:
            line, _ = cur.where(pos)
            msg = f"line {line}: {w.message}"
            if msg not in self.spec.warnings:
                self.spec.warnings.append(msg)
        return e

    # -- statements -----------------------------------------------------------

    def statement(self, line: int, text: str) -> None:
        m = _STATEMENT_RE.match(text)
        if m is None:
            word = text.split(None, 1)[0] if text.strip() else text
            _Cursor(text, line).fail(f"unknown statement {word!r}", text.find(word))
        cur = _Cursor(text, line, m.start(2))
        getattr(self, "stmt_" + m.group(1))(cur)

    def stmt_var(self, cur: _Cursor) -> None:
        names = [cur.ident("a variable name")]
        starts = [cur.pos]
        while cur.accept(","):
            names.append(cur.ident("a variable name"))
            starts.append(cur.pos)
        cur.expect(":", "':'")
        domain = self.domain(cur)
        if not cur.at_end():
            cur.fail("unexpected text after the variable type")
        for n, pos in zip(names, starts):
            self.define(cur, n, pos - len(n))
            self.spec.variables[n] = Variable(n, domain)

    def domain(self, cur: _Cursor) -> Domain:
        kind = cur.expect(_IDENT, "a type (bool, int LO..HI or enum {...})")
        if kind == "bool":
            return Domain.boolean()
        if kind == "int":
            lo = int(cur.expect(r"-?\d+", "a lower bound"))
            cur.expect(r"\.\.", "'..'")
            hi = int(cur.expect(r"-?\d+", "an upper bound"))
            try:
                return Domain.int_range(lo, hi)
            except VocabularyError as e:
                cur.fail(str(e))
        if kind == "enum":
            pos = cur.pos
            inner, _ = cur.balanced("{", "}")
            names = [s.strip() for s in inner.split(",")]
            if not all(re.fullmatch(_IDENT, n) for n in names):
                cur.fail("enumeration values must be identifiers", pos)
            try:
                return Domain.enum(*names)
            except VocabularyError as e:
                cur.fail(str(e), pos)
        cur.fail(f"unknown type {kind!r}")

    def stmt_component(self, cur: _Cursor) -> None:
        pos = cur.pos
        name = cur.ident("a component name")
        self.define(cur, name, pos)
        cur.expect("=", "'='")
        kind_pos = cur.pos
        kind = cur.expect(_IDENT, "a component kind")
        if kind == "angelic":
            cur.fail("angelic updates are not supported", kind_pos)
        if kind not in BODY_KINDS and kind not in BUILTINS:
            cur.fail(f"unknown component kind {kind!r}", kind_pos)
        fields: dict[str, tuple[str, int]] = {}
        if kind in BODY_KINDS:
            body, offset = cur.balanced("{", "}")
            fields = self.fields(cur, body, offset, BODY_KINDS[kind])
        clauses: dict[str, Vocabulary] = {}
        while not cur.at_end():
            cpos = cur.pos
            which = cur.expect(r"state|in|out", "state(..), in(..) or out(..)")
            if which in clauses:
                cur.fail(f"duplicate {which}(..) clause", cpos)
            inner, offset = cur.balanced("(", ")")
            names = [s.strip() for s in inner.split(",") if s.strip()]
            clauses[which] = self.variables(cur, names, _ROLE[which], offset)
        if "state" in clauses and kind not in ("sts", "guarded_sts"):
            cur.fail(f"{kind} components have no state", kind_pos)
        expr = self.component(cur, kind, kind_pos, fields, clauses)
        self.spec.systems[name] = self.validated(cur, expr, kind_pos)

    def fields(self, cur: _Cursor, body: str, offset: int, allowed) -> dict[str, tuple[str, int]]:
        out: dict[str, tuple[str, int]] = {}
        pos = offset
        for part in body.split(";"):
            if part.strip():
                m = re.match(rf"\s*({_IDENT})\s*:", part)
                if m is None:
                    cur.fail("expected 'field: formula'", pos)
                key = m.group(1)
                if key not in allowed:
                    cur.fail(f"unknown field {key!r}; expected one of {', '.join(allowed)}",
                             pos + m.start(1))
                if key in out:
                    cur.fail(f"duplicate field {key!r}", pos + m.start(1))
                out[key] = (part[m.end():], pos + m.end())
            pos += len(part) + 1
        return out

    def component(self, cur, kind, pos, fields, clauses) -> Expr:
        ins = clauses.get("in", Vocabulary(()))
        outs = clauses.get("out", Vocabulary(()))
        states = clauses.get("state", Vocabulary(()))
        both = ins.extend(*(v for v in outs if v.name not in ins))

        def f(key, vocab):
            if key not in fields:
                return TRUE
            return self.formula(cur, fields[key][0], fields[key][1], vocab)

        try:
            if kind == "contract":
                return Relational(f("pre", ins), f("rel", both), ins, outs)
            if kind == "assert":
                if "out" in clauses:
                    cur.fail("assert components have no out(..) clause", pos)
                return Assert(f("pre", ins), ins)
            if kind == "demonic":
                return Demonic(f("rel", both), ins, outs)
            if kind == "guarded":
                return Guarded(f("rel", both), ins, outs)
            if kind in ("sts", "guarded_sts"):
                try:
                    every = states.extend(*ins, *outs)
                except VocabularyError as e:
                    cur.fail(f"state, input and output names must be distinct: {e}", pos)
                init = f("init", states)
                r = f("r", every)
                if kind == "sts":
                    return LocalSts(Sts(states, ins, outs, init, f("p", states.extend(*ins)), r))
                return LocalSts(GuardedSts(states, ins, outs, init, r))
            return self.builtin(cur, kind, pos, clauses, ins, outs)
        except (TransformerError, StsError) as e:
            cur.fail(str(e), pos)

    def builtin(self, cur, kind, pos, clauses, ins, outs) -> Expr:
        need_out = kind in ("Havoc", "LiveHavoc", "ReqResp")
        if need_out and "out" not in clauses:
            cur.fail(f"{kind} needs an out(..) clause", pos)
        if kind in ("Skip", "AssertLive") and "out" in clauses:
            cur.fail(f"{kind} has no out(..) clause", pos)
        if kind == "Skip":
            return Skip(ins)
        if kind == "Fail":
            return Fail(ins, outs if "out" in clauses else None)
        if kind == "Magic":
            return Magic(ins, outs if "out" in clauses else None)
        if kind == "Havoc":
            return Havoc(ins, outs)
        if kind == "AssertLive":
            return assert_live(ins)
        if kind == "LiveHavoc":
            return live_havoc(ins, outs)
        return req_resp(ins, outs)

    def stmt_system(self, cur: _Cursor) -> None:
        pos = cur.pos
        name = cur.ident("a system name")
        self.define(cur, name, pos)
        cur.expect("=", "'='")
        epos = cur.pos
        e = self.expr(cur)
        if not cur.at_end():
            cur.fail("unexpected text after the system expression")
        self.spec.systems[name] = self.validated(cur, e, epos)

    def stmt_formula(self, cur: _Cursor) -> None:
        pos = cur.pos
        name = cur.ident("a formula name")
        self.define(cur, name, pos)
        cur.expect("=", "'='")
        m = cur.peek(r"(pre|fail|grd)\s*\(")
        if m is not None:
            cur.pos = m.end()
            epos = cur.pos
            e = self.validated(cur, self.expr(cur), epos)
            cur.expect(r"\)", "')'")
            if not cur.at_end():
                cur.fail("unexpected text after the formula")
            c = normalize(e)
            self.spec.formulas[name] = {"pre": c.pre, "fail": fail_formula(c),
                                        "grd": guard_formula(c)}[m.group(1)]
            return
        text, offset = cur.rest()
        self.spec.formulas[name] = self.formula(cur, text, offset, self.all_vars())

    # -- system expressions -----------------------------------------------------

    def expr(self, cur: _Cursor) -> Expr:
        e = self.seq_expr(cur)
        while cur.accept(r"&(?!&)"):
            e = Meet(e, self.seq_expr(cur))
        return e

    def seq_expr(self, cur: _Cursor) -> Expr:
        e = self.unary(cur)
        while cur.accept(";"):
            e = Seq(e, self.unary(cur))
        return e

    def unary(self, cur: _Cursor) -> Expr:
        cur.skip_ws()
        pos = cur.pos
        if cur.peek(r"\("):
            cur.accept(r"\(")
            e = self.expr(cur)
            cur.expect(r"\)", "')'")
            return e
        if cur.peek(r"\{"):
            text, offset = cur.balanced("{", "}")
            p = self.formula(cur, text, offset, self.all_vars())
            return Assert(p, self.vocab_of(p))
        if cur.accept(r"constrain\b"):
            child = self.unary(cur)
            text, offset = cur.balanced("{", "}")
            return ConstrainOutputs(child, self.formula(cur, text, offset, self.all_vars()))
        name = cur.ident("a system name, '(' or '{'")
        e = self.spec.systems.get(name)
        if e is None:
            cur.fail(f"unknown system {name!r}", pos)
        return e

    def vocab_of(self, f: Formula) -> Vocabulary:
        names = free_vars(f)
        return Vocabulary(tuple(v for n, v in self.spec.variables.items() if n in names))

    # -- checks -------------------------------------------------------------------

    def stmt_check(self, cur: _Cursor) -> None:
        pos = cur.pos
        cid = cur.ident("a check id")
        if self.spec.check(cid) is not None:
            cur.fail(f"duplicate check id {cid!r}", pos)
        cur.expect(":", "':'")
        body_start = cur.pos
        negated = cur.accept(r"not\b") is not None
        kpos = cur.pos
        kind = cur.accept(_IDENT)
        if kind not in CHECK_KINDS:
            cur.fail(f"unknown check form {kind!r}; expected one of {', '.join(CHECK_KINDS)}",
                     kpos)
        systems: list[Expr] = []
        formulas: list[Formula] = []
        vocab = None

        def system():
            epos = cur.pos
            return self.validated(cur, self.expr(cur), epos)

        def rhs():
            cur.expect("==", "'=='")
            text, offset = cur.rest()
            return self.formula(cur, text, offset, self.all_vars())

        if kind == "refines":
            systems.append(system())
            cur.expect("<=", "'<='")
            systems.append(system())
        elif kind == "compatible":
            epos = cur.pos
            e = system()
            if not isinstance(e, Seq):
                cur.fail("compatible expects a sequential composition 'S ; T'", epos)
            systems.extend((e.left, e.right))
        elif kind == "equal":
            systems.append(system())
            systems.append(system())
        elif kind == "guarded":
            systems.append(system())
        elif kind in ("fail", "grd"):
            systems.append(system())
            formulas.append(rhs())
        elif kind == "wp":
            systems.append(system())
            text, offset = cur.balanced("(", ")")
            formulas.append(self.formula(cur, text, offset, self.all_vars()))
            formulas.append(rhs())
        else:
            text, offset = cur.rest()
            f = self.formula(cur, text, offset, self.all_vars())
            formulas.append(f)
            vocab = self.vocab_of(f)
        if not cur.at_end():
            cur.fail("unexpected text at the end of the check")
        source = " ".join(cur.text[body_start:].split())
        self.spec.checks.append(Check(cid, kind, negated, source, cur.line, tuple(systems),
                                      tuple(formulas), vocab))


_ROLE = {"state": "state", "in": "input", "out": "output"}


def parse_spec(text: str) -> SpecFile:
    """Parse and validate a spec file; raises :class:`SpecError` on the first error."""
    b = _Builder()
    for line, stmt in _statements(text):
        b.statement(line, stmt)
    return b.spec
