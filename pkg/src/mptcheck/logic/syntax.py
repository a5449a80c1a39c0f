"""Terms and quantified LTL formulas.

All nodes are immutable and hashable.  ``str()`` renders the ASCII surface
syntax accepted by :func:`mptcheck.logic.parser.parse_formula`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from .vocab import Variable

RELOPS = ("=", "!=", "<", "<=", ">", ">=")
NEGATED_RELOP = {"=": "!=", "!=": "=", "<": ">=", ">=": "<", ">": "<=", "<=": ">"}
RESERVED_PREFIX = "__"


# ---------------------------------------------------------------------------
# Terms


class Term:
    __slots__ = ()


@dataclass(frozen=True)
class Const(Term):
    value: int | str

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class Var(Term):
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class NextVar(Term):
    """The value of ``name`` at the following step (written ``name'``)."""

    name: str

    def __str__(self):
        return self.name + "'"


@dataclass(frozen=True)
class Arith(Term):
    op: str  # + - * /
    left: Term
    right: Term
    # inclusive range outside which the result is undefined; None until pinned
    bounds: tuple[int, int] | None = None

    def __str__(self):
        return f"({self.left} {self.op} {self.right})"


@dataclass(frozen=True)
class Ite(Term):
    cond: "Formula"
    then: Term
    other: Term

    def __str__(self):
        return f"(if {self.cond} then {self.then} else {self.other})"


# ---------------------------------------------------------------------------
# Formulas


class Formula:
    __slots__ = ()

    def __str__(self):
        return render(self)


@dataclass(frozen=True, repr=False)
class Truth(Formula):
    value: bool

    def __repr__(self):
        return "TRUE" if self.value else "FALSE"


TRUE = Truth(True)
FALSE = Truth(False)


@dataclass(frozen=True, repr=False)
class Atom(Formula):
    op: str
    lhs: Term
    rhs: Term

    def __repr__(self):
        return f"Atom({self})"


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    args: tuple[Formula, ...]


@dataclass(frozen=True)
class Or(Formula):
    args: tuple[Formula, ...]


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Next(Formula):
    arg: Formula


@dataclass(frozen=True)
class Always(Formula):
    arg: Formula


@dataclass(frozen=True)
class Eventually(Formula):
    arg: Formula


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Release(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Leads(Formula):
    """``left L right``: whenever ``left`` held at all earlier steps, ``right`` holds now."""

    left: Formula
    right: Formula


@dataclass(frozen=True)
class ExistsTrace(Formula):
    var: Variable
    body: Formula


@dataclass(frozen=True)
class ForallTrace(Formula):
    var: Variable
    body: Formula


@dataclass(frozen=True)
class ExistsValue(Formula):
    var: Variable
    body: Formula


@dataclass(frozen=True)
class ForallValue(Formula):
    var: Variable
    body: Formula


TEMPORAL = (Next, Always, Eventually, Until, Release, Leads)
TRACE_QUANTIFIERS = (ExistsTrace, ForallTrace)
VALUE_QUANTIFIERS = (ExistsValue, ForallValue)
QUANTIFIERS = TRACE_QUANTIFIERS + VALUE_QUANTIFIERS
UNARY = (Not, Next, Always, Eventually)
BINARY = (Implies, Iff, Until, Release, Leads)


# ---------------------------------------------------------------------------
# smart constructors


def conj(*args: Formula) -> Formula:
    out: list[Formula] = []
    for a in args:
        parts = a.args if isinstance(a, And) else (a,)
        for p in parts:
            if p == FALSE:
                return FALSE
            if p != TRUE and p not in out:
                out.append(p)
    if not out:
        return TRUE
    return out[0] if len(out) == 1 else And(tuple(out))


def disj(*args: Formula) -> Formula:
    out: list[Formula] = []
    for a in args:
        parts = a.args if isinstance(a, Or) else (a,)
        for p in parts:
            if p == TRUE:
                return TRUE
            if p != FALSE and p not in out:
                out.append(p)
    if not out:
        return FALSE
    return out[0] if len(out) == 1 else Or(tuple(out))


def neg(f: Formula) -> Formula:
    if isinstance(f, Truth):
        return FALSE if f.value else TRUE
    if isinstance(f, Not):
        return f.arg
    return Not(f)


def implies(a: Formula, b: Formula) -> Formula:
    if a == TRUE:
        return b
    if a == FALSE or b == TRUE:
        return TRUE
    return Implies(a, b)


def eq(name: str, value) -> Atom:
    return Atom("=", Var(name), Const(value))


def exists_trace(variables: Iterable[Variable], body: Formula) -> Formula:
    for v in reversed(list(variables)):
        body = ExistsTrace(v, body)
    return body


def forall_trace(variables: Iterable[Variable], body: Formula) -> Formula:
    for v in reversed(list(variables)):
        body = ForallTrace(v, body)
    return body


def exists_value(variables: Iterable[Variable], body: Formula) -> Formula:
    for v in reversed(list(variables)):
        body = ExistsValue(v, body)
    return body


def forall_value(variables: Iterable[Variable], body: Formula) -> Formula:
    for v in reversed(list(variables)):
        body = ForallValue(v, body)
    return body


# ---------------------------------------------------------------------------
# generic traversal


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, (And, Or)):
        return f.args
    if isinstance(f, UNARY):
        return (f.arg,)
    if isinstance(f, BINARY):
        return (f.left, f.right)
    if isinstance(f, QUANTIFIERS):
        return (f.body,)
    return ()


def rebuild(f: Formula, kids: tuple[Formula, ...]) -> Formula:
    if isinstance(f, And):
        return conj(*kids)
    if isinstance(f, Or):
        return disj(*kids)
    if isinstance(f, UNARY):
        return type(f)(kids[0])
    if isinstance(f, BINARY):
        return type(f)(kids[0], kids[1])
    if isinstance(f, QUANTIFIERS):
        return type(f)(f.var, kids[0])
    return f


def term_vars(t: Term) -> Iterable[tuple[str, bool]]:
    """Yield ``(name, is_next)`` for every variable occurrence in ``t``."""
    if isinstance(t, Var):
        yield t.name, False
    elif isinstance(t, NextVar):
        yield t.name, True
    elif isinstance(t, Arith):
        yield from term_vars(t.left)
        yield from term_vars(t.right)
    elif isinstance(t, Ite):
        for name, nxt in atom_vars(t.cond):
            yield name, nxt
        yield from term_vars(t.then)
        yield from term_vars(t.other)


def atom_vars(f: Formula) -> Iterable[tuple[str, bool]]:
    if isinstance(f, Atom):
        yield from term_vars(f.lhs)
        yield from term_vars(f.rhs)
    elif isinstance(f, QUANTIFIERS):
        for name, nxt in atom_vars(f.body):
            if name != f.var.name:
                yield name, nxt
    else:
        for c in children(f):
            yield from atom_vars(c)


def free_vars(f: Formula) -> frozenset[str]:
    return frozenset(name for name, _ in atom_vars(f))


def next_vars(f: Formula) -> frozenset[str]:
    return frozenset(name for name, nxt in atom_vars(f) if nxt)


def any_node(f: Formula, pred: Callable[[Formula], bool]) -> bool:
    if pred(f):
        return True
    return any(any_node(c, pred) for c in children(f))


def is_temporal_free(f: Formula) -> bool:
    return not any_node(f, lambda g: isinstance(g, TEMPORAL) or isinstance(g, TRACE_QUANTIFIERS))


def has_trace_quantifier(f: Formula) -> bool:
    return any_node(f, lambda g: isinstance(g, TRACE_QUANTIFIERS))


def has_value_quantifier(f: Formula) -> bool:
    return any_node(f, lambda g: isinstance(g, VALUE_QUANTIFIERS))


def term_is_total(t: Term) -> bool:
    """Total terms never leave their variables' ranges (no arithmetic)."""
    if isinstance(t, (Const, Var, NextVar)):
        return True
    if isinstance(t, Ite):
        return term_is_total(t.then) and term_is_total(t.other)
    return False


def size(f: Formula) -> int:
    return 1 + sum(size(c) for c in children(f))


# ---------------------------------------------------------------------------
# substitution


def subst_term(t: Term, cur: dict[str, Term], nxt: dict[str, Term]) -> Term:
    if isinstance(t, Var):
        return cur.get(t.name, t)
    if isinstance(t, NextVar):
        return nxt.get(t.name, t)
    if isinstance(t, Arith):
        return Arith(t.op, subst_term(t.left, cur, nxt), subst_term(t.right, cur, nxt), t.bounds)
    if isinstance(t, Ite):
        return Ite(substitute(t.cond, cur, nxt), subst_term(t.then, cur, nxt),
                   subst_term(t.other, cur, nxt))
    return t


def substitute(f: Formula, cur: dict[str, Term], nxt: dict[str, Term] | None = None) -> Formula:
    """Replace variable occurrences; bound variables shadow the mapping.

    The caller is responsible for capture: replacement terms must not mention
    names bound inside ``f`` (see :func:`mptcheck.logic.transforms.rename_variables`).
    """
    nxt = {} if nxt is None else nxt
    if not cur and not nxt:
        return f
    if isinstance(f, Atom):
        return Atom(f.op, subst_term(f.lhs, cur, nxt), subst_term(f.rhs, cur, nxt))
    if isinstance(f, QUANTIFIERS):
        name = f.var.name
        if name in cur or name in nxt:
            cur = {k: v for k, v in cur.items() if k != name}
            nxt = {k: v for k, v in nxt.items() if k != name}
        return type(f)(f.var, substitute(f.body, cur, nxt))
    kids = children(f)
    if not kids:
        return f
    return rebuild(f, tuple(substitute(c, cur, nxt) for c in kids))


# ---------------------------------------------------------------------------
# rendering


_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4, Until: 5, Release: 5, Leads: 5}
_BIN_TOKEN = {Iff: "<->", Implies: "->", Until: "U", Release: "R", Leads: "L"}


def _prec(f: Formula) -> int:
    if isinstance(f, QUANTIFIERS):
        return 0
    return _PREC.get(type(f), 9)


def _term_str(t: Term) -> str:
    if isinstance(t, Arith):
        return f"{_term_atomic(t.left)} {t.op} {_term_atomic(t.right)}"
    if isinstance(t, Ite):
        return f"if {render(t.cond)} then {_term_str(t.then)} else {_term_str(t.other)}"
    return str(t)


def _side(t: Term) -> str:
    s = _term_str(t)
    return f"({s})" if isinstance(t, Ite) else s


def _term_atomic(t: Term) -> str:
    s = _term_str(t)
    return f"({s})" if isinstance(t, (Arith, Ite)) else s


def render(f: Formula) -> str:
    if isinstance(f, Truth):
        return "true" if f.value else "false"
    if isinstance(f, Atom):
        return f"{_side(f.lhs)} {f.op} {_side(f.rhs)}"
    if isinstance(f, (And, Or)):
        tok = " & " if isinstance(f, And) else " | "
        p = _prec(f)
        return tok.join(_wrap(a, p + 1) for a in f.args)
    if isinstance(f, Implies):
        return f"{_wrap(f.left, 3)} -> {_wrap(f.right, 2)}"
    if isinstance(f, Iff):
        return f"{_wrap(f.left, 2)} <-> {_wrap(f.right, 2)}"
    if isinstance(f, (Until, Release, Leads)):
        return f"{_wrap(f.left, 6)} {_BIN_TOKEN[type(f)]} {_wrap(f.right, 5)}"
    if isinstance(f, Not):
        return "!" + _wrap(f.arg, 9)
    if isinstance(f, Next):
        return "X " + _wrap(f.arg, 9)
    if isinstance(f, Always):
        return "G " + _wrap(f.arg, 9)
    if isinstance(f, Eventually):
        return "F " + _wrap(f.arg, 9)
    if isinstance(f, QUANTIFIERS):
        kw = {ExistsTrace: "exists", ForallTrace: "forall",
              ExistsValue: "exists_val", ForallValue: "forall_val"}[type(f)]
        return f"{kw} {f.var.name} . {render(f.body)}"
    raise TypeError(f"not a formula: {f!r}")


def _wrap(f: Formula, min_prec: int) -> str:
    s = render(f)
    if isinstance(f, Atom) and min_prec >= 9:
        return f"({s})"
    return f"({s})" if _prec(f) < min_prec else s
