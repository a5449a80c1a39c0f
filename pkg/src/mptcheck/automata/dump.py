"""Plain-text automaton dumps with guards printed as formulas."""

from __future__ import annotations

from ..logic.syntax import FALSE, TRUE, Atom, Const, Formula, Var, conj, disj
from ..logic.vocab import Variable, Vocabulary
from .nba import Nba


def _value_set(var: Variable, values: list) -> Formula:
    dom = var.domain
    if len(values) == dom.size:
        return TRUE
    if dom.kind == "bool":
        return Atom("=", Var(var.name), Const(values[0]))
    if len(values) == 1:
        return Atom("=", Var(var.name), Const(values[0]))
    if len(values) == dom.size - 1:
        missing = next(v for v in dom.values if v not in values)
        return Atom("!=", Var(var.name), Const(missing))
    if dom.kind == "int" and values == list(range(values[0], values[-1] + 1)):
        lo, hi = values[0], values[-1]
        if lo == dom.lo:
            return Atom("<=", Var(var.name), Const(hi))
        if hi == dom.hi:
            return Atom(">=", Var(var.name), Const(lo))
        return conj(Atom(">=", Var(var.name), Const(lo)), Atom("<=", Var(var.name), Const(hi)))
    return disj(*(Atom("=", Var(var.name), Const(v)) for v in values))


def mask_to_formula(mask: int, vocab: Vocabulary) -> Formula:
    """A compact state formula denoting exactly the letters in ``mask``."""
    return _cover(mask, list(vocab.variables))


def _cover(mask: int, variables: list[Variable]) -> Formula:
    if not variables:
        return TRUE if mask & 1 else FALSE
    width = 1
    for v in variables[1:]:
        width *= v.domain.size
    full = (1 << width) - 1
    if mask == 0:
        return FALSE
    if mask == (1 << (width * variables[0].domain.size)) - 1:
        return TRUE
    head = variables[0]
    groups: dict[int, list] = {}
    for i, value in enumerate(head.domain.values):
        cof = (mask >> (i * width)) & full
        if cof:
            groups.setdefault(cof, []).append(value)
    rest = variables[1:]
    if len(groups) == 1 and sum(len(v) for v in groups.values()) == head.domain.size:
        return _cover(next(iter(groups)), rest)
    parts = []
    for cof, values in groups.items():
        parts.append(conj(_value_set(head, values), _cover(cof, rest)))
    return disj(*parts)


def dump(a: Nba, title: str = "") -> str:
    lines = []
    if title:
        lines.append(f"automaton {title}")
    lines.append("vocabulary: " + ", ".join(f"{v.name}: {v.domain}" for v in a.vocab))
    lines.append(f"states: {a.num_states}")
    lines.append("initial: " + " ".join(map(str, a.initial)))
    lines.append("accepting: " + " ".join(map(str, sorted(a.accepting))))
    for q in range(a.num_states):
        for g, d in a.edges[q]:
            lines.append(f"{q} --[{mask_to_formula(g, a.vocab)}]--> {d}")
    return "\n".join(lines) + "\n"
