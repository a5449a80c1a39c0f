"""Relational property transformers in the normal form ``{p | r}``.

Expressions are built from asserts, demonic updates, guarded systems and the
usual constants, combined by sequential composition and demonic choice.
:func:`normalize` reduces an expression to a :class:`Contract`; the decision
operations compile contract formulas with the quantified LTL pipeline.

Contract inputs and outputs never share a name.  An output whose natural name
clashes with an input (the output of an assert, say) is stored under the
internal name ``__out_<name>``; :func:`display_name` recovers the user name.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .automata import Lasso, Nba, find_lasso, qptl_to_nba
from .logic.syntax import (FALSE, TRUE, Always, And, Atom, Eventually, Formula, Implies,
                           RESERVED_PREFIX, Const, Var, conj, disj, exists_trace, forall_trace,
                           free_vars, implies, neg)
from .logic.transforms import all_names, fresh_name, miniscope, substitute_names
from .logic.vocab import Variable, Vocabulary

OUT_PREFIX = "__out_"


class TransformerError(ValueError):
    pass


def display_name(name: str) -> str:
    return name[len(OUT_PREFIX):] if name.startswith(OUT_PREFIX) else name


def _as_role(vocab: Vocabulary, role: str) -> Vocabulary:
    return Vocabulary(tuple(v.with_role(role) for v in vocab))


def _outputs_beside(in_vocab: Vocabulary, outputs: Vocabulary) -> tuple[Vocabulary, dict[str, str]]:
    """Output vocabulary with names clashing with ``in_vocab`` moved aside."""
    mapping = {}
    out = []
    for v in outputs:
        user = display_name(v.name)
        name = OUT_PREFIX + user if user in in_vocab else user
        mapping[v.name] = name
        out.append(Variable(name, v.domain, "output"))
    return Vocabulary(tuple(out)), mapping


# ---------------------------------------------------------------------------
# contracts


@dataclass(frozen=True)
class Contract:
    """The transformer ``{pre} ; [rel]``: ``pre`` over inputs, ``rel`` over inputs and outputs."""

    in_vocab: Vocabulary
    out_vocab: Vocabulary
    pre: Formula
    rel: Formula

    def __post_init__(self):
        clash = set(self.in_vocab.names) & set(self.out_vocab.names)
        if clash:
            raise TransformerError(f"inputs and outputs share names: {sorted(clash)}")
        extra = free_vars(self.pre) - set(self.in_vocab.names)
        if extra:
            raise TransformerError(f"precondition mentions non-inputs: {sorted(extra)}")
        extra = free_vars(self.rel) - set(self.in_vocab.names) - set(self.out_vocab.names)
        if extra:
            raise TransformerError(f"relation mentions unknown variables: {sorted(extra)}")

    @property
    def vocab(self) -> Vocabulary:
        return self.in_vocab.extend(*self.out_vocab)

    @property
    def output_names(self) -> tuple[str, ...]:
        return tuple(display_name(n) for n in self.out_vocab.names)

    def user_output_map(self) -> dict[str, str]:
        """User output name to stored name."""
        return {display_name(n): n for n in self.out_vocab.names}

    def pre_nba(self) -> Nba:
        return qptl_to_nba(self.pre, self.in_vocab)

    def rel_nba(self) -> Nba:
        return qptl_to_nba(self.rel, self.vocab)


def contract(in_vocab: Vocabulary, out_vocab: Vocabulary, pre: Formula, rel: Formula) -> Contract:
    """Build a contract from formulas written with user names.

    Inputs and outputs must be distinct here since ``rel`` could not tell
    them apart otherwise.
    """
    clash = set(in_vocab.names) & set(out_vocab.names)
    if clash:
        raise TransformerError(f"inputs and outputs share names: {sorted(clash)}")
    return Contract(_as_role(in_vocab, "input"), _as_role(out_vocab, "output"), pre, rel)


def copy_relation(pairs: list[tuple[str, str]]) -> Formula:
    """``G (o1 = i1 & ...)`` for ``(output, input)`` pairs."""
    if not pairs:
        return TRUE
    return Always(conj(*(Atom("=", Var(o), Var(i)) for o, i in pairs)))


def _copy_contract(vocab: Vocabulary, pre: Formula) -> Contract:
    in_vocab = _as_role(vocab, "input")
    out_vocab, mapping = _outputs_beside(in_vocab, vocab)
    rel = copy_relation([(mapping[v.name], v.name) for v in vocab])
    return Contract(in_vocab, out_vocab, pre, rel)


# ---------------------------------------------------------------------------
# expressions


class Expr:
    __slots__ = ()


@dataclass(frozen=True)
class Assert(Expr):
    """``{p}``: passes legal inputs through unchanged."""
    p: Formula
    vocab: Vocabulary


@dataclass(frozen=True)
class Demonic(Expr):
    """``[r]``: any output related to the input; miraculous where there is none."""
    r: Formula
    in_vocab: Vocabulary
    out_vocab: Vocabulary


@dataclass(frozen=True)
class Relational(Expr):
    p: Formula
    r: Formula
    in_vocab: Vocabulary
    out_vocab: Vocabulary


@dataclass(frozen=True)
class Guarded(Expr):
    """``{r]``: the relational transformer with precondition ``in.r``."""
    r: Formula
    in_vocab: Vocabulary
    out_vocab: Vocabulary


@dataclass(frozen=True)
class Skip(Expr):
    vocab: Vocabulary


@dataclass(frozen=True)
class Fail(Expr):
    in_vocab: Vocabulary
    out_vocab: Vocabulary | None = None


@dataclass(frozen=True)
class Magic(Expr):
    in_vocab: Vocabulary
    out_vocab: Vocabulary | None = None


@dataclass(frozen=True)
class Havoc(Expr):
    in_vocab: Vocabulary
    out_vocab: Vocabulary


@dataclass(frozen=True)
class Seq(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Meet(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class ConstrainOutputs(Expr):
    """Strengthen the relation of ``child`` by ``phi`` (written with user names)."""
    child: Expr
    phi: Formula


@dataclass(frozen=True)
class LocalSts(Expr):
    """A symbolic transition system, see :mod:`mptcheck.sts`."""
    sts: object


@dataclass(frozen=True)
class Given(Expr):
    """An already normalized contract."""
    contract: Contract


def assert_live(vocab: Vocabulary) -> Expr:
    """``{x | G F x}`` over a single boolean variable."""
    (x,) = _single_bool(vocab, "AssertLive")
    return Assert(Always(Eventually(_truth(x))), vocab)


def live_havoc(in_vocab: Vocabulary, out_vocab: Vocabulary) -> Expr:
    _single_bool(in_vocab, "LiveHavoc")
    return Seq(assert_live(in_vocab), Havoc(in_vocab, out_vocab))


def req_resp(in_vocab: Vocabulary, out_vocab: Vocabulary) -> Expr:
    """``[x ~> y | G (x -> F y)]`` over boolean ``x`` and ``y``."""
    (x,) = _single_bool(in_vocab, "ReqResp")
    (y,) = _single_bool(out_vocab, "ReqResp")
    return Demonic(Always(Implies(_truth(x), Eventually(_truth(y)))), in_vocab, out_vocab)


def _single_bool(vocab: Vocabulary, what: str) -> tuple[str]:
    if len(vocab) != 1 or vocab.variables[0].domain.kind != "bool":
        raise TransformerError(f"{what} needs exactly one boolean variable, got {vocab}")
    return (vocab.variables[0].name,)


def _truth(name: str) -> Formula:
    return Atom("=", Var(name), Const(1))


# ---------------------------------------------------------------------------
# normalization


def normalize(e: Expr) -> Contract:
    """The relational normal form of ``e``."""
    return _normalize(e)


@lru_cache(maxsize=2048)
def _normalize(e: Expr) -> Contract:
    if isinstance(e, Given):
        return e.contract
    if isinstance(e, Assert):
        return _copy_contract(e.vocab, e.p)
    if isinstance(e, Skip):
        return _copy_contract(e.vocab, TRUE)
    if isinstance(e, Demonic):
        return contract(e.in_vocab, e.out_vocab, TRUE, e.r)
    if isinstance(e, Relational):
        return contract(e.in_vocab, e.out_vocab, e.p, e.r)
    if isinstance(e, Guarded):
        return make_guarded(e.r, e.in_vocab, e.out_vocab)
    if isinstance(e, Havoc):
        inp = _as_role(e.in_vocab, "input")
        return Contract(inp, _outputs_beside(inp, e.out_vocab)[0], TRUE, TRUE)
    if isinstance(e, Fail):
        return _constant(e.in_vocab, e.out_vocab, FALSE, TRUE)
    if isinstance(e, Magic):
        return _constant(e.in_vocab, e.out_vocab, TRUE, FALSE)
    if isinstance(e, Seq):
        return seq(_normalize(e.left), _normalize(e.right))
    if isinstance(e, Meet):
        return meet(_normalize(e.left), _normalize(e.right))
    if isinstance(e, ConstrainOutputs):
        return constrain(_normalize(e.child), e.phi)
    if isinstance(e, LocalSts):
        from .sts import globalize
        return globalize(e.sts)
    raise TransformerError(f"not a transformer expression: {e!r}")


def _constant(in_vocab: Vocabulary, out_vocab: Vocabulary | None, pre: Formula,
              copy_rel: Formula) -> Contract:
    """Fail is ``{false}`` and Magic is ``[false]``; over distinct in and out
    vocabularies the relation of Fail is immaterial and taken to be true."""
    if out_vocab is None or _same_names(in_vocab, out_vocab):
        if pre == FALSE:
            return _copy_contract(in_vocab, FALSE)
        base = _copy_contract(in_vocab, TRUE)
        return Contract(base.in_vocab, base.out_vocab, TRUE, FALSE)
    inp = _as_role(in_vocab, "input")
    out, _ = _outputs_beside(inp, out_vocab)
    return Contract(inp, out, pre, FALSE if pre == TRUE else TRUE)


def _same_names(a: Vocabulary, b: Vocabulary) -> bool:
    return [display_name(n) for n in a.names] == [display_name(n) for n in b.names] and \
        [v.domain for v in a] == [v.domain for v in b]


def make_guarded(r: Formula, in_vocab: Vocabulary, out_vocab: Vocabulary) -> Contract:
    """``{r] = {in.r | r}``."""
    c = contract(in_vocab, out_vocab, TRUE, r)
    return Contract(c.in_vocab, c.out_vocab, exists_trace(c.out_vocab, r), r)


def constrain(c: Contract, phi: Formula) -> Contract:
    """``{p | r & phi}``; ``phi`` uses user names for the outputs."""
    phi = _outputs_to_stored(c, phi)
    return Contract(c.in_vocab, c.out_vocab, c.pre, conj(c.rel, phi))


def _outputs_to_stored(c: Contract, f: Formula) -> Formula:
    """Rewrite a formula over user output names (and inputs not shadowed by an
    output) to the stored names of ``c``."""
    mapping = {u: s for u, s in c.user_output_map().items() if u != s}
    extra = free_vars(f) - set(c.in_vocab.names) - set(c.out_vocab.names) - set(mapping)
    if extra:
        raise TransformerError(f"formula mentions unknown variables: {sorted(extra)}")
    return substitute_names(f, mapping)


def _pair_interface(left: Vocabulary, right: Vocabulary) -> list[tuple[str, str]]:
    """Match the outputs of one contract with the inputs of the next: by name
    when the name sets agree, else by position."""
    lnames = [display_name(n) for n in left.names]
    if sorted(lnames) == sorted(right.names):
        pairs = [(left.names[lnames.index(n)], n) for n in right.names]
    elif len(left) == len(right):
        pairs = list(zip(left.names, right.names))
    else:
        raise TransformerError(f"cannot compose: outputs {left} do not match inputs {right}")
    for o, i in pairs:
        if left[o].domain != right[i].domain:
            raise TransformerError(f"cannot compose: {display_name(o)} and {i} have different domains")
    return pairs


def _split_copies(rel: Formula, outs: set[str], ins: set[str]) -> tuple[dict[str, str], list[Formula]]:
    """Separate ``G (o = i)`` conjuncts (output ``o`` copying input ``i``) from the rest."""
    parts: list[Formula] = []
    for c in (rel.args if isinstance(rel, And) else (rel,)):
        if isinstance(c, Always) and isinstance(c.arg, And):
            parts.extend(Always(a) for a in c.arg.args)
        else:
            parts.append(c)
    copies: dict[str, str] = {}
    rest: list[Formula] = []
    for c in parts:
        pair = _copy_atom(c.arg) if isinstance(c, Always) else None
        if pair is not None:
            a, b = pair
            if a in ins and b in outs:
                a, b = b, a
            if a in outs and b in ins and a not in copies:
                copies[a] = b
                continue
        rest.append(c)
    return copies, rest


def _copy_atom(f: Formula) -> tuple[str, str] | None:
    if isinstance(f, Atom) and f.op == "=" and isinstance(f.lhs, Var) and isinstance(f.rhs, Var):
        return f.lhs.name, f.rhs.name
    return None


def seq(left: Contract, right: Contract) -> Contract:
    """``{p | r} ; {p' | r'} = {p & forall m (r -> p') | exists m (r & r')}``.

    The interface traces ``m`` get reserved names.  Outputs of ``left`` that
    merely copy an input are substituted instead of quantified, and so are the
    interface traces when ``right`` merely copies its inputs.
    """
    pairs = _pair_interface(left.out_vocab, right.in_vocab)
    in_vocab = left.in_vocab
    out_vocab, out_map = _outputs_beside(in_vocab, right.out_vocab)
    avoid = (all_names(left.pre) | all_names(left.rel) | all_names(right.pre) | all_names(right.rel)
             | set(in_vocab.names) | set(out_vocab.names) | set(left.out_vocab.names)
             | set(right.in_vocab.names))

    copies, rest = _split_copies(left.rel, set(left.out_vocab.names), set(in_vocab.names))
    lmap: dict[str, str] = {}
    rmap: dict[str, str] = {}
    middle: list[Variable] = []
    for o, i in pairs:
        if o in copies:
            target = copies[o]
        else:
            target = fresh_name(avoid, f"{RESERVED_PREFIX}m")
            avoid.add(target)
            middle.append(Variable(target, left.out_vocab[o].domain, "state"))
        lmap[o] = target
        rmap[i] = target
    lrel = substitute_names(conj(*rest), lmap)
    rpre = substitute_names(right.pre, rmap)

    rcopies, rrest = _split_copies(right.rel, set(right.out_vocab.names), set(right.in_vocab.names))
    if not rrest and len(rcopies) == len(right.out_vocab) \
            and len(set(rcopies.values())) == len(right.in_vocab):
        back: dict[str, str] = {}
        kept = []
        names = {m.name for m in middle}
        for o, i in rcopies.items():
            target = rmap[i]
            if target in names and target not in back:
                back[target] = out_map[o]
            else:
                kept.append((out_map[o], target))
        rel = conj(substitute_names(lrel, back), copy_relation(kept))
        rel = exists_trace([m for m in middle if m.name not in back], rel)
    else:
        rmap.update(out_map)
        rel = exists_trace(middle, conj(lrel, substitute_names(right.rel, rmap)))
    pre = left.pre if rpre == TRUE else conj(left.pre, forall_trace(middle, implies(lrel, rpre)))
    return Contract(in_vocab, out_vocab, miniscope(pre), miniscope(rel))


def meet(left: Contract, right: Contract) -> Contract:
    """Demonic choice: ``{p & p' | r | r'}``."""
    right = align(right, left)
    return Contract(left.in_vocab, left.out_vocab, conj(left.pre, right.pre),
                    disj(left.rel, right.rel))


def align(c: Contract, like: Contract) -> Contract:
    """``c`` with its traces renamed to those of ``like``: by name when both use
    the same names, otherwise by position.  Names of traces do not matter to
    a transformer, only their order and domains."""
    if c.in_vocab == like.in_vocab and c.out_vocab == like.out_vocab:
        return c
    if sorted(c.in_vocab.names) == sorted(like.in_vocab.names) and \
            sorted(c.output_names) == sorted(like.output_names):
        stored = like.user_output_map()
        mapping = {n: n for n in c.in_vocab.names}
        mapping.update((n, stored[display_name(n)]) for n in c.out_vocab.names)
    elif len(c.in_vocab) == len(like.in_vocab) and len(c.out_vocab) == len(like.out_vocab):
        mapping = dict(zip(c.in_vocab.names, like.in_vocab.names))
        mapping.update(zip(c.out_vocab.names, like.out_vocab.names))
    else:
        raise TransformerError(f"vocabularies differ: {_signature(c)} versus {_signature(like)}")
    target = like.vocab
    for old, new in mapping.items():
        if c.vocab[old].domain != target[new].domain:
            raise TransformerError(f"vocabularies differ: {_signature(c)} versus {_signature(like)}")
    if all(old == new for old, new in mapping.items()):
        return Contract(like.in_vocab, like.out_vocab, c.pre, c.rel)
    return _renamed(c, like, mapping)


def _signature(c: Contract) -> str:
    outs = ", ".join(f"{display_name(v.name)}: {v.domain}" for v in c.out_vocab)
    return f"{c.in_vocab} -> {{{outs}}}"


def _renamed(c: Contract, like: Contract, mapping: dict[str, str]) -> Contract:
    # go through reserved intermediate names so swaps are safe
    avoid = all_names(c.pre) | all_names(c.rel) | set(mapping) | set(mapping.values())
    tmp = {}
    for old in mapping:
        t = fresh_name(avoid, f"{RESERVED_PREFIX}r")
        avoid.add(t)
        tmp[old] = t
    back = {tmp[old]: new for old, new in mapping.items()}
    pre = substitute_names(substitute_names(c.pre, tmp), back)
    rel = substitute_names(substitute_names(c.rel, tmp), back)
    return Contract(like.in_vocab, like.out_vocab, pre, rel)


# ---------------------------------------------------------------------------
# decisions


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witness: Lasso | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.holds


def fail(c: Contract) -> Nba:
    """Automaton of the illegal inputs, ``not pre``."""
    return qptl_to_nba(neg(c.pre), c.in_vocab)


def fail_formula(c: Contract) -> Formula:
    return neg(c.pre)


def guard_formula(c: Contract) -> Formula:
    return disj(neg(c.pre), exists_trace(c.out_vocab, c.rel))


def guard(c: Contract) -> Nba:
    """Automaton of the inputs on which ``c`` is not miraculous, ``not pre | in.rel``."""
    return qptl_to_nba(guard_formula(c), c.in_vocab)


def wp_formula(c: Contract, q: Formula) -> Formula:
    """``pre & forall out (rel -> q)``; ``q`` is written with user output names."""
    q = _outputs_to_stored(c, q)
    extra = free_vars(q) - set(c.out_vocab.names) - set(c.in_vocab.names)
    if extra:
        raise TransformerError(f"postcondition mentions unknown variables: {sorted(extra)}")
    return conj(c.pre, forall_trace(c.out_vocab, implies(c.rel, q)))


def wp(c: Contract, q: Formula) -> Nba:
    return qptl_to_nba(wp_formula(c, q), c.in_vocab)


def _counterexample(premise: Formula, conclusion: Formula, vocab: Vocabulary) -> Lasso | None:
    """A word satisfying ``premise`` but not ``conclusion``, if any."""
    if conclusion == TRUE or premise == FALSE:
        return None
    return find_lasso(qptl_to_nba(conj(premise, neg(conclusion)), vocab))


def refines(s: Contract, t: Contract) -> Verdict:
    """``s <= t`` iff ``p_s -> p_t`` and ``p_s & r_t -> r_s``."""
    t = align(t, s)
    w = _counterexample(s.pre, t.pre, s.in_vocab)
    if w is not None:
        return Verdict(False, w, "precondition: an input legal for the left side is illegal "
                                 "for the right side")
    w = _counterexample(conj(s.pre, t.rel), s.rel, s.vocab)
    if w is not None:
        return Verdict(False, w, "relation: the right side allows a behavior the left side "
                                 "excludes on a legal input")
    return Verdict(True)


def equal(s: Contract, t: Contract) -> Verdict:
    fwd = refines(s, t)
    if not fwd.holds:
        return Verdict(False, fwd.witness, "left is not refined by right; " + fwd.detail)
    bwd = refines(t, s)
    if not bwd.holds:
        return Verdict(False, bwd.witness, "right is not refined by left; " + bwd.detail)
    return Verdict(True)


def compatible(s: Expr | Contract, t: Expr | Contract) -> Verdict:
    """Compatible iff ``s ; t`` is not Fail; the witness is a legal input."""
    c = seq(_as_contract(s), _as_contract(t))
    w = find_lasso(qptl_to_nba(c.pre, c.in_vocab))
    if w is None:
        return Verdict(False, None, "no input is legal for the composition")
    return Verdict(True, w, "legal input of the composition")


def is_guarded(c: Contract) -> Verdict:
    """Holds iff ``grd = true``; the witness is an input on which ``c`` is miraculous."""
    w = find_lasso(qptl_to_nba(neg(guard_formula(c)), c.in_vocab))
    if w is None:
        return Verdict(True)
    return Verdict(False, w, "input on which the system behaves miraculously")


def _as_contract(x: Expr | Contract) -> Contract:
    return x if isinstance(x, Contract) else normalize(x)


def same_language(f: Formula, g: Formula, vocab: Vocabulary) -> Verdict:
    """Language equality of two formulas over ``vocab``."""
    w = _counterexample(f, g, vocab)
    if w is not None:
        return Verdict(False, w, "word satisfies the left formula but not the right")
    w = _counterexample(g, f, vocab)
    if w is not None:
        return Verdict(False, w, "word satisfies the right formula but not the left")
    return Verdict(True)


__all__ = [
    "Assert", "Contract", "ConstrainOutputs", "Demonic", "Expr", "Fail", "Given", "Guarded",
    "Havoc", "LocalSts", "Magic", "Meet", "Relational", "Seq", "Skip", "TransformerError",
    "Verdict", "align", "assert_live", "compatible", "constrain", "contract", "copy_relation",
    "display_name", "equal", "fail", "fail_formula", "guard", "guard_formula", "is_guarded",
    "live_havoc", "make_guarded", "meet", "normalize", "refines", "req_resp", "same_language",
    "seq", "wp", "wp_formula",
]
