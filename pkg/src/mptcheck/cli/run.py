"""Running the checks of a parsed spec file."""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field

from ..automata import CapExceeded, Lasso, Nba, dump, limits, qptl_to_nba
from ..automata.qptl import QptlError
from ..logic.syntax import Formula, conj, free_vars, neg
from ..logic.vocab import Vocabulary
from ..sts import StsError
from ..transformers import (Contract, TransformerError, Verdict, compatible, equal, fail,
                            fail_formula, guard, guard_formula, is_guarded, normalize, refines,
                            same_language, seq, wp, wp_formula)
from ..automata.nba import find_lasso
from .spec import Check, SpecFile


@dataclass(frozen=True)
class Options:
    max_states: int = 100_000
    cross_check: bool = False
    only: str | None = None  # run a single check id
    dump: str | None = None  # check id whose derived automaton is dumped
    timing: bool = False


@dataclass(frozen=True)
class CheckResult:
    id: str
    kind: str
    text: str
    verdict: str  # HOLDS | FAILS | COMPATIBLE | INCOMPATIBLE | ERROR
    expected: str
    witness: Lasso | None = None
    detail: str = ""
    dump: str | None = None
    timing: float | None = None
    caps_hit: tuple[str, ...] = ()
    warnings: tuple[str, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return self.verdict == self.expected


_POSITIVE = {"compatible": ("COMPATIBLE", "INCOMPATIBLE")}


def _names(kind: str) -> tuple[str, str]:
    return _POSITIVE.get(kind, ("HOLDS", "FAILS"))


def run_checks(spec: SpecFile, options: Options = Options()) -> list[CheckResult]:
    """Run the checks in file order; cap errors are reported per check."""
    checks = spec.checks
    if options.only is not None:
        checks = [c for c in checks if c.id == options.only]
    out = []
    with limits(max_states=options.max_states, cross_check=options.cross_check):
        for c in checks:
            out.append(_run_one(c, options))
    return out


def _run_one(c: Check, options: Options) -> CheckResult:
    yes, no = _names(c.kind)
    expected = no if c.negated else yes
    start = time.perf_counter()
    caps: tuple[str, ...] = ()
    automaton = None
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            verdict, automaton = _decide(c, want_dump=options.dump == c.id)
            label = yes if verdict.holds else no
            detail = verdict.detail
            witness = verdict.witness
        except CapExceeded as e:
            label, detail, witness, caps = "ERROR", str(e), None, (e.cap,)
        except (TransformerError, StsError, QptlError) as e:
            label, detail, witness = "ERROR", str(e), None
    elapsed = time.perf_counter() - start
    return CheckResult(
        id=c.id, kind=c.kind, text=c.text, verdict=label, expected=expected, witness=witness,
        detail=detail, dump=dump(automaton, c.id) if automaton is not None else None,
        timing=round(elapsed, 6) if options.timing else None, caps_hit=caps,
        warnings=tuple(dict.fromkeys(str(w.message) for w in caught)))


def _within(f: Formula, vocab: Vocabulary, what: str) -> None:
    extra = free_vars(f) - set(vocab.names)
    if extra:
        raise TransformerError(f"{what} mentions variables outside {vocab}: {sorted(extra)}")


def _decide(c: Check, want_dump: bool) -> tuple[Verdict, Nba | None]:
    cs: list[Contract] = [normalize(e) for e in c.systems]
    if c.kind == "refines":
        return refines(cs[0], cs[1]), (cs[0].pre_nba() if want_dump else None)
    if c.kind == "equal":
        return equal(cs[0], cs[1]), (cs[0].pre_nba() if want_dump else None)
    if c.kind == "compatible":
        comp = seq(cs[0], cs[1])
        return compatible(cs[0], cs[1]), (comp.pre_nba() if want_dump else None)
    if c.kind == "guarded":
        return is_guarded(cs[0]), (guard(cs[0]) if want_dump else None)
    if c.kind in ("fail", "grd"):
        s = cs[0]
        (expect,) = c.formulas
        _within(expect, s.in_vocab, "the expected formula")
        got = fail_formula(s) if c.kind == "fail" else guard_formula(s)
        auto = (fail(s) if c.kind == "fail" else guard(s)) if want_dump else None
        return same_language(got, expect, s.in_vocab), auto
    if c.kind == "wp":
        s = cs[0]
        q, expect = c.formulas
        _within(expect, s.in_vocab, "the expected formula")
        got = wp_formula(s, q)
        return same_language(got, expect, s.in_vocab), (wp(s, q) if want_dump else None)
    (f,) = c.formulas
    vocab = c.vocab
    a = qptl_to_nba(f, vocab)
    if c.kind == "satisfiable":
        w = find_lasso(a)
        if w is None:
            return Verdict(False, None, "no word satisfies the formula"), a if want_dump else None
        return Verdict(True, w, "satisfying word"), a if want_dump else None
    w = find_lasso(qptl_to_nba(neg(conj(f)), vocab))
    if w is None:
        return Verdict(True), a if want_dump else None
    return Verdict(False, w, "word violating the formula"), a if want_dump else None
