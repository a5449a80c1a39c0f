"""Emptiness with lasso witnesses, containment and equivalence."""

from __future__ import annotations

from dataclasses import dataclass

from .complement import complement
from .nba import Lasso, Nba, find_lasso, same_vocab
from .ops import intersect


def is_empty(a: Nba) -> Lasso | None:
    """``None`` iff ``L(a)`` is empty; otherwise an accepted lasso."""
    return find_lasso(a)


@dataclass(frozen=True)
class LanguageVerdict:
    holds: bool
    witness: Lasso | None = None
    # for equivalence: "left-not-in-right" or "right-not-in-left"
    direction: str | None = None

    def __bool__(self) -> bool:
        return self.holds


def contains(a: Nba, b: Nba, method: str = "auto") -> LanguageVerdict:
    """Does ``L(a)`` lie inside ``L(b)``?  A failure carries a word of ``L(a) - L(b)``."""
    same_vocab(a, b)
    if a.is_trivially_empty() or b.is_universal_shape():
        return LanguageVerdict(True)
    w = find_lasso(intersect(a, complement(b, method)))
    return LanguageVerdict(w is None, w)


def equivalent(a: Nba, b: Nba, method: str = "auto") -> LanguageVerdict:
    fwd = contains(a, b, method)
    if not fwd.holds:
        return LanguageVerdict(False, fwd.witness, "left-not-in-right")
    bwd = contains(b, a, method)
    if not bwd.holds:
        return LanguageVerdict(False, bwd.witness, "right-not-in-left")
    return LanguageVerdict(True)
