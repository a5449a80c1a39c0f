"""Letter sets as bit masks: evaluation of state formulas, cylindrification
and existential projection between vocabularies."""

from __future__ import annotations

from functools import lru_cache

from ..logic.semantics import compile_formula
from ..logic.syntax import Formula, free_vars
from ..logic.vocab import Vocabulary, project_letter_index
from .nba import bits


def mask_from_flags(flags) -> int:
    """Bit ``i`` of the result is set iff ``flags[i]`` is true."""
    text = "".join("1" if f else "0" for f in reversed(flags))
    return int(text, 2) if text else 0


@lru_cache(maxsize=None)
def _projection(src: Vocabulary, dst: Vocabulary) -> tuple[int, ...]:
    return tuple(project_letter_index(src, dst))


def cylindrify(mask: int, sub: Vocabulary, full: Vocabulary) -> int:
    """Letters of ``full`` whose restriction to ``sub`` lies in ``mask``."""
    if sub == full:
        return mask
    if mask == sub.full_mask:
        return full.full_mask
    if mask == 0:
        return 0
    idx = _projection(full, sub)
    return mask_from_flags([(mask >> j) & 1 for j in idx])


@lru_cache(maxsize=1 << 16)
def project_mask(mask: int, full: Vocabulary, sub: Vocabulary) -> int:
    """Letters of ``sub`` that extend to some letter of ``full`` in ``mask``."""
    if full == sub:
        return mask
    if mask == full.full_mask:
        return sub.full_mask
    idx = _projection(full, sub)
    out = 0
    for i in bits(mask):
        out |= 1 << idx[i]
    return out


@lru_cache(maxsize=1 << 16)
def formula_mask(g: Formula, vocab: Vocabulary) -> int:
    """The set of letters (current values only) satisfying the state formula ``g``."""
    names = free_vars(g)
    sub = vocab.restrict(names)
    if len(sub) != len(names):
        missing = sorted(names - set(vocab.names))
        raise ValueError(f"formula mentions variables outside the vocabulary: {missing}")
    domains = {v.name: v.domain for v in vocab}
    pred = compile_formula(g, domains)
    flags = []
    for letter in sub.letter_list:
        env_map = dict(zip(sub.names, letter))
        flags.append(pred(lambda n, nxt, m=env_map: m[n]))
    return cylindrify(mask_from_flags(flags), sub, vocab)
