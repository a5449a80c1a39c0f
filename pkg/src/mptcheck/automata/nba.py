"""Büchi automata over assignment letters, and lasso words.

A guard is a Python ``int`` used as a bit set over the letter indices of the
automaton's vocabulary (bit ``i`` set means letter ``i`` enables the edge).
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .. import kernels
from ..logic.syntax import Formula
from ..logic.vocab import Letter, Vocabulary


class AutomatonError(ValueError):
    pass


def lowest_bit(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def bits(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Lasso:
    """The ultimately periodic word ``stem . loop^omega``."""

    vocab: Vocabulary
    stem: tuple[Letter, ...]
    loop: tuple[Letter, ...]

    def __post_init__(self):
        object.__setattr__(self, "stem", tuple(tuple(a) for a in self.stem))
        object.__setattr__(self, "loop", tuple(tuple(a) for a in self.loop))
        if not self.loop:
            raise AutomatonError("lasso loop must be nonempty")
        n = len(self.vocab)
        for letter in self.stem + self.loop:
            if len(letter) != n:
                raise AutomatonError("lasso letter does not match vocabulary")
            self.vocab.index_of(letter)

    @staticmethod
    def from_indices(vocab: Vocabulary, stem: Sequence[int], loop: Sequence[int]) -> Lasso:
        return Lasso(vocab, tuple(vocab.letter(i) for i in stem), tuple(vocab.letter(i) for i in loop))

    def stem_indices(self) -> list[int]:
        return [self.vocab.index_of(a) for a in self.stem]

    def loop_indices(self) -> list[int]:
        return [self.vocab.index_of(a) for a in self.loop]

    def __len__(self) -> int:
        return len(self.stem) + len(self.loop)

    def letter_at(self, i: int) -> Letter:
        if i < len(self.stem):
            return self.stem[i]
        return self.loop[(i - len(self.stem)) % len(self.loop)]

    def restrict(self, vocab: Vocabulary) -> Lasso:
        pos = [self.vocab.position(n) for n in vocab.names]
        pick = lambda a: tuple(a[p] for p in pos)  # noqa: E731
        stem, loop = compact_lasso(list(map(pick, self.stem)), list(map(pick, self.loop)))
        return Lasso(vocab, tuple(stem), tuple(loop))

    def format(self) -> str:
        fmt = self.vocab.format_letter
        return (f"stem: [{', '.join(fmt(a) for a in self.stem)}] "
                f"loop: [{', '.join(fmt(a) for a in self.loop)}]")

    def to_json(self) -> dict:
        asg = self.vocab.assignment
        return {"stem": [asg(a) for a in self.stem], "loop": [asg(a) for a in self.loop]}

    def __str__(self) -> str:
        return self.format()


@dataclass(frozen=True)
class Nba:
    """Nondeterministic Büchi automaton with states ``0..num_states-1``.

    ``edges[q]`` lists ``(guard, target)`` pairs sorted by target, one per
    target, with nonzero guards.  ``origin`` optionally records a formula whose
    models are exactly the accepted words.
    """

    vocab: Vocabulary
    num_states: int
    initial: tuple[int, ...]
    accepting: frozenset[int]
    edges: tuple[tuple[tuple[int, int], ...], ...]
    origin: Formula | None = field(default=None, compare=False)

    @staticmethod
    def build(vocab: Vocabulary, num_states: int, initial: Iterable[int],
              accepting: Iterable[int], edges: Iterable[tuple[int, int, int]],
              origin: Formula | None = None) -> Nba:
        """Build from ``(source, guard, target)`` triples, merging parallel edges."""
        merged: list[dict[int, int]] = [dict() for _ in range(num_states)]
        full = vocab.full_mask
        for src, guard, dst in edges:
            guard &= full
            if guard:
                row = merged[src]
                row[dst] = row.get(dst, 0) | guard
        table = tuple(tuple((row[d], d) for d in sorted(row)) for row in merged)
        init = tuple(sorted(set(initial)))
        if num_states == 0 or not init:
            return Nba.empty(vocab)
        return Nba(vocab, num_states, init, frozenset(accepting), table, origin)

    @staticmethod
    def empty(vocab: Vocabulary) -> Nba:
        return Nba(vocab, 1, (0,), frozenset(), ((),))

    @staticmethod
    def universal(vocab: Vocabulary) -> Nba:
        return Nba(vocab, 1, (0,), frozenset({0}), (((vocab.full_mask, 0),),))

    def with_origin(self, origin: Formula | None) -> Nba:
        return Nba(self.vocab, self.num_states, self.initial, self.accepting, self.edges, origin)

    @property
    def num_edges(self) -> int:
        return sum(len(row) for row in self.edges)

    def csr(self) -> tuple[array, array]:
        offsets = array("i", [0])
        targets = array("i")
        for row in self.edges:
            targets.extend(d for _, d in row)
            offsets.append(len(targets))
        return offsets, targets

    def accepting_flags(self) -> bytearray:
        flags = bytearray(self.num_states)
        for q in self.accepting:
            flags[q] = 1
        return flags

    def guard(self, src: int, dst: int) -> int:
        for g, d in self.edges[src]:
            if d == dst:
                return g
        return 0

    def is_trivially_empty(self) -> bool:
        return not self.accepting or self.num_edges == 0

    def is_universal_shape(self) -> bool:
        """A single accepting state with a full self-loop."""
        return (self.num_states == 1 and self.accepting == {0}
                and self.edges[0] == ((self.vocab.full_mask, 0),))

    def is_deterministic(self) -> bool:
        if len(self.initial) > 1:
            return False
        for row in self.edges:
            seen = 0
            for g, _ in row:
                if seen & g:
                    return False
                seen |= g
        return True

    def reachable(self) -> list[int]:
        seen = [False] * self.num_states
        order = []
        for q in self.initial:
            seen[q] = True
        stack = list(self.initial)
        while stack:
            q = stack.pop()
            order.append(q)
            for _, d in self.edges[q]:
                if not seen[d]:
                    seen[d] = True
                    stack.append(d)
        return sorted(order)

    def trim(self) -> Nba:
        """Drop states that are unreachable or cannot reach an accepting cycle;
        renumber the rest in breadth-first discovery order."""
        n = self.num_states
        offsets, targets = self.csr()
        comp = kernels.scc(n, offsets, targets)
        size: dict[int, int] = {}
        for q in range(n):
            size[comp[q]] = size.get(comp[q], 0) + 1
        good = [False] * n
        for q in self.accepting:
            if size[comp[q]] > 1 or any(d == q for _, d in self.edges[q]):
                good[q] = True
        # backward closure from good states
        preds: list[list[int]] = [[] for _ in range(n)]
        for q in range(n):
            for _, d in self.edges[q]:
                preds[d].append(q)
        live = good[:]
        stack = [q for q in range(n) if good[q]]
        while stack:
            q = stack.pop()
            for p in preds[q]:
                if not live[p]:
                    live[p] = True
                    stack.append(p)
        order = []
        index = {}
        for q in self.initial:
            if live[q] and q not in index:
                index[q] = len(order)
                order.append(q)
        i = 0
        while i < len(order):
            q = order[i]
            i += 1
            for _, d in self.edges[q]:
                if live[d] and d not in index:
                    index[d] = len(order)
                    order.append(d)
        if not order:
            return Nba.empty(self.vocab).with_origin(self.origin)
        edges = [(index[q], g, index[d]) for q in order for g, d in self.edges[q] if d in index]
        return Nba.build(self.vocab, len(order), (index[q] for q in self.initial if q in index),
                         (index[q] for q in order if q in self.accepting), edges, self.origin)

    def letter_classes(self) -> list[int]:
        """Partition of the alphabet into maximal sets of letters that no guard
        distinguishes, in order of their lowest letter."""
        classes = [self.vocab.full_mask]
        for g in sorted({g for row in self.edges for g, _ in row}):
            nxt = []
            for c in classes:
                a, b = c & g, c & ~g
                if a:
                    nxt.append(a)
                if b:
                    nxt.append(b)
            classes = nxt
        return sorted(classes, key=lowest_bit)

    def __str__(self) -> str:
        return (f"Nba({self.num_states} states, {self.num_edges} edges, "
                f"{len(self.accepting)} accepting, {self.vocab.num_letters} letters)")


def same_vocab(a: Nba, b: Nba) -> None:
    if a.vocab != b.vocab:
        raise AutomatonError(f"vocabulary mismatch: {a.vocab} vs {b.vocab}")


def find_lasso(a: Nba) -> Lasso | None:
    """Deterministic accepting-lasso search; letters are the least enabling ones."""
    if a.is_trivially_empty():
        return None
    offsets, targets = a.csr()
    found = kernels.lasso_search(a.num_states, offsets, targets, array("i", a.initial),
                                 a.accepting_flags())
    if found is None:
        return None
    stem, loop = found
    stem_letters = [lowest_bit(a.guard(s, t)) for s, t in zip(stem, stem[1:])]
    cycle = list(loop) + [loop[0]]
    loop_letters = [lowest_bit(a.guard(s, t)) for s, t in zip(cycle, cycle[1:])]
    return Lasso.from_indices(a.vocab, *compact_lasso(stem_letters, loop_letters))


def compact_lasso(stem: list, loop: list) -> tuple[list, list]:
    """The shortest stem and loop describing the same infinite word."""
    stem, loop = list(stem), list(loop)
    n = len(loop)
    for p in range(1, n + 1):
        if n % p == 0 and loop == loop[:p] * (n // p):
            loop = loop[:p]
            break
    while stem and stem[-1] == loop[-1]:
        loop = [stem.pop()] + loop[:-1]
    return stem, loop


def accepts_lasso(a: Nba, w: Lasso) -> bool:
    """Exact membership of ``stem . loop^omega`` via product with the lasso."""
    if w.vocab != a.vocab:
        raise AutomatonError(f"vocabulary mismatch: {w.vocab} vs {a.vocab}")
    word = [1 << i for i in w.stem_indices() + w.loop_indices()]
    k = len(word)
    ns = len(w.stem)
    n = a.num_states * k
    offsets = array("i", [0])
    targets = array("i")
    for q in range(a.num_states):
        for pos in range(k):
            bit = word[pos]
            nxt = pos + 1 if pos + 1 < k else ns
            for g, d in a.edges[q]:
                if g & bit:
                    targets.append(d * k + nxt)
            offsets.append(len(targets))
    flags = bytearray(n)
    for q in a.accepting:
        for pos in range(k):
            flags[q * k + pos] = 1
    initial = array("i", [q * k for q in a.initial])
    return kernels.lasso_search(n, offsets, targets, initial, flags) is not None
