"""Büchi complementation.

``method="auto"`` negates the originating formula when the automaton carries
one.  Otherwise (``"construct"``) the automaton is reduced and complemented
with the cheapest applicable construction: a two-copy construction for
deterministic automata, a breakpoint construction for weak automata, and the
rank-based construction (tight level rankings) in general.  ``"rank"`` forces
the rank-based construction.
"""

from __future__ import annotations

from ..logic.syntax import Not
from . import settings
from .nba import Nba, lowest_bit
from .ops import reduce_bisim, reduce_simulation
from .. import kernels

METHODS = ("auto", "construct", "rank")


def complement(a: Nba, method: str = "auto") -> Nba:
    if method not in METHODS:
        raise ValueError(f"unknown complementation method {method!r}")
    if method == "auto" and a.origin is not None:
        from .qptl import qptl_to_nba
        return qptl_to_nba(Not(a.origin), a.vocab)
    return _construct(a, force_rank=(method == "rank"))


def _construct(a: Nba, force_rank: bool) -> Nba:
    a = reduce_simulation(a)
    if a.is_trivially_empty():
        return Nba.universal(a.vocab)
    if a.is_universal_shape():
        return Nba.empty(a.vocab)
    if force_rank:
        out = _rank_based(a)
    elif a.is_deterministic():
        out = _deterministic(a)
    elif is_weak(a):
        out = _breakpoint(a)
    else:
        out = _rank_based(a)
    out = reduce_bisim(out.trim())
    if out.num_states <= 200:
        out = reduce_simulation(out)
    return out


def is_weak(a: Nba) -> bool:
    """Every cycle is either entirely accepting or entirely rejecting."""
    offsets, targets = a.csr()
    comp = kernels.scc(a.num_states, offsets, targets)
    kind: dict[int, bool] = {}
    for q in range(a.num_states):
        acc = q in a.accepting
        if kind.setdefault(comp[q], acc) != acc:
            # mixed component; only matters if it has a cycle, and any
            # component with two states has one
            return False
    return True


def _post_table(a: Nba, classes: list[int]) -> list[list[int]]:
    """``post[q][c]``: successor bit set of ``q`` on class ``c``."""
    table = []
    for q in range(a.num_states):
        row = []
        for c in classes:
            bitset = 0
            for g, d in a.edges[q]:
                if g & c:
                    bitset |= 1 << d
            row.append(bitset)
        table.append(row)
    return table


def _post(post: list[list[int]], states: int, c: int) -> int:
    out = 0
    while states:
        low = states & -states
        out |= post[low.bit_length() - 1][c]
        states ^= low
    return out


def _bits_of(states: int) -> list[int]:
    out = []
    while states:
        low = states & -states
        out.append(low.bit_length() - 1)
        states ^= low
    return out


class _Builder:
    def __init__(self, what: str):
        self.index: dict = {}
        self.keys: list = []
        self.edges: list[tuple[int, int, int]] = []
        self.what = what

    def sid(self, key) -> int:
        s = self.index.get(key)
        if s is None:
            s = len(self.keys)
            self.index[key] = s
            self.keys.append(key)
            settings.check_states(len(self.keys), self.what)
        return s


def _deterministic(a: Nba) -> Nba:
    classes = a.letter_classes()
    post = _post_table(a, classes)
    n = a.num_states
    sink = n
    acc = a.accepting
    b = _Builder("complement")
    start = b.sid((a.initial[0], 0))
    pos = 0
    while pos < len(b.keys):
        q, copy = b.keys[pos]
        src = pos
        pos += 1
        for ci, c in enumerate(classes):
            d = sink if q == sink else (lowest_bit(post[q][ci]) if post[q][ci] else sink)
            if copy == 0:
                b.edges.append((src, c, b.sid((d, 0))))
            if d not in acc and (copy == 0 or q not in acc):
                b.edges.append((src, c, b.sid((d, 1))))
    accepting = [s for (q, copy), s in b.index.items() if copy == 1]
    return Nba.build(a.vocab, len(b.keys), [start], accepting, b.edges)


def _breakpoint(a: Nba) -> Nba:
    classes = a.letter_classes()
    post = _post_table(a, classes)
    reject = 0
    for q in range(a.num_states):
        if q not in a.accepting:
            reject |= 1 << q
    init = 0
    for q in a.initial:
        init |= 1 << q
    b = _Builder("complement")
    start = b.sid((init, 0))
    pos = 0
    while pos < len(b.keys):
        s, o = b.keys[pos]
        src = pos
        pos += 1
        for ci, c in enumerate(classes):
            s2 = _post(post, s, ci)
            o2 = (s2 if o == 0 else _post(post, o, ci)) & ~reject
            b.edges.append((src, c, b.sid((s2, o2))))
    accepting = [sid for (s, o), sid in b.index.items() if o == 0]
    return Nba.build(a.vocab, len(b.keys), [start], accepting, b.edges)


def _tight_rankings(states: list[int], bounds: list[int], even_only: list[bool]):
    """All tight level rankings: values within bounds, accepting states even,
    the maximum is odd and every odd value below it is used."""
    k = len(states)
    ranks = [0] * k

    def rec(i: int, used_odd: int, top: int):
        if i == k:
            if top % 2 == 1 and used_odd == (1 << ((top + 1) // 2)) - 1:
                yield tuple(ranks)
            return
        remaining = k - i
        for r in range(bounds[i] + 1):
            if even_only[i] and r % 2:
                continue
            nt = max(top, r)
            nu = used_odd | (1 << (r // 2)) if r % 2 else used_odd
            # odd values still missing below the current maximum
            need = ((nt + 1) // 2) - bin(nu).count("1") if nt % 2 else ((nt // 2) - bin(nu).count("1") + 1)
            if need > remaining - 1:
                continue
            ranks[i] = r
            yield from rec(i + 1, nu, nt)

    yield from rec(0, 0, -1)


def _rank_based(a: Nba) -> Nba:
    classes = a.letter_classes()
    post = _post_table(a, classes)
    n = a.num_states
    acc = a.accepting
    init = 0
    for q in a.initial:
        init |= 1 << q
    b = _Builder("rank-based complement")
    start = b.sid(("S", init))
    pos = 0
    while pos < len(b.keys):
        key = b.keys[pos]
        src = pos
        pos += 1
        if key[0] == "S":
            s = key[1]
            for ci, c in enumerate(classes):
                s2 = _post(post, s, ci)
                b.edges.append((src, c, b.sid(("S", s2))))
                members = _bits_of(s2)
                bound = 2 * len(members) - 1
                for ranks in _tight_rankings(members, [bound] * len(members),
                                             [q in acc for q in members]):
                    f = [-1] * n
                    for q, r in zip(members, ranks):
                        f[q] = r
                    b.edges.append((src, c, b.sid(("R", tuple(f), 0))))
            continue
        _, f, o = key
        s = 0
        for q in range(n):
            if f[q] >= 0:
                s |= 1 << q
        for ci, c in enumerate(classes):
            bounds: dict[int, int] = {}
            for q in _bits_of(s):
                for d in _bits_of(post[q][ci]):
                    bounds[d] = min(bounds.get(d, f[q]), f[q])
            members = sorted(bounds)
            for ranks in _tight_rankings(members, [bounds[q] for q in members],
                                         [q in acc for q in members]):
                f2 = [-1] * n
                even = 0
                for q, r in zip(members, ranks):
                    f2[q] = r
                    if r % 2 == 0:
                        even |= 1 << q
                o2 = even if o == 0 else (_post(post, o, ci) & even)
                b.edges.append((src, c, b.sid(("R", tuple(f2), o2))))
    accepting = [sid for key, sid in b.index.items() if key[0] == "R" and key[2] == 0]
    return Nba.build(a.vocab, len(b.keys), [start], accepting, b.edges)
