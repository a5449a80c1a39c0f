"""Finite domains, typed variables and the letter alphabets they generate."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

ROLES = ("input", "output", "state")

Value = int | str
Letter = tuple  # one value per vocabulary variable, in vocabulary order


class VocabularyError(ValueError):
    pass


@dataclass(frozen=True)
class Domain:
    kind: str  # "bool" | "int" | "enum"
    lo: int = 0
    hi: int = 1
    names: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind == "int":
            if self.lo > self.hi:
                raise VocabularyError(f"empty integer range {self.lo}..{self.hi}")
        elif self.kind == "enum":
            if not self.names:
                raise VocabularyError("enumeration must be nonempty")
            if len(set(self.names)) != len(self.names):
                raise VocabularyError("enumeration has duplicate values")
        elif self.kind != "bool":
            raise VocabularyError(f"unknown domain kind {self.kind!r}")

    @staticmethod
    def boolean() -> Domain:
        return Domain("bool")

    @staticmethod
    def int_range(lo: int, hi: int) -> Domain:
        return Domain("int", lo, hi)

    @staticmethod
    def enum(*names: str) -> Domain:
        return Domain("enum", 0, len(names) - 1, tuple(names))

    @cached_property
    def values(self) -> tuple[Value, ...]:
        if self.kind == "bool":
            return (0, 1)
        if self.kind == "int":
            return tuple(range(self.lo, self.hi + 1))
        return self.names

    @property
    def size(self) -> int:
        return len(self.values)

    def __contains__(self, value) -> bool:
        if self.kind == "enum":
            return value in self.names
        if isinstance(value, str):
            return False
        return self.lo <= value <= self.hi if self.kind == "int" else value in (0, 1)

    def index(self, value: Value) -> int:
        if self.kind == "enum":
            return self.names.index(value)
        return int(value) - (self.lo if self.kind == "int" else 0)

    def format_value(self, value: Value) -> str:
        return str(value)

    def __str__(self) -> str:
        if self.kind == "bool":
            return "bool"
        if self.kind == "int":
            return f"int {self.lo}..{self.hi}"
        return "enum {" + ", ".join(self.names) + "}"


@dataclass(frozen=True)
class Variable:
    name: str
    domain: Domain
    role: str = "input"

    def __post_init__(self):
        if self.role not in ROLES:
            raise VocabularyError(f"unknown role {self.role!r}")

    def with_name(self, name: str) -> Variable:
        return Variable(name, self.domain, self.role)

    def with_role(self, role: str) -> Variable:
        return Variable(self.name, self.domain, role)


@dataclass(frozen=True)
class Vocabulary:
    """An ordered set of variables; its letters are total assignments.

    Letters are enumerated with the first variable most significant, so the
    letter index order coincides with the canonical (variable, value) order.
    """

    variables: tuple[Variable, ...] = ()
    _index: dict = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        names = [v.name for v in self.variables]
        if len(set(names)) != len(names):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise VocabularyError(f"duplicate variable names: {', '.join(dup)}")
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(names)})

    @staticmethod
    def of(*variables: Variable) -> Vocabulary:
        return Vocabulary(tuple(variables))

    def __iter__(self) -> Iterator[Variable]:
        return iter(self.variables)

    def __len__(self) -> int:
        return len(self.variables)

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __getitem__(self, name: str) -> Variable:
        try:
            return self.variables[self._index[name]]
        except KeyError:
            raise VocabularyError(f"unknown variable {name!r}") from None

    def get(self, name: str) -> Variable | None:
        i = self._index.get(name)
        return None if i is None else self.variables[i]

    def position(self, name: str) -> int:
        return self._index[name]

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    @cached_property
    def sizes(self) -> tuple[int, ...]:
        return tuple(v.domain.size for v in self.variables)

    @cached_property
    def strides(self) -> tuple[int, ...]:
        out = []
        s = 1
        for size in reversed(self.sizes):
            out.append(s)
            s *= size
        return tuple(reversed(out))

    @cached_property
    def num_letters(self) -> int:
        n = 1
        for s in self.sizes:
            n *= s
        return n

    @cached_property
    def full_mask(self) -> int:
        return (1 << self.num_letters) - 1

    def letters(self) -> Iterator[Letter]:
        return itertools.product(*(v.domain.values for v in self.variables))

    @cached_property
    def letter_list(self) -> tuple[Letter, ...]:
        return tuple(self.letters())

    def letter(self, index: int) -> Letter:
        return self.letter_list[index]

    def index_of(self, letter: Sequence[Value]) -> int:
        i = 0
        for var, stride, value in zip(self.variables, self.strides, letter):
            if value not in var.domain:
                raise VocabularyError(f"value {value!r} outside domain of {var.name}")
            i += var.domain.index(value) * stride
        return i

    def assignment(self, letter: Letter) -> dict[str, Value]:
        return dict(zip(self.names, letter))

    def letter_from(self, assignment: dict[str, Value]) -> Letter:
        return tuple(assignment[n] for n in self.names)

    def format_letter(self, letter: Letter) -> str:
        return "(" + ", ".join(f"{v.name}={v.domain.format_value(a)}"
                               for v, a in zip(self.variables, letter)) + ")"

    # -- construction helpers -------------------------------------------------

    def without(self, *names: str) -> Vocabulary:
        for n in names:
            self[n]
        return Vocabulary(tuple(v for v in self.variables if v.name not in names))

    def restrict(self, names: Iterable[str]) -> Vocabulary:
        keep = set(names)
        return Vocabulary(tuple(v for v in self.variables if v.name in keep))

    def extend(self, *variables: Variable) -> Vocabulary:
        return Vocabulary(self.variables + tuple(variables))

    def union(self, other: Vocabulary) -> Vocabulary:
        extra = []
        for v in other.variables:
            mine = self.get(v.name)
            if mine is None:
                extra.append(v)
            elif mine.domain != v.domain:
                raise VocabularyError(f"variable {v.name} declared with two domains")
        return Vocabulary(self.variables + tuple(extra))

    def renamed(self, mapping: dict[str, str]) -> Vocabulary:
        return Vocabulary(tuple(v.with_name(mapping.get(v.name, v.name))
                                for v in self.variables))

    def __str__(self) -> str:
        return "{" + ", ".join(f"{v.name}: {v.domain}" for v in self.variables) + "}"


def project_letter_index(src: Vocabulary, dst: Vocabulary) -> list[int]:
    """For each letter of ``src`` the index of its restriction to ``dst``."""
    pos = [src.position(n) for n in dst.names]
    out = []
    for letter in src.letter_list:
        i = 0
        for p, var, stride in zip(pos, dst.variables, dst.strides):
            i += var.domain.index(letter[p]) * stride
        out.append(i)
    return out
