"""Task-local resource limits for automaton constructions."""

from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass, replace

DEFAULT_MAX_STATES = 100_000


class CapExceeded(RuntimeError):
    """A construction would exceed a configured resource cap."""

    def __init__(self, cap: str, limit: int, what: str = ""):
        detail = f" while building {what}" if what else ""
        super().__init__(f"resource cap {cap}={limit} exceeded{detail}")
        self.cap = cap
        self.limit = limit


@dataclass(frozen=True)
class Settings:
    max_states: int = DEFAULT_MAX_STATES
    cross_check: bool = False


_current: contextvars.ContextVar[Settings] = contextvars.ContextVar("mptcheck_settings",
                                                                    default=Settings())


def current() -> Settings:
    return _current.get()


@contextlib.contextmanager
def limits(**changes):
    """Temporarily override settings for the current task (thread / asyncio task)."""
    token = _current.set(replace(_current.get(), **changes))
    try:
        yield _current.get()
    finally:
        _current.reset(token)


def check_states(count: int, what: str = "") -> None:
    limit = _current.get().max_states
    if count > limit:
        raise CapExceeded("max-states", limit, what)
