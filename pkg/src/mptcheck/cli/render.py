"""Text and JSON rendering of check results."""

from __future__ import annotations

import json

from ..automata import Lasso
from ..transformers import OUT_PREFIX
from .run import CheckResult


def _label(name: str) -> str:
    """Stored output names ``__out_y`` read as ``out.y``."""
    return "out." + name[len(OUT_PREFIX):] if name.startswith(OUT_PREFIX) else name


def _letters(w: Lasso, letters) -> list[dict[str, object]]:
    names = [_label(n) for n in w.vocab.names]
    return [dict(zip(names, letter)) for letter in letters]


def witness_text(w: Lasso) -> str:
    def block(letters):
        return "[" + ", ".join("{" + ", ".join(f"{k}={v}" for k, v in a.items()) + "}"
                               for a in _letters(w, letters)) + "]"
    return f"stem: {block(w.stem)} loop: {block(w.loop)}"


def witness_data(w: Lasso | None) -> dict | None:
    if w is None:
        return None
    return {"stem": _letters(w, w.stem), "loop": _letters(w, w.loop)}


def summary(results: list[CheckResult]) -> dict[str, int]:
    errors = sum(r.verdict == "ERROR" for r in results)
    ok = sum(r.ok for r in results)
    return {"checks": len(results), "ok": ok, "failed": len(results) - ok - errors,
            "errors": errors}


def render(results: list[CheckResult], fmt: str = "text", warnings: list[str] = ()) -> str:
    if fmt == "json":
        return _json(results, warnings)
    if fmt != "text":
        raise ValueError(f"unknown output format {fmt!r}")
    lines = [f"warning: {w}" for w in warnings]
    for r in results:
        status = "ok" if r.ok else "FAILED"
        lines.append(f"check {r.id}: {r.verdict} ({status}, expected {r.expected})")
        lines.append(f"  {r.text}")
        if r.witness is not None:
            lines.append(f"  witness: {witness_text(r.witness)}")
        if r.detail:
            lines.append(f"  detail: {r.detail}")
        for w in r.warnings:
            lines.append(f"  warning: {w}")
        if r.timing is not None:
            lines.append(f"  time: {r.timing:.3f}s")
        if r.dump is not None:
            lines.extend("  " + d for d in r.dump.rstrip("\n").split("\n"))
    s = summary(results)
    lines.append(f"{s['checks']} checks: {s['ok']} ok, {s['failed']} failed, "
                 f"{s['errors']} errors")
    return "\n".join(lines) + "\n"


def _json(results: list[CheckResult], warnings) -> str:
    doc = {
        "checks": [{
            "id": r.id,
            "kind": r.kind,
            "check": r.text,
            "verdict": r.verdict,
            "expected": r.expected,
            "ok": r.ok,
            "witness": witness_data(r.witness),
            "detail": r.detail,
            "timing": r.timing,
            "caps-hit": list(r.caps_hit),
            "warnings": list(r.warnings),
            "dump": r.dump,
        } for r in results],
        "summary": summary(results),
        "warnings": list(warnings),
    }
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"
