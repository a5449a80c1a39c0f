"""The ``mptcheck`` command: spec files in, verdicts out."""

from .main import main
from .render import render, witness_text
from .run import CheckResult, Options, run_checks
from .spec import Check, SpecError, SpecFile, parse_spec

__all__ = ["Check", "CheckResult", "Options", "SpecError", "SpecFile", "main", "parse_spec",
           "render", "run_checks", "witness_text"]
