from __future__ import annotations

import io
import json
import pathlib
import subprocess
import sys

import pytest

from mptcheck.cli import main, parse_spec
from mptcheck.cli.spec import SpecError

ROOT = pathlib.Path(__file__).resolve().parents[1]
EXAMPLES = ROOT / "specs" / "worked_examples.spec"

SMALL = """\
var x, y : bool
component C = guarded { rel: G (y -> F x) } in(y) out(x)
component B = contract { pre: G F x ; rel: G (y = x) } in(x) out(y)
check ok_one : compatible C ; B
check ok_two : valid G (x >= 0)
check wrong : valid F x
"""


def run(tmp_path, text, *flags, capsys):
    path = tmp_path / "t.spec"
    path.write_text(text)
    code = main([str(path), *flags])
    out = capsys.readouterr()
    return code, out.out, out.err


# -- parsing -------------------------------------------------------------------------


def test_a_bool_compared_with_zero_parses():
    spec = parse_spec("var x : bool\ncheck c : valid G (x >= 0)\n")
    assert [c.id for c in spec.checks] == ["c"]


def test_empty_file_has_no_checks(tmp_path, capsys):
    code, out, _ = run(tmp_path, "# nothing here\n", capsys=capsys)
    assert code == 0
    assert out.strip() == "0 checks: 0 ok, 0 failed, 0 errors"


@pytest.mark.parametrize("text, line, fragment", [
    ("check c : valid x\nvar x : bool\n", 1, "unknown identifier"),
    ("var __x : bool\n", 1, "reserved"),
    ("var x, y : bool\ncomponent A = angelic { rel: G y } in(x) out(y)\n", 2, "angelic"),
    ("var x, y : bool\ncheck c : refines Nope <= Nope\n", 2, "Nope"),
    ("var x : bool\nfrobnicate x\n", 2, "statement"),
    ("var x : int 0..2\nvar y : bool\ncomponent R = ReqResp in(x) out(y)\n", 3, "boolean"),
])
def test_parse_errors_carry_positions(text, line, fragment):
    with pytest.raises(SpecError) as info:
        parse_spec(text)
    assert info.value.line == line
    assert fragment in str(info.value)


def test_vocabulary_mismatch_is_reported_at_parse_time():
    text = ("var x, y, z : bool\n"
            "component A = demonic { rel: G (y = x) } in(x) out(y)\n"
            "component B = demonic { rel: G (z = x) } in(x, y) out(z)\n"
            "check c : compatible A ; B\n")
    with pytest.raises(SpecError):
        parse_spec(text)


def test_brackets_continue_lines_and_comments_are_ignored():
    text = ("var x, y : bool  # two signals\n"
            "component C = guarded {\n"
            "  rel: G (y -> F x)   # respond\n"
            "} in(y) out(x)\n"
            "check c : guarded C\n")
    spec = parse_spec(text)
    assert spec.check("c").kind == "guarded"


# -- running ----------------------------------------------------------------------------


def test_exit_codes(tmp_path, capsys):
    code, out, _ = run(tmp_path, SMALL, capsys=capsys)
    assert code == 1
    assert "check wrong: FAILS (FAILED, expected HOLDS)" in out
    assert out.rstrip().endswith("3 checks: 2 ok, 1 failed, 0 errors")
    code, _, _ = run(tmp_path, SMALL.replace("valid F x", "not valid F x"), capsys=capsys)
    assert code == 0


def test_usage_errors_exit_with_two(tmp_path, capsys):
    assert run(tmp_path, "var x : bool\nnonsense\n", capsys=capsys)[0] == 2
    assert run(tmp_path, SMALL, "--check", "missing", capsys=capsys)[0] == 2
    assert run(tmp_path, SMALL, "--max-states", "0", capsys=capsys)[0] == 2
    assert main([str(tmp_path / "absent.spec")]) == 2


def test_single_check(tmp_path, capsys):
    code, out, _ = run(tmp_path, SMALL, "--check", "ok_one", capsys=capsys)
    assert code == 0
    assert "ok_two" not in out and "1 checks: 1 ok" in out


def test_negated_check_reports_the_expected_verdict(tmp_path, capsys):
    code, out, _ = run(tmp_path, SMALL.replace("valid F x", "not valid F x"), "--json",
                       capsys=capsys)
    doc = json.loads(out)
    wrong = next(c for c in doc["checks"] if c["id"] == "wrong")
    assert wrong["verdict"] == "FAILS" and wrong["expected"] == "FAILS" and wrong["ok"]
    assert wrong["witness"] is not None


def test_json_fields(tmp_path, capsys):
    _, out, _ = run(tmp_path, SMALL, "--json", capsys=capsys)
    doc = json.loads(out)
    assert set(doc) == {"checks", "summary", "warnings"}
    first = doc["checks"][0]
    assert set(first) == {"id", "kind", "check", "verdict", "expected", "ok", "witness",
                          "detail", "timing", "caps-hit", "warnings", "dump"}
    assert first["timing"] is None
    assert set(first["witness"]) == {"stem", "loop"}
    assert doc["summary"] == {"checks": 3, "ok": 2, "failed": 1, "errors": 0}


def test_timing_is_opt_in(tmp_path, capsys):
    _, out, _ = run(tmp_path, SMALL, "--json", "--timing", capsys=capsys)
    assert all(isinstance(c["timing"], float) for c in json.loads(out)["checks"])


def test_dump_automaton(tmp_path, capsys):
    _, out, _ = run(tmp_path, SMALL, "--dump-automaton", "ok_two", capsys=capsys)
    assert "states:" in out and "initial:" in out and "accepting:" in out


def test_tiny_state_cap_turns_into_errors(tmp_path, capsys):
    code, out, _ = run(tmp_path, SMALL, "--json", "--max-states", "1", capsys=capsys)
    doc = json.loads(out)
    assert code == 1
    errors = [c for c in doc["checks"] if c["verdict"] == "ERROR"]
    assert errors and all(c["caps-hit"] == ["max-states"] for c in errors)


def test_cross_check_passes_on_the_worked_examples(capsys):
    assert main([str(EXAMPLES), "--cross-check"]) == 0
    assert "26 checks: 26 ok" in capsys.readouterr().out


def test_reads_standard_input(monkeypatch, capsys):
    monkeypatch.setattr(sys, "stdin", io.StringIO(SMALL))
    assert main(["-", "--check", "ok_two"]) == 0


def test_warnings_are_reported(tmp_path, capsys):
    text = ("var x, y : bool\nvar u : bool\n"
            "component S = guarded_sts { init: false ; r: y = x } state(u) in(x) out(y)\n"
            "check c : not guarded S\n")
    code, out, _ = run(tmp_path, text, capsys=capsys)
    assert code == 0
    assert "warning:" in out


def test_console_entry_point_matches_in_process_output(tmp_path):
    path = tmp_path / "t.spec"
    path.write_text(SMALL)
    proc = subprocess.run([sys.executable, "-m", "mptcheck.cli", str(path)],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 1
    assert proc.stdout.rstrip().endswith("3 checks: 2 ok, 1 failed, 0 errors")
