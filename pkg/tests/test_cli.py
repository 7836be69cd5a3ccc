"""CLI tests, including a golden transcript.

The transcript in ``golden/transcript.txt`` is produced by running every line
of ``golden/commands.txt``; regenerate it with ``python tests/test_cli.py``
and review the diff by hand.
"""

import contextlib
import io
import json
import os
import shlex
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from simfactor import cli

GOLDEN = Path(__file__).parent / "golden"


def run(argv, stdin=""):
    out, err = io.StringIO(), io.StringIO()
    old_stdin = sys.stdin
    sys.stdin = io.StringIO(stdin)
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            try:
                code = cli.main(argv)
            except SystemExit as exc:  # argparse usage errors
                code = exc.code
    finally:
        sys.stdin = old_stdin
    return code, out.getvalue(), err.getvalue()


def run_line(line):
    """Run ``cmd | cmd ...`` feeding each stdout into the next stdin."""
    data, code, err = "", 0, ""
    for part in line.split(" | "):
        code, data, err = run(shlex.split(part), data)
    return code, data, err


def transcript():
    cwd = os.getcwd()
    os.chdir(GOLDEN)
    try:
        blocks = []
        for line in (GOLDEN / "commands.txt").read_text().splitlines():
            if not line.strip():
                continue
            code, out, err = run_line(line)
            shown = " | ".join(f"simfactor {p}" for p in line.split(" | "))
            text = f"$ {shown}\n{out}"
            text += "".join(f"! {e}\n" for e in err.splitlines())
            blocks.append(text + f"exit={code}\n")
        return "\n".join(blocks)
    finally:
        os.chdir(cwd)


def test_golden_transcript():
    expected = (GOLDEN / "transcript.txt").read_text()
    assert transcript() == expected


def test_transcript_is_long_enough_and_has_a_pipe():
    lines = [l for l in (GOLDEN / "commands.txt").read_text().splitlines() if l.strip()]
    assert len(lines) >= 12
    assert any(" | alg verify " in l for l in lines)


def test_golden_transcript_is_stable():
    assert transcript() == transcript()


@pytest.mark.skipif(shutil.which("simfactor") is None, reason="console script not installed")
def test_shell_pipe_round_trip():
    cmd = "simfactor alg witness worked.pres 3 | simfactor alg verify worked.pres -"
    proc = subprocess.run(cmd, shell=True, cwd=GOLDEN, capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.splitlines()[-1] == "overall=pass"


@pytest.mark.parametrize(
    "argv, code",
    [
        (["form", "isotropy", "1,-1"], 0),
        (["form", "isotropy", "1,1"], 1),
        (["form", "isotropy", "1,,2"], 2),
        (["form", "represents", "1,1", "0"], 2),
        (["alg", "multiplier", "no-such-file.pres", "3"], 2),
    ],
)
def test_exit_codes(argv, code):
    os.chdir(GOLDEN)
    assert run(argv)[0] == code


def test_negative_literals_are_not_options():
    code, out, _ = run(["form", "isotropy", "-1,-1,2"])
    assert code == 0 and "result=isotropic" in out
    code, out, _ = run(["form", "gfactor", "<<-1>>", "-1"])
    assert code == 1
    code, out, _ = run(["form", "represents", "<-1,2>", "-1"])
    assert code == 0


def test_parse_errors_report_position():
    code, _, err = run(["form", "isotropy", "1,2,y"])
    assert code == 2 and "line 1, column 5" in err
    os.chdir(GOLDEN)
    code, _, err = run(["alg", "multiplier", "even_psi.pres", "3"])
    assert code == 2 and "line 2, column 5" in err


def test_json_flag_positions_agree():
    a = run(["--json", "form", "witt", "1,1,-2,-3"])
    b = run(["form", "witt", "1,1,-2,-3", "--json"])
    assert a == b
    data = json.loads(a[1])
    assert data["witt_index"] == 1


def test_verify_reports_failures():
    os.chdir(GOLDEN)
    _, cert, _ = run(["alg", "witness", "worked.pres", "3"])
    code, out, _ = run(["alg", "verify", "worked.pres", "-"], cert.replace("d2=-3", "d2=3"))
    assert code == 1
    assert "overall=fail" in out and "detail." in out


@pytest.fixture(autouse=True)
def _restore_cwd():
    cwd = os.getcwd()
    yield
    os.chdir(cwd)


if __name__ == "__main__":
    (GOLDEN / "transcript.txt").write_text(transcript())
    print((GOLDEN / "transcript.txt").read_text())
