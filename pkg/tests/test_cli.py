import json
import math
import shutil
import subprocess
import sys

import pytest

from primesums.cli import EXIT_DATA, EXIT_FAIL, EXIT_OK, EXIT_USAGE, main
from primesums.scanner import read_hits_csv


def test_scan_writes_hits(tmp_path, capsys):
    out = tmp_path / "hits.csv"
    assert main(["scan", "--max-n", "1000", "--emit", str(out)]) == EXIT_OK
    assert len(out.read_text().splitlines()) == 142
    assert "pi_1000 = 141" in capsys.readouterr().out


def test_scan_small_json(capsys):
    assert main(["scan", "--max-n", "10", "--variant", "plain", "--format", "json"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["hits"] == 5


def test_resume_after_interrupt_is_byte_identical(tmp_path):
    cold = tmp_path / "cold.csv"
    main(["scan", "--max-n", "5000", "--emit", str(cold), "--cadence", "1000"])
    hits, cp = tmp_path / "hits.csv", tmp_path / "cp.json"
    main(["scan", "--max-n", "3000", "--emit", str(hits), "--checkpoint", str(cp), "--cadence", "1000"])
    # an interrupted run may leave rows past the checkpoint; they must be ignored
    with hits.open("a") as fh:
        fh.write("4000,999,12345\n")
    assert main(["scan", "--max-n", "5000", "--emit", str(hits), "--checkpoint", str(cp),
                 "--resume", "--cadence", "1000"]) == EXIT_OK
    assert hits.read_bytes() == cold.read_bytes()


def test_resume_rejects_corrupt_history(tmp_path):
    hits, cp = tmp_path / "hits.csv", tmp_path / "cp.json"
    main(["scan", "--max-n", "2000", "--emit", str(hits), "--checkpoint", str(cp), "--cadence", "1000"])
    text = hits.read_text().replace("\n2,2,17\n", "\n2,2,19\n")
    hits.write_text(text)
    assert main(["scan", "--max-n", "3000", "--emit", str(hits), "--checkpoint", str(cp), "--resume"]) == EXIT_DATA


def test_usage_errors(tmp_path):
    assert main(["scan"]) == EXIT_USAGE
    assert main(["scan", "--max-n", "100", "--cadence", "10"]) == EXIT_USAGE
    assert main(["scan", "--max-n", "100", "--threads", "0"]) == EXIT_USAGE
    assert main(["scan", "--max-n", "100", "--variant", "bogus"]) == EXIT_USAGE
    assert main(["scan", "--max-n", "100", "--resume"]) == EXIT_USAGE
    assert main(["verify", "--suite", "nope", "--max-n", "100"]) == EXIT_USAGE
    assert main(["nonsense"]) == EXIT_USAGE


def test_table_from_hits_file(tmp_path, capsys):
    hits = tmp_path / "hits.csv"
    main(["scan", "--max-n", "1000", "--emit", str(hits)])
    capsys.readouterr()
    assert main(["table", "2", "--points", "1000", "--hits", str(hits), "--max-n", "1000"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[1].split(",") == ["1000", f"{141 / (1000 / math.log(1000)):.6g}", "0.839286"]
    # default sample points are clipped to the stated coverage
    assert main(["table", "1", "--hits", str(hits), "--max-n", "1000"]) == EXIT_OK
    assert [l.split(",")[0] for l in capsys.readouterr().out.splitlines()[1:]] == ["100", "1000"]
    # without a stated bound the file only vouches for n <= last hit index
    assert main(["table", "2", "--points", "1000", "--hits", str(hits)]) == EXIT_DATA


def test_table5_markdown(capsys):
    assert main(["table", "5", "--points", "100", "--format", "markdown"]) == EXIT_OK
    row = capsys.readouterr().out.splitlines()[2]
    cells = [c.strip() for c in row.strip("|").split("|")]
    assert cells[:2] == ["100", "22"] and "29" in cells and "1.10277" in cells


def test_verify(capsys):
    assert main(["verify", "--suite", "prop-5.1", "--max-n", "100000"]) == EXIT_OK
    assert main(["verify", "--suite", "conj-4.12", "--max-n", "1000"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "141" in out and "168" in out
    assert main(["verify", "--suite", "conj-4.6", "--max-n", "1000"]) == EXIT_FAIL


def test_thin_wrappers(capsys, tmp_path):
    assert main(["solve-mk", "--k", "23", "--q", "109147"]) == EXIT_OK
    assert "1.17893" in capsys.readouterr().out
    assert main(["li", "--x", "2"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "0"
    assert main(["li", "--x", "1"]) == EXIT_USAGE
    hits = tmp_path / "h.csv"
    main(["scan", "--max-n", "100", "--emit", str(hits)])
    capsys.readouterr()
    assert main(["series", "--kind", "inv-pi", "--upto", "10", "--hits", str(hits), "--format", "json"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["partial_sum"] == pytest.approx(3.55) and data["comparator"] == pytest.approx(2.65095, abs=1e-5)
    assert main(["solve-mk", "--k", "10", "--q", str(10**60)]) == EXIT_DATA


def test_bounds_command(capsys):
    assert main(["bounds", "--rule", "mandl", "--n", "9"]) == EXIT_OK
    assert "lhs=200 rhs=207" in capsys.readouterr().out
    assert main(["bounds", "--rule", "robin", "--hi", "10000"]) == EXIT_OK
    assert main(["bounds", "--rule", "mandl", "--n", "8"]) == EXIT_USAGE
    assert main(["bounds", "--list"]) == EXIT_OK
    assert "hassani" in capsys.readouterr().out


@pytest.mark.skipif(shutil.which("primesums") is None, reason="console script not installed")
def test_console_script(tmp_path):
    out = subprocess.run(["primesums", "li", "--x", "1000"], capture_output=True, text=True)
    assert out.returncode == 0 and float(out.stdout) == pytest.approx(176.56, abs=0.01)
    out = subprocess.run([sys.executable, "-m", "primesums.cli", "li", "--x", "1"], capture_output=True, text=True)
    assert out.returncode == EXIT_USAGE and "primesums:" in out.stderr
