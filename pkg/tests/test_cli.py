import json
import subprocess
import sys

import pytest

from padiccf.analysis import Classification
from padiccf.cf import Expansion
from padiccf.cli import main, split_values
from padiccf.mjp import MjpExpansion


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_expand_ruban(capsys):
    code, out, _ = run(capsys, "expand", "--p", "7", "--algorithm", "ruban", "--value", "-2/5")
    assert code == 0
    assert out == "[1, 44/7 | 48/7]\nstatus: periodic(2,1)\n"


def test_expand_browkin2(capsys):
    code, out, _ = run(capsys, "expand", "--p", "5", "--algorithm", "browkin2", "--value", "22/7")
    assert code == 0
    assert out.splitlines() == ["[1, -1/5, -1, -3/5, 1]", "status: finite"]


def test_expand_json_round_trip(capsys):
    code, out, _ = run(capsys, "expand", "--p", "7", "--algorithm", "browkin1", "--value", "quad:0,1,2", "--format", "json")
    assert code == 0
    e = Expansion.from_json(out)
    assert e.to_json() == out.strip()


def test_expand_truncated_exit_code(capsys):
    code, out, _ = run(capsys, "expand", "--p", "7", "--algorithm", "schneider", "--value", "quad:0,1,2", "--max-steps", "5")
    assert code == 2
    assert "truncated" in out


@pytest.mark.parametrize("argv", [
    ["expand", "--p", "4", "--algorithm", "ruban", "--value", "1/3"],
    ["expand", "--p", "7", "--algorithm", "ruban", "--value", "x/y"],
    ["expand", "--p", "5", "--algorithm", "schneider", "--value", "1/5"],
    ["classify", "--p", "5", "--algorithm", "ruban", "--value", "quad:0,1,3"],
])
def test_errors_exit_1(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1
    assert err.startswith("padiccf: error:")


def test_usage_errors_exit_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["expand", "--p", "7", "--algorithm", "nope", "--value", "1/3"])
    assert exc.value.code == 1


def test_classify_examples(capsys):
    code, out, _ = run(capsys, "classify", "--p", "7", "--algorithm", "ruban", "--value", "-2/5")
    d = json.loads(out)
    assert code == 0
    assert (d["verdict"], d["pre_period"], d["period"]) == ("Periodic", 2, 1)
    assert Classification.from_json(out).to_json() == out.strip()

    code, out, _ = run(capsys, "classify", "--p", "5", "--algorithm", "schneider", "--value", "quad:0,1,-1")
    d = json.loads(out)
    assert (d["verdict"], d["certificate"]) == ("NotPeriodic", "DeWegerSign")

    code, out, _ = run(capsys, "classify", "--p", "5", "--algorithm", "browkin1", "--value", "3/4")
    assert json.loads(out)["verdict"] == "Finite"


def test_classify_undetermined_exit_code(capsys):
    code, out, _ = run(capsys, "classify", "--p", "13", "--algorithm", "browkin1", "--value", "quad:0,1,3", "--budget", "30")
    assert code == 2
    assert json.loads(out)["verdict"] == "Undetermined"


def test_budget_environment(capsys, monkeypatch):
    monkeypatch.setenv("PADIC_CF_BUDGET", "7")
    code, out, _ = run(capsys, "expand", "--p", "7", "--algorithm", "schneider", "--value", "quad:0,1,2")
    assert code == 2 and "truncated(7)" in out
    monkeypatch.setenv("PADIC_CF_BUDGET", "lots")
    code, _, err = run(capsys, "expand", "--p", "7", "--algorithm", "ruban", "--value", "1/3")
    assert code == 1 and "PADIC_CF_BUDGET" in err


def test_approx_table(capsys):
    code, out, _ = run(capsys, "approx", "--p", "7", "--algorithm", "browkin1", "--value", "quad:0,1,2", "--depth", "20")
    lines = out.splitlines()
    assert code == 0
    assert len(lines) == 22  # header, 20 rows, summary
    assert lines[-1] == "mismatches: 0"
    assert "MISMATCH" not in out


def test_redei(capsys):
    code, out, _ = run(capsys, "redei", "--h", "0", "--d", "2", "--z", "1")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "[1 | 2, 2]"
    assert "check: PASS" in lines


def test_redei_match(capsys):
    code, out, _ = run(capsys, "redei", "--h", "-4", "--d", "-10", "--z", "1", "--match-p", "7", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["match"] == 1 and d["agrees"] is True


def test_jp(capsys):
    code, out, _ = run(capsys, "jp", "--p", "5", "--values", "22/7,3/4")
    assert code == 0
    assert "status: finite" in out
    assert "final convergent equals input: yes" in out


def test_jp_json_rows_round_trip(capsys):
    code, out, _ = run(capsys, "jp", "--p", "5", "--values", "quad:1,2,6,quad:0,3,6", "--format", "json")
    d = json.loads(out)
    assert code == 0
    assert d["recovered"] == ["quad:1,2,6", "quad:0,3,6"]
    e = MjpExpansion.from_dict({"p": 5, "m": 2, "rows": d["rows"], "status": {"kind": "finite"}})
    assert len(e) == len(d["rows"])


def test_split_values():
    assert split_values("1/2, quad:0,1,2,conjugate, 3") == ["1/2", "quad:0,1,2,conjugate", "3"]


def test_module_entry_point_is_deterministic():
    argv = [sys.executable, "-m", "padiccf", "expand", "--p", "7", "--algorithm", "mr-st", "--value", "quad:0,1,2"]
    first = subprocess.run(argv, capture_output=True)
    second = subprocess.run(argv, capture_output=True)
    assert first.returncode == 0
    assert first.stdout == second.stdout and first.stdout
