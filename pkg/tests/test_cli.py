import csv
import io
import json
import math
import subprocess
import sys

import pytest

from bmm.cli import main


def run(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_estimate_stdin(capsys, monkeypatch):
    code, out, _ = run(capsys, "estimate", "--method", "mean", stdin="1\n2\n6\n", monkeypatch=monkeypatch)
    assert code == 0 and json.loads(out) == {"method": "mean", "estimate": 3.0, "n": 3}


def test_estimate_file(tmp_path, capsys):
    f = tmp_path / "x.txt"
    f.write_text("0\n0\n3\n")
    code, out, _ = run(capsys, "estimate", "--method", "abmm", "--input", str(f))
    assert code == 0 and json.loads(out)["estimate"] == pytest.approx(14 / 15)
    code, out, _ = run(capsys, "estimate", "--method", "bmm", "--input", str(f), "--J", "50", "--seed", "4")
    assert code == 0 and 0 <= json.loads(out)["estimate"] <= 3


def test_usage_errors(tmp_path, capsys):
    assert run(capsys, "estimate", "--method", "nope")[0] == 2
    assert run(capsys)[0] == 2
    assert run(capsys, "estimate", "--method", "mean", "--input", str(tmp_path / "missing"))[0] == 2
    f = tmp_path / "bad.txt"
    f.write_text("1\nabc\n")
    assert run(capsys, "estimate", "--method", "mean", "--input", str(f))[0] == 2
    assert run(capsys, "fib", "--m", "0")[0] == 2
    assert run(capsys, "simulate", "--dist", "pareto(0,1,1)", "--n", "5", "--reps", "3")[0] == 2


def test_ci(tmp_path, capsys):
    f = tmp_path / "x.txt"
    f.write_text("\n".join(str(v) for v in range(1, 21)))
    code, out, _ = run(capsys, "ci", "--input", str(f), "--B", "200", "--level", "0.9")
    r = json.loads(out)
    assert code == 0 and r["lower"] < r["point_estimate"] < r["upper"]


def test_fib(capsys):
    code, out, _ = run(capsys, "fib", "--m", "7", "--draws", "500")
    r = json.loads(out)
    assert code == 0 and r["oracle"] == 21 and abs(r["relative_error"]) < 0.3


def test_density(tmp_path, capsys):
    out = tmp_path / "d.csv"
    code, _, _ = run(capsys, "density", "--values", "0,1", "--alpha", "0.5", "--grid", "9", "--out", str(out))
    rows = list(csv.DictReader(out.open()))
    assert code == 0 and len(rows) == 9
    y = float(rows[4]["y"])
    assert float(rows[4]["pdf"]) == pytest.approx(1 / (math.pi * math.sqrt(y * (1 - y))))
    code, text, _ = run(capsys, "density", "--values", "0,1,2", "--alpha", "0.5", "--grid", "3")
    rows = list(csv.DictReader(io.StringIO(text)))
    assert math.isnan(float(rows[1]["pdf"])) and float(rows[1]["cdf"]) == pytest.approx(0.5)
    assert run(capsys, "density", "--values", "0,1,2", "--alpha", "3")[0] == 2


def test_simulate_outputs(tmp_path, capsys):
    out = tmp_path / "s.csv"
    code, _, _ = run(capsys, "simulate", "--dist", "normal(0,1)", "--n", "20", "--reps", "10",
                     "--estimators", "mean,bmm", "--out", str(out))
    rows = list(csv.DictReader(out.open()))
    assert code == 0 and [r["estimator"] for r in rows] == ["mean", "bmm"]
    code, text, _ = run(capsys, "simulate", "--experiment", "bounds", "--dist", "normal(0,1)",
                        "--n", "20", "--reps", "20")
    r = json.loads(text)
    assert code == 0 and {"mse_identity", "mm_deviation", "unconditional_median_bias_bound"} <= r.keys()


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "bmm", "fib", "--m", "5", "--draws", "10"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["oracle"] == 8
