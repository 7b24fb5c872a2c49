import json
import os
from fractions import Fraction

import pytest

from sasakit.cli import main, parse_reeb


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize(
    "text, expected",
    [
        ("3,3,3", [Fraction(3)] * 3),
        ("3, 3/2, 3/2", [Fraction(3), Fraction(3, 2), Fraction(3, 2)]),
        ("3.0,2.5,2.5", [3.0, 2.5, 2.5]),
        ("xc", None),
    ],
)
def test_parse_reeb(text, expected):
    got = parse_reeb(text)
    assert got == expected
    if expected is not None:
        assert [type(a) for a in got] == [type(a) for a in expected]


@pytest.mark.parametrize(
    "fixture, argv, code",
    [
        ("dp2.json", ["minimize"], 0),
        ("c3.json", ["analyze"], 0),
        ("bad.json", ["analyze"], 1),
        ("nogoren.json", ["analyze"], 2),
        ("missing.json", ["minimize"], 1),
        ("dp2.json", ["volume", "--reeb", "1,1,1"], 2),
        ("dp2.json", ["volume", "--reeb", "1,2"], 1),
        ("dp2.json", ["futaki", "--reeb", "3,3,3"], 0),
        ("dp2.json", ["minimize", "--max-iter", "0", "--tol", "1e-300"], 3),
    ],
)
def test_exit_codes(capsys, data_dir, fixture, argv, code):
    got, _, err = run(capsys, argv[0], data_dir / fixture, *argv[1:])
    assert got == code, err


def test_bad_normal_message_names_row(capsys, data_dir):
    _, _, err = run(capsys, "analyze", data_dir / "bad.json")
    assert "row 1" in err


def test_minimize_json(capsys, data_dir):
    code, out, _ = run(capsys, "minimize", data_dir / "dp2.json", "--output", "json")
    rep = json.loads(out)
    assert code == 0 and rep["minimizer"]["regularity"] == "IrregularNumeric"
    assert abs(rep["minimizer"]["x_c"][1] - 2.6688164886776411) <= 1e-8
    assert rep["closed_form"]["max_abs_diff"] <= 1e-8
    assert "timings" not in rep


def test_timings_only_on_request(capsys, data_dir):
    _, out, _ = run(capsys, "minimize", data_dir / "c3.json", "--output", "json", "--timings")
    assert "timings" in json.loads(out)


def test_exact_rational_reeb_is_on_slice(capsys, data_dir):
    code, out, _ = run(capsys, "volume", data_dir / "conifold.json", "--reeb", "3,3/2,3/2", "--output", "json")
    assert code == 0
    rep = json.loads(out)
    assert rep["reeb"] == ["3", "3/2", "3/2"]


def test_futaki_verdicts(capsys, data_dir):
    _, out, _ = run(capsys, "futaki", data_dir / "dp2.json", "--reeb", "xc", "--output", "json")
    assert json.loads(out)["futaki"]["verdict"] == "UnobstructedAtTolerance"
    _, out, _ = run(capsys, "futaki", data_dir / "dp2.json", "--reeb", "3,3,3", "--output", "json")
    assert json.loads(out)["futaki"]["verdict"] == "Obstructed"


def test_report_and_csv_written(capsys, data_dir, tmp_path):
    report, table = tmp_path / "r.json", tmp_path / "g.csv"
    argv = ["potential-check", data_dir / "c3.json", "--grid-radius", "2", "--samples", "5"]
    code, out, _ = run(capsys, *argv, "--report", report, "--csv", table)
    assert code == 0
    assert json.loads(report.read_text())["potential"]["passed"] is True
    rows = table.read_text().splitlines()
    assert rows[0] == "x1,x2,u0,vbar,diff,ma_residual" and len(rows) == 26
    # no temp files left behind
    assert sorted(os.listdir(tmp_path)) == ["g.csv", "r.json"]


def test_output_is_deterministic(capsys, data_dir, tmp_path):
    outs = []
    for threads in (1, 2, 1):
        csv = tmp_path / f"t{threads}-{len(outs)}.csv"
        argv = ["potential-check", data_dir / "conifold.json", "--grid-radius", "3", "--samples", "5"]
        code, out, _ = run(capsys, *argv, "--threads", threads, "--output", "json", "--csv", csv)
        assert code == 0
        outs.append((out, csv.read_bytes()))
    assert outs[0] == outs[1] == outs[2]
