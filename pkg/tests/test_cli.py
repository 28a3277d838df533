import csv
import io
import json
import math
import subprocess
import sys

import pytest

from meanbound import verify
from meanbound.cli import format_number, main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def parse_record(line):
    return dict(item.split("=", 1) for item in line.split(" "))


@pytest.mark.parametrize(
    "argv, expected",
    [
        (["mean", "--p", "1", "--values", "2,4"], "3\n"),
        (["mean", "--p", "-inf", "--values", "3,5,7"], "3\n"),
        (["mean", "--p", "inf", "--values", "3,5,7"], "7\n"),
        (["mean", "--exponential", "--p", "0", "--values", "1,3"], "2\n"),
        (["mean", "--p", "2", "--values", "1,7"], "5\n"),
    ],
)
def test_mean_examples(argv, expected):
    assert run(*argv) == (0, expected)


def test_mean_from_file(tmp_path):
    path = tmp_path / "v.txt"
    path.write_text("# entries\n2\n\n4\n  # indented comment\n", encoding="utf-8")
    assert run("mean", "--p", "1", "--input", str(path)) == (0, "3\n")
    bad = tmp_path / "bad.txt"
    bad.write_text("2\nfour\n", encoding="utf-8")
    assert run("mean", "--p", "1", "--input", str(bad))[0] == 2
    assert run("mean", "--p", "1", "--input", str(tmp_path / "missing.txt"))[0] == 2


@pytest.mark.parametrize(
    "argv, code",
    [
        (["mean", "--p", "1", "--values", "2,-4"], 1),
        (["mean", "--p", "1", "--values", "2,0"], 1),
        (["mean", "--p", "1", "--values", "2,,4"], 2),
        (["mean", "--p", "x", "--values", "2,4"], 2),
        (["mean", "--values", "2,4"], 2),
        (["mean", "--p", "1"], 2),
        (["bound", "--p", "-1", "--q", "1", "--gamma", "2"], 1),
        (["bound", "--p", "1", "--q", "-1", "--gamma", "0.5"], 1),
        (["extremal", "--p", "1", "--q", "-1", "--probe", "0"], 1),
        (["extremal", "--p", "1", "--q", "0", "--probe", "0.1"], 1),
        (["sweep", "--p", "1", "--q", "-1", "--gamma-min", "3", "--gamma-max", "2"], 2),
        (["sweep", "--p", "1", "--q", "-1", "--gamma-min", "1", "--gamma-max", "2", "--steps", "1"], 2),
        (["verify", "--samples", "0"], 2),
        (["verify", "--property", "nope", "--samples", "1"], 2),
        (["verify", "--tol", "-1", "--samples", "1"], 2),
        (["nosuchcommand"], 2),
        ([], 2),
    ],
)
def test_exit_codes(argv, code):
    assert run(*argv)[0] == code


def test_bound_examples():
    code, text = run("bound", "--p", "1", "--q", "-1", "--gamma", "4")
    assert code == 0
    rec = parse_record(text.strip())
    assert float(rec["K"]) == pytest.approx(1.5625, rel=1e-14)
    assert float(rec["kantorovich"]) == 1.5625
    assert float(rec["B"]) == pytest.approx(math.exp(0.25 * math.log(4) ** 2), rel=1e-15)
    assert list(rec) == ["p", "q", "gamma", "K", "B", "kantorovich", "B_over_K"]

    rec = parse_record(run("bound", "--p", "2", "--q", "2", "--gamma", "7")[1].strip())
    assert rec["K"] == "1" and rec["B"] == "1"

    rec = parse_record(run("bound", "--p", "1", "--q", "0", "--gamma", "2")[1].strip())
    assert math.isfinite(float(rec["K"])) and float(rec["K"]) > 1
    assert float(rec["B"]) == pytest.approx(math.exp(math.log(2) ** 2 / 8), rel=1e-15)
    assert "kantorovich" not in rec


def test_bound_json_lines():
    code, text = run("bound", "--p", "3", "--q", "-2", "--gamma", "10", "--format", "json-lines")
    assert code == 0
    rec = json.loads(text)
    assert rec["B"] >= rec["K"] > 1


def test_sweep_examples():
    code, text = run("sweep", "--p", "1", "--q", "-1", "--gamma-min", "1", "--gamma-max", "4", "--steps", "4")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(text)))
    assert len(rows) == 4
    assert [float(r["gamma"]) for r in rows] == [1, 2, 3, 4]
    assert float(rows[-1]["K"]) == pytest.approx(1.5625, rel=1e-14)
    assert list(rows[0]) == ["gamma", "sup_estimate", "K", "B", "slack_K_over_sup", "slack_B_over_K"]

    text = run("sweep", "--p", "1", "--q", "-1", "--gamma-min", "1", "--gamma-max", "1", "--steps", "2")[1]
    rows = list(csv.DictReader(io.StringIO(text)))
    assert rows[0] == rows[1]
    assert all(rows[0][k] == "1" for k in ("gamma", "sup_estimate", "K", "B"))


def test_sweep_log_scale_is_geometric():
    text = run(
        "sweep", "--p", "2", "--q", "0.5", "--gamma-min", "1", "--gamma-max", "1000", "--steps", "4", "--scale", "log"
    )[1]
    gammas = [float(r["gamma"]) for r in csv.DictReader(io.StringIO(text))]
    assert gammas[0] == 1 and gammas[-1] == 1000
    assert gammas[1] == pytest.approx(10, rel=1e-14) and gammas[2] == pytest.approx(100, rel=1e-14)


def test_sweep_csv_round_trip():
    from meanbound.cli import SweepSpec, sweep_rows

    text = run("sweep", "--p", "3", "--q", "-2", "--gamma-min", "1.5", "--gamma-max", "40", "--steps", "7")[1]
    parsed = list(csv.DictReader(io.StringIO(text)))
    direct = sweep_rows(SweepSpec(3.0, -2.0, 1.5, 40.0, 7))
    for row, ref in zip(parsed, direct):
        for key, value in ref.items():
            assert float(row[key]) == value


def test_extremal_examples():
    code, text = run("extremal", "--p", "1", "--q", "-1", "--gamma", "4")
    assert code == 0
    rec = parse_record(text.strip())
    assert abs(float(rec["slack_K_over_sup"])) <= 1e-12

    code, text = run("extremal", "--p", "2", "--q", "-1", "--probe", "1e-1,1e-2,1e-3")
    values = [float(parse_record(line)["normalized_ratio"]) for line in text.splitlines()]
    assert code == 0 and len(values) == 3
    assert values[0] < values[1] < values[2] <= 1

    rec = parse_record(run("extremal", "--p", "1", "--q", "1", "--gamma", "2")[1].strip())
    assert all(rec[k] == "1" for k in ("sup_estimate", "K", "B"))


def test_verify_examples():
    code, text = run("verify", "--seed", "42", "--samples", "200")
    assert code == 0 and len(text.splitlines()) == 11
    code, text = run("verify", "--property", "conjugacy", "--samples", "10")
    assert code == 0
    rec = parse_record(text.strip().split(" worst_witness=")[0])
    assert rec["property"] == "conjugacy" and rec["samples_run"] == "10"


def test_verify_alias_and_formats():
    code, text = run("verify", "--property", "P5", "--samples", "5", "--format", "json-lines")
    rec = json.loads(text)
    assert code == 0 and rec["property"] == "lemma_f_decreasing"
    assert verify.replay("P5", rec["worst_witness"]) == rec["worst_margin"]


def test_verify_exit_three_on_violation(monkeypatch):
    broken = verify.Property("taylor_conclusion", verify.PROPERTIES["taylor_conclusion"].sample, lambda w: -1.0)
    monkeypatch.setitem(verify.PROPERTIES, "taylor_conclusion", broken)
    code, text = run("verify", "--property", "P11", "--samples", "3")
    assert code == 3
    assert "violations=3" in text


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv("MEANBOUND_SEED", "42")
    from_env = run("verify", "--property", "P1", "--samples", "50")[1]
    explicit = run("verify", "--property", "P1", "--samples", "50", "--seed", "42")[1]
    assert from_env == explicit
    monkeypatch.setenv("MEANBOUND_SEED", "7")
    assert run("verify", "--property", "P1", "--samples", "50", "--seed", "42")[1] == explicit
    monkeypatch.setenv("MEANBOUND_SEED", "abc")
    assert run("verify", "--samples", "1")[0] == 2


def test_format_number():
    assert format_number(3.0) == "3"
    assert format_number(-0.0) == "0"
    assert format_number(0.1) == "0.1"
    assert format_number(1.5625) == "1.5625"
    assert format_number(math.inf) == "inf"
    assert format_number(1e300) == "1e+300"
    x = 1.2715403174076219
    assert float(format_number(x)) == x


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "meanbound", "mean", "--p", "1", "--values", "2,4"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0 and proc.stdout == "3\n"
