import json

import pandas as pd
import pytest
from conftest import LPRIME_CHI4

from mahlerlab.cli import build_parser, main


@pytest.fixture(autouse=True)
def in_tmp(tmp_path, monkeypatch):
    # the log sink writes under ./logs
    monkeypatch.chdir(tmp_path)


def test_parser_choices():
    parser = build_parser()
    args = parser.parse_args(["verify", "--suite", "thm1", "--jobs", "2"])
    assert (args.command, args.suite, args.jobs, args.tol) == ("verify", "thm1", 2, None)
    with pytest.raises(SystemExit):
        parser.parse_args(["verify", "--suite", "thm9"])
    with pytest.raises(SystemExit):
        parser.parse_args(["lvalue", "--curve", "E36", "--chi", "-3"])


def test_lvalue_chi(capsys):
    assert main(["lvalue", "--chi", "-4"]) == 0
    printed = capsys.readouterr().out.split("=")[1].split()[0]
    assert float(printed) == pytest.approx(LPRIME_CHI4, rel=1e-13)


def test_lvalue_curve(capsys):
    assert main(["lvalue", "--curve", "E36"]) == 0
    assert "L'(E36, 0)" in capsys.readouterr().out


def test_unknown_curve_is_configuration_error():
    assert main(["lvalue", "--curve", "E11"]) == 2


def test_unknown_family_is_configuration_error():
    assert main(["measure", "--family", "bogus", "--k", "1"]) == 2


def test_malformed_config(tmp_path):
    bad = tmp_path / "bad.yml"
    bad.write_text("tolerances: [1, 2", encoding="utf-8")
    assert main(["--config", str(bad), "lvalue", "--chi", "-3"]) == 2


def test_invalid_measure_input_exits_with_2(capsys):
    assert main(["measure", "--family", "boydP", "--k", "1", "--method", "grid2d", "--n", "8"]) == 2
    assert capsys.readouterr().out == ""


def test_measure(capsys):
    assert main(["measure", "--family", "boydP", "--k", "3"]) == 0
    assert "m(boydP, k=3)" in capsys.readouterr().out


def test_scan(tmp_path):
    out = tmp_path / "scan.csv"
    assert main(["scan", "--family", "bosmanQ", "--k-min", "1", "--k-max", "3", "--steps", "3", "--csv", str(out)]) == 0
    scan = pd.read_csv(out)
    assert list(scan.columns) == ["k", "m", "error"]
    assert scan["k"].tolist() == [1.0, 2.0, 3.0]


def test_scan_rejects_empty_range(tmp_path):
    assert main(["scan", "--family", "boydP", "--k-min", "3", "--k-max", "1", "--csv", str(tmp_path / "s.csv")]) == 2


@pytest.mark.slow
def test_verify_reports_are_deterministic(tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    for path in (first, second):
        code = main(["verify", "--suite", "bosman", "--deterministic", "--json", str(path), "--csv", str(tmp_path / "r.csv")])
        assert code == 0
    assert first.read_bytes() == second.read_bytes()
    records = json.loads(first.read_text())
    assert {r["wall_time_ms"] for r in records} == {0}
    assert all(r["passed"] for r in records)


@pytest.mark.slow
def test_verify_tolerance_failure():
    assert main(["verify", "--suite", "bosman", "--tol", "0", "--deterministic"]) == 1
