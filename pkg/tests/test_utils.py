import json

import pandas as pd
import pytest

from mahlerlab.exceptions import ConfigurationError
from mahlerlab.utils import ConfigLoader
from mahlerlab.utils.io import (
    REPORT_COLUMNS,
    book_output_file,
    load_curves,
    write_report_csv,
    write_report_json,
    write_scan_csv,
)


def report_frame():
    return pd.DataFrame(
        [
            dict(claim_id="a", lhs=1.0, rhs=1.0, abs_diff=0.0, tolerance=1e-8, passed=True, lhs_err=0.0, rhs_err=0.0, wall_time_ms=0),
            dict(claim_id="b", lhs=0.1, rhs=0.3, abs_diff=0.2, tolerance=1e-8, passed=False, lhs_err=1e-12, rhs_err=0.0, wall_time_ms=3),
        ]
    )


def test_config_loader(config, tmp_path):
    assert config["tolerances"]["measure_identity"] == 1e-6
    path = tmp_path / "main.yml"
    path.write_text("quadrature:\n  tol: 1.0e-9\n", encoding="utf-8")
    loader = ConfigLoader(path)
    assert loader.get("quadrature.tol") == 1e-9
    assert loader.get("quadrature.n_scan", 4096) == 4096
    assert loader.get("missing.key") is None


@pytest.mark.parametrize("content", ["a: [1, 2", "- just\n- a list\n"])
def test_config_loader_errors(tmp_path, content):
    path = tmp_path / "main.yml"
    path.write_text(content, encoding="utf-8")
    with pytest.raises(ConfigurationError):
        ConfigLoader(path)
    with pytest.raises(ConfigurationError):
        ConfigLoader(tmp_path / "absent.yml")


def test_report_csv(tmp_path):
    out = tmp_path / "nested" / "report.csv"
    write_report_csv(report_frame(), out)
    lines = out.read_text().splitlines()
    assert lines[0] == ",".join(REPORT_COLUMNS)
    assert len(lines) == 3


def test_report_json(tmp_path):
    out = tmp_path / "report.json"
    write_report_json(report_frame(), out)
    records = json.loads(out.read_text())
    assert [r["claim_id"] for r in records] == ["a", "b"]
    assert list(records[1]) == REPORT_COLUMNS
    assert records[1]["passed"] is False


def test_report_needs_all_columns(tmp_path):
    with pytest.raises(ValueError):
        write_report_csv(report_frame().drop(columns=["rhs_err"]), tmp_path / "r.csv")


def test_scan_csv_and_output_dirs(tmp_path):
    assert book_output_file(tmp_path / "x" / "y" / "z.csv").parent.is_dir()
    out = tmp_path / "scan.csv"
    write_scan_csv(pd.DataFrame({"k": [1.0, 2.0], "m": [0.1, 0.2], "error": [0.0, 0.0]}), out)
    assert pd.read_csv(out).shape == (2, 3)


def test_load_curves(tmp_path):
    path = tmp_path / "curves.json"
    path.write_text(json.dumps({"label": "E36"}), encoding="utf-8")
    with pytest.raises(ConfigurationError):
        load_curves(path)
    path.write_text(json.dumps([{"label": "E36"}]), encoding="utf-8")
    assert load_curves(path) == [{"label": "E36"}]


def test_scan_plot(tmp_path):
    from mahlerlab.utils.plot import save_to, scan_plot

    scan = pd.DataFrame({"k": [1.0, 2.0, 3.0], "m": [0.2, 0.4, 0.5], "error": [1e-10, 1e-10, 1e-10]})
    _, ax = scan_plot(scan, "bosmanQ", breakpoints=(2.0, 8.0), annotation="degenerate k dashed")
    assert ax.get_xlabel() == "$k$"
    assert len(ax.lines) == 2  # the curve and one breakpoint inside the range
    save_to(str(tmp_path / "plots"), "scan")
    assert (tmp_path / "plots" / "scan.pdf").exists()
    assert (tmp_path / "plots" / "scan.png").exists()
