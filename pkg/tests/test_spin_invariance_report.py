import json

import pandas as pd
import pytest

import lifting
import spin_invariance_report
from run_config import RunConfig
from spin_errors import MethodDisagreementError, TrackingError
from spin_invariance_report import Report, main, table_rows
from sphere_actions import Family

FAST = ["--steps", "64"]


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    for name in ("SPHERE_SPIN_STEPS", "SPHERE_SPIN_SEED", "SPHERE_SPIN_JOBS"):
        monkeypatch.delenv(name, raising=False)


def _without_wall_time(report):
    for values in report["meta"]["records"].values():
        values.pop("wall_time")
    return report


def _run_json(tmp_path, name, argv):
    out = tmp_path / name
    assert main(argv + FAST + ["--format", "json", "--out", str(out)]) == 0
    return json.loads(out.read_text(encoding="utf-8"))


@pytest.mark.parametrize("family, n, verdict", [("so", "4", "No"), ("sp-u1", "1", "Yes"), ("sp-u1", "2", "No")])
def test_classify(tmp_path, family, n, verdict):
    report = _run_json(tmp_path, "one.json", ["classify", "--family", family, "--n", n])
    (record,) = report["records"]
    assert record["verdict"] == verdict
    assert record["match"] is True
    assert len(set(record["parity"].values())) == 1


def test_classify_exceptional_without_n(capsys):
    assert main(["classify", "--family", "g2"] + FAST) == 0
    out = capsys.readouterr().out
    assert "G2" in out and "SU(3)" in out
    assert "All 1 rows match" in out


@pytest.mark.parametrize("argv", [
    ["classify", "--family", "so", "--n", "1000"],
    ["classify", "--family", "e8", "--n", "2"],
    ["classify", "--family", "so"],
    ["classify", "--n", "3"],
    ["classify", "--family", "spin9", "--n", "2"],
    ["classify", "--family", "so", "--n", "3", "--steps", "65"],
    ["table", "--families", "so,e8"],
    ["table", "--families", "so", "--n-max", "1"],
    ["verify", "--suite", "geometry"],
    [],
])
def test_bad_arguments_exit_1(argv, capsys):
    assert main(argv) == 1
    assert "ERROR" in capsys.readouterr().err


def test_bad_environment_exits_1(monkeypatch):
    monkeypatch.setenv("SPHERE_SPIN_SEED", "not-a-seed")
    assert main(["verify-appendix"]) == 1


def test_table_rows_follow_family_order():
    rows = table_rows([Family.U, Family.SO, Family.G2], n_max=3)
    assert rows == [("SO", 2), ("SO", 3), ("U", 1), ("U", 2), ("U", 3), ("G2", 0)]
    assert len(table_rows(list(Family))) == 7 + 5 + 5 + 3 + 3 + 3 + 3


def test_table_subset_is_deterministic(tmp_path):
    argv = ["table", "--families", "so,u", "--n-max", "3"]
    first = _run_json(tmp_path, "a.json", argv)
    second = _run_json(tmp_path, "b.json", argv)
    assert [(r["family"], r["n"]) for r in first["records"]] == [("SO", 2), ("SO", 3), ("U", 1), ("U", 2), ("U", 3)]
    assert all(r["verdict"] == "No" for r in first["records"])
    assert _without_wall_time(first) == _without_wall_time(second)


def test_parallel_rows_match_serial_rows(tmp_path):
    argv = ["table", "--families", "sp-u1", "--n-max", "2"]
    serial = _run_json(tmp_path, "serial.json", argv)
    parallel = _run_json(tmp_path, "parallel.json", argv + ["--jobs", "2"])
    assert serial["records"] == parallel["records"]


def test_csv_and_json_agree(tmp_path):
    argv = ["table", "--families", "su,sp", "--n-max", "2"]
    report = _run_json(tmp_path, "t.json", argv)
    csv_path = tmp_path / "t.csv"
    assert main(argv + FAST + ["--format", "csv", "--out", str(csv_path)]) == 0
    frame = pd.read_csv(csv_path)
    assert len(frame) == len(report["records"])
    for row, record in zip(frame.to_dict("records"), report["records"]):
        assert row["family"] == record["family"]
        assert row["n"] == record["n"]
        assert row["verdict"] == record["verdict"]
        assert row["parity_adjoint"] == record["parity"]["adjoint"]
        assert bool(row["match"]) == record["match"]


def test_excel_export(tmp_path):
    path = tmp_path / "table.xlsx"
    assert main(["table", "--families", "so", "--n-max", "3", "--format", "excel", "--out", str(path)] + FAST) == 0
    records = pd.read_excel(path, sheet_name="records")
    meta = pd.read_excel(path, sheet_name="meta")
    assert list(records["n"]) == [2, 3]
    assert set(meta["steps"]) == {64}


def test_report_round_trip(tmp_path):
    data = _run_json(tmp_path, "r.json", ["table", "--families", "so,g2", "--n-max", "2"])
    report = Report.from_dict(data)
    assert report.config == RunConfig(steps=64, seed=data["meta"]["seed"])
    assert report.to_dict() == data


def test_table_text_output(capsys):
    assert main(["table", "--families", "spin7"] + FAST) == 0
    out = capsys.readouterr().out
    assert "Spin(7)" in out and "S^7" in out and "zeta" in out
    assert "All 1 rows match the known classification" in out


def test_method_disagreement_exits_2(monkeypatch, capsys):
    def disagree(spec, config):
        raise MethodDisagreementError("parities disagree", {"parities": {"differential": 1, "oracle": 0}})

    monkeypatch.setattr(spin_invariance_report, "classify", disagree)
    assert main(["classify", "--family", "so", "--n", "3"] + FAST) == 2
    assert "parities disagree" in capsys.readouterr().err


def test_table_mismatch_exits_2(monkeypatch, capsys):
    monkeypatch.setattr(lifting, "expected_verdict", lambda family, n: "Yes")
    assert main(["table", "--families", "so", "--n-max", "2"] + FAST) == 2
    assert "verdict No, expected Yes" in capsys.readouterr().out


def test_numerical_failure_exits_3(monkeypatch):
    def drift(spec, config):
        raise TrackingError("lift drifted", max_residual=1e-3)

    monkeypatch.setattr(spin_invariance_report, "classify", drift)
    assert main(["table", "--families", "so,u", "--n-max", "2"] + FAST) == 3


def test_verify_appendix(capsys):
    assert main(["verify-appendix", "--seed", "7"]) == 0
    out = capsys.readouterr().out
    assert "dim spin(9) . (1, 0)" in out
    assert "checks passed (suite appendix, seed 0x7)" in out


def test_failed_verification_exits_4(monkeypatch, capsys):
    from verify_suites import CheckResult

    monkeypatch.setattr(spin_invariance_report, "run_suite",
                        lambda name, seed: [CheckResult("appendix", "rank phi", 20.0, False, "== 21")])
    assert main(["verify", "--suite", "appendix"]) == 4
    assert "rank phi" in capsys.readouterr().err


@pytest.mark.slow
def test_default_table_reproduces_every_row(tmp_path):
    out = tmp_path / "full.json"
    assert main(["table", "--format", "json", "--out", str(out)]) == 0
    report = json.loads(out.read_text(encoding="utf-8"))
    rows = [(r["family"], r["n"]) for r in report["records"]]
    assert rows == table_rows(list(Family))
    assert report["meta"]["steps"] == 256
    for record in report["records"]:
        meta = report["meta"]["records"][f"{record['family']}/{record['n']}"]
        parity = record["parity"]
        assert record["verdict"] == lifting.expected_verdict(record["family"], record["n"])
        assert record["match"] is True
        assert parity["differential"] == parity["adjoint"]
        if not meta["oracle_fallback"]:
            assert parity["oracle"] == parity["differential"]
    quotient = {(r["family"], r["n"]): r["verdict"] for r in report["records"] if r["family"] in ("SpU1", "SpSp1")}
    assert quotient == {(f, n): ("Yes" if n % 2 else "No") for f in ("SpU1", "SpSp1") for n in (1, 2, 3)}
