"""Tests for the command-line surface and its artifacts."""

import json
import math
from fractions import Fraction as F

import pytest

from binotail import cli
from binotail.validate import CheckSummary, ViolationReport


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def csv_rows(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    header = lines[0].split(",")
    return header, [dict(zip(header, ln.split(","))) for ln in lines[1:]]


class TestEval:
    def test_known_point_values(self, capsys):
        code, out, _ = run_cli(capsys, "eval", "--n", "10", "--k", "3",
                               "--p", "1/2", "--exact")
        assert code == 0
        _, rows = csv_rows(out)
        by_bound = {row["bound"]: row for row in rows}
        assert float(by_bound["exact"]["value"]) == 0.171875
        # Oracle values (40-digit recomputation of the closed forms).
        assert float(by_bound["b_down"]["value"]) == pytest.approx(
            0.16832117070807, rel=1e-12)
        assert float(by_bound["b_up"]["value"]) == pytest.approx(
            0.18763444857414, rel=1e-12)
        assert float(by_bound["chernoff"]["value"]) == pytest.approx(
            0.439187528538, rel=1e-11)
        assert float(by_bound["ferrante"]["value"]) == pytest.approx(
            0.66909605031833, rel=1e-12)

    def test_bounds_straddle_exact(self, capsys):
        _, out, _ = run_cli(capsys, "eval", "--n", "40", "--k", "12",
                            "--p", "2/5", "--exact")
        _, rows = csv_rows(out)
        by_bound = {row["bound"]: row for row in rows}
        for lower in ("L", "b_down", "mckay_down"):
            assert float(by_bound[lower]["tightness"]) <= 1
        for upper in ("U", "b_up", "chernoff", "ferrante", "mckay_up"):
            assert float(by_bound[upper]["tightness"]) >= 1

    def test_degenerate_endpoint(self, capsys):
        code, out, _ = run_cli(capsys, "eval", "--n", "10", "--k", "0",
                               "--p", "1/2")
        assert code == 0
        _, rows = csv_rows(out)
        by_bound = {row["bound"]: row for row in rows}
        assert by_bound["L"]["value"] == "1"
        assert by_bound["U"]["value"] == "1"
        for name in ("b_down", "b_up", "chernoff", "ferrante",
                     "mckay_down", "mckay_up"):
            assert by_bound[name]["note"] == "degenerate endpoint"
            assert by_bound[name]["value"] == ""

    def test_upper_tail_mirrors_lower(self, capsys):
        _, lower, _ = run_cli(capsys, "eval", "--n", "10", "--k", "3",
                              "--p", "1/2", "--exact")
        _, upper, _ = run_cli(capsys, "eval", "--n", "10", "--k", "7",
                              "--p", "1/2", "--tail", "upper", "--exact")
        _, lo_rows = csv_rows(lower)
        _, up_rows = csv_rows(upper)
        assert lo_rows == up_rows

    def test_json_format(self, capsys):
        code, out, _ = run_cli(capsys, "eval", "--n", "10", "--k", "3",
                               "--p", "1/2", "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert doc["schema"] == 1
        assert doc["params"] == {"n": 10, "k": 3, "p": "1/2",
                                 "tail": "lower"}
        assert doc["warnings"] == []
        assert {row["bound"] for row in doc["bounds"]} >= {"L", "U", "b_down"}

    def test_decimal_p_warns_but_evaluates(self, capsys):
        code, out, _ = run_cli(capsys, "eval", "--n", "10", "--k", "3",
                               "--p", "0.35")
        assert code == 0
        assert "# warning: decimal p=0.35" in out
        assert "7/20" in out

    def test_invalid_k_is_usage_error(self, capsys):
        code, _, err = run_cli(capsys, "eval", "--n", "10", "--k", "30",
                               "--p", "1/2")
        assert code == 2 and "error:" in err

    def test_malformed_p_is_usage_error(self, capsys):
        code, _, err = run_cli(capsys, "eval", "--n", "10", "--k", "3",
                               "--p", "half")
        assert code == 2 and "rational" in err


class TestSweep:
    def test_rows_respect_chain(self, capsys):
        code, out, _ = run_cli(capsys, "sweep", "--n", "30", "--p", "1/2")
        assert code == 0
        header, rows = csv_rows(out)
        assert header == list(cli._SWEEP_COLUMNS)
        assert len(rows) == 16  # k = 0..15
        for row in rows[1:]:
            L, U = float(row["L"]), float(row["U"])
            ratio = float(row["ratio"])
            assert L <= ratio <= U
            if row["b_down"]:
                assert float(row["b_down"]) < float(row["tail"])
                assert float(row["tail"]) < float(row["b_up"])

    def test_artifact_and_figure(self, tmp_path, capsys):
        out_path = tmp_path / "sweep.csv"
        code, _, _ = run_cli(capsys, "sweep", "--n", "10,30", "--p", "1/2",
                             "--out", str(out_path))
        assert code == 0
        assert out_path.exists()
        assert (tmp_path / "sweep.png").exists()

    def test_no_figure_flag(self, tmp_path, capsys):
        out_path = tmp_path / "sweep.csv"
        run_cli(capsys, "sweep", "--n", "10", "--p", "1/2",
                "--out", str(out_path), "--no-figure")
        assert out_path.exists()
        assert not (tmp_path / "sweep.png").exists()

    def test_reruns_byte_identical(self, tmp_path, capsys):
        paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
        for path in paths:
            run_cli(capsys, "sweep", "--n", "10,30", "--p", "1/4,1/2",
                    "--out", str(path), "--no-figure")
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_precision_flag(self, capsys):
        _, out17, _ = run_cli(capsys, "sweep", "--n", "10", "--p", "1/3")
        _, out6, _ = run_cli(capsys, "sweep", "--n", "10", "--p", "1/3",
                             "--precision", "6")
        _, rows17 = csv_rows(out17)
        _, rows6 = csv_rows(out6)
        assert len(rows17[2]["pmf"]) > len(rows6[2]["pmf"])
        assert float(rows6[2]["pmf"]) == pytest.approx(
            float(rows17[2]["pmf"]), rel=1e-5)


class TestVerify:
    def test_single_suite_pass(self, tmp_path, capsys):
        out_path = tmp_path / "verify.csv"
        code, _, err = run_cli(capsys, "verify", "--suite", "theorem1",
                               "--n-max", "40", "--out", str(out_path))
        assert code == 0
        assert "theorem1: PASS" in err
        text = out_path.read_text()
        header, rows = csv_rows(text)
        assert header == list(cli.report.VIOLATION_COLUMNS)
        assert rows == []
        assert (tmp_path / "verify.png").exists()

    def test_json_schema_stamp(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "--suite", "phi_band",
                               "--n-max", "50", "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert doc["schema"] == 1
        assert doc["suites"][0]["suite"] == "phi_band"
        assert doc["suites"][0]["passed"] is True

    def test_violations_exit_one_and_render_rows(self, tmp_path, capsys,
                                                 monkeypatch):
        fake = CheckSummary(
            suite="theorem1", points_checked=1,
            violations=(ViolationReport(
                suite="theorem1", point=(2, 1, F(1, 2)), lhs=1.25,
                rhs=1.0, margin=-0.25, check="fake-link"),),
            extremal_witness={"quantity": "q", "value": 1.25})
        monkeypatch.setattr(cli, "run_suite",
                            lambda suite, grid, **kw: fake)
        out_path = tmp_path / "verify.csv"
        code, _, err = run_cli(capsys, "verify", "--suite", "theorem1",
                               "--out", str(out_path), "--no-figure")
        assert code == 1
        assert "theorem1: FAIL" in err
        _, rows = csv_rows(out_path.read_text())
        assert rows == [{"suite": "theorem1", "n": "2", "k": "1", "p": "1/2",
                         "lhs": "1.25", "rhs": "1", "margin": "-0.25"}]

    def test_verify_rerun_byte_identical(self, tmp_path, capsys):
        paths = [tmp_path / "v1.json", tmp_path / "v2.json"]
        for path in paths:
            run_cli(capsys, "verify", "--suite", "successive_ratio",
                    "--n-max", "30", "--format", "json",
                    "--out", str(path), "--no-figure")
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_unknown_suite_exits_two(self, capsys):
        with pytest.raises(SystemExit) as info:
            cli.main(["verify", "--suite", "theorem9"])
        assert info.value.code == 2


class TestConjecture:
    def test_scan_artifact(self, tmp_path, capsys):
        out_path = tmp_path / "conj.csv"
        code, _, _ = run_cli(capsys, "conjecture", "--n-max", "30",
                             "--slice-n", "25,50,100",
                             "--out", str(out_path))
        assert code == 0
        _, rows = csv_rows(out_path.read_text())
        by_quantity = {}
        for row in rows:
            by_quantity.setdefault(row["quantity"], []).append(row)
        cap = float(by_quantity["global-cap"][0]["value"])
        assert float(by_quantity["global-max"][0]["value"]) < cap
        assert (float(by_quantity["interior-max"][0]["value"])
                < float(by_quantity["interior-cap"][0]["value"]))
        slice_vals = [float(r["value"]) for r in by_quantity["slice-k12"]]
        assert slice_vals == sorted(slice_vals) and slice_vals[-1] < cap
        assert (tmp_path / "conj.png").exists()


class TestCompare:
    def test_ranking_flips_across_f_star(self, capsys):
        code, out, _ = run_cli(capsys, "compare", "--against", "mckay",
                               "--p", "1/2", "--n", "10000",
                               "--points", "16")
        assert code == 0
        _, rows = csv_rows(out)
        f_star = 0.640388203202208
        labels = [(float(row["f"]), row["tighter"]) for row in rows]
        assert all(t == "mckay" for f, t in labels if f < f_star - 0.02)
        assert all(t == "ours" for f, t in labels if f > f_star + 0.02)
        assert {t for _, t in labels} == {"mckay", "ours"}

    def test_widths_sane(self, capsys):
        _, out, _ = run_cli(capsys, "compare", "--p", "1/4", "--n", "800",
                            "--points", "10")
        _, rows = csv_rows(out)
        for row in rows:
            assert 1 <= float(row["width_ratio_ours"]) < 2
            assert float(row["width_ratio_mckay"]) > 1
            assert float(row["width_tail_ours"]) < 89 / 44


class TestLimits:
    def test_monotone_column_and_exit(self, tmp_path, capsys):
        out_path = tmp_path / "limits.csv"
        code, _, _ = run_cli(capsys, "limits", "--f", "3/10", "--p", "1/2",
                             "--schedule", "10,100,1000,10000",
                             "--out", str(out_path))
        assert code == 0
        _, rows = csv_rows(out_path.read_text())
        values = [float(row["value"]) for row in rows
                  if row["track"] == "large_dev"]
        assert values == sorted(values)
        assert values[-1] == pytest.approx(1.523482, rel=0.005)
        assert (tmp_path / "limits.png").exists()

    def test_json_summary(self, capsys):
        code, out, _ = run_cli(capsys, "limits", "--schedule", "10,100",
                               "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert doc["schema"] == 1
        assert doc["summary"]["suite"] == "convergence"

    def test_bad_schedule_usage_error(self, capsys):
        code, _, err = run_cli(capsys, "limits", "--schedule", "100,100")
        assert code == 2 and "strictly increasing" in err
