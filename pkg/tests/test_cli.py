"""Command-line interface: output formats, exit codes, file parsing.

Every command is exercised through ``main(argv)`` exactly as a shell would
drive it; stdout must parse as strict CSV or JSON.
"""
import csv
import io
import json
import math

import pytest

from conftest import (
    LRT_REPORTED,
    TABLE1,
    TABLE1_COLUMNS,
    TABLE2_NU,
    TABLE2_RHO,
    TABLE2_U,
    THETA_H01,
    THETA_H02,
)
from lwchi2 import lw_quantile, standard_lw_chi2
from lwchi2.cli import main


def run(argv, capsys):
    code = main(argv)
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def parse_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    assert rows, "no CSV output"
    return rows[0], rows[1:]


def write_combo(tmp_path, payload, name="combo.json"):
    path = tmp_path / name
    path.write_text(payload if isinstance(payload, str)
                    else json.dumps(payload))
    return str(path)


CHI2_10 = [{"kind": "chi2", "nu": 10, "lambda": 1.0}]


class TestDist:
    def test_qf_spot(self, capsys):
        code, out, err = run(
            ["dist", "qf", "--nu", "1", "--standard", "--p", "0.95"], capsys)
        assert code == 0 and err == ""
        header, rows = parse_csv(out)
        assert header == ["point", "value"]
        assert float(rows[0][1]) == pytest.approx(4.7606, abs=5e-4)

    def test_cdf_at_support_edge(self, capsys):
        code, out, _ = run(
            ["dist", "cdf", "--nu", "3", "--standard", "--y", "0"], capsys)
        assert code == 0
        _, rows = parse_csv(out)
        assert float(rows[0][1]) == 0.0

    def test_pdf_general_theta(self, capsys):
        code, out, _ = run(
            ["dist", "pdf", "--nu", "2", "--theta", "0", "1", "1",
             "--y", "1.0", "2.0"], capsys)
        assert code == 0
        _, rows = parse_csv(out)
        assert len(rows) == 2
        assert all(float(r[1]) > 0.0 for r in rows)

    def test_cf_at_zero(self, capsys):
        code, out, _ = run(
            ["dist", "cf", "--nu", "2", "--standard", "--t", "0"], capsys)
        assert code == 0
        header, rows = parse_csv(out)
        assert header == ["point", "re", "im"]
        assert float(rows[0][1]) == 1.0
        assert float(rows[0][2]) == 0.0

    def test_cumulants_mean(self, capsys):
        code, out, _ = run(
            ["dist", "cumulants", "--nu", "2", "--standard"], capsys)
        assert code == 0
        header, rows = parse_csv(out)
        assert header == ["name", "value"]
        table = dict(rows)
        assert float(table["mean"]) == pytest.approx(1.1544313, abs=1e-4)
        assert float(table["kappa2"]) == pytest.approx(2.5797363, abs=1e-4)
        assert set(table) >= {"kappa1", "kappa2", "kappa3", "kappa4",
                              "mean", "variance", "skewness",
                              "kurtosis_excess_ratio"}

    def test_standard_and_theta_conflict(self, capsys):
        code, _, err = run(
            ["dist", "qf", "--nu", "1", "--standard",
             "--theta", "0", "1", "1", "--p", "0.5"], capsys)
        assert code == 2
        assert "error:" in err

    def test_neither_parameterization(self, capsys):
        code, _, err = run(
            ["dist", "qf", "--nu", "1", "--p", "0.5"], capsys)
        assert code == 2
        assert "error:" in err

    def test_digits_out_of_range(self, capsys):
        code, _, err = run(
            ["dist", "qf", "--nu", "1", "--standard", "--p", "0.5",
             "--digits", "20"], capsys)
        assert code == 2
        assert "digits" in err

    def test_missing_required_points_flag(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["dist", "qf", "--nu", "1", "--standard"])
        assert exc.value.code == 2
        capsys.readouterr()


class TestTable1:
    def test_full_default_grid(self, capsys):
        code, out, err = run(["table1"], capsys)
        assert code == 0 and err == ""
        header, rows = parse_csv(out)
        assert header == ["p"] + list(TABLE1_COLUMNS)
        assert len(rows) == 10
        for row in rows:
            p = float(row[0])
            expected = TABLE1[p]
            for got_txt, want in zip(row[1:], expected):
                assert float(got_txt) == pytest.approx(want, abs=5e-4), (
                    f"p={p}")

    def test_matches_library_call_cell_for_cell(self, capsys):
        code, out, _ = run(
            ["table1", "--p", "0.95", "0.99", "--nu", "1", "10"], capsys)
        assert code == 0
        _, rows = parse_csv(out)
        for row in rows:
            p = float(row[0])
            for label, cell in zip(("1", "10"), row[1:]):
                direct = lw_quantile(standard_lw_chi2(float(label)), p)
                assert cell == format(direct, ".6g")

    def test_inf_column_is_chi2_limit(self, capsys):
        code, out, _ = run(["table1", "--p", "0.7", "--nu", "inf"], capsys)
        assert code == 0
        _, rows = parse_csv(out)
        assert float(rows[0][1]) == pytest.approx(1.0742, abs=5e-4)

    def test_bad_probability(self, capsys):
        code, _, err = run(["table1", "--p", "1.5"], capsys)
        assert code == 2
        assert "error:" in err

    def test_bad_nu_token(self, capsys):
        code, _, err = run(["table1", "--nu", "ten"], capsys)
        assert code == 2
        assert "error:" in err


class TestConv:
    def test_chi2_quantile(self, tmp_path, capsys):
        combo = write_combo(tmp_path, CHI2_10)
        code, out, _ = run(
            ["conv", "qf", "--combo", combo, "--p", "0.95",
             "--digits", "12"], capsys)
        assert code == 0
        _, rows = parse_csv(out)
        assert float(rows[0][1]) == pytest.approx(18.307038053275146,
                                                  abs=1e-3)

    def test_cdf_multiple_points(self, tmp_path, capsys):
        combo = write_combo(tmp_path, [
            {"kind": "lw_chi2", "nu": 1, "theta": "standard"},
            {"kind": "chi2", "nu": 2.0},
        ])
        code, out, _ = run(
            ["conv", "cdf", "--combo", combo, "--y", "1", "5", "15"], capsys)
        assert code == 0
        _, rows = parse_csv(out)
        vals = [float(r[1]) for r in rows]
        assert vals == sorted(vals)
        assert 0.0 <= vals[0] and vals[-1] <= 1.0

    def test_explicit_theta_terms(self, tmp_path, capsys):
        combo = write_combo(tmp_path, [
            {"kind": "lw_chi2", "nu": 2, "theta": [0.0, 1.0, 1.0],
             "lambda": 2.0},
        ])
        code, out, _ = run(
            ["conv", "pdf", "--combo", combo, "--y", "3.0"], capsys)
        assert code == 0
        _, rows = parse_csv(out)
        assert float(rows[0][1]) > 0.0

    @pytest.mark.parametrize("payload", [
        "[]",
        "{not json",
        [{"kind": "bogus", "nu": 1}],
        [{"kind": "chi2", "nu": 1, "theta": "standard"}],
        [{"kind": "chi2", "nu": 1, "lambda": 0.0}],
        [{"kind": "chi2", "nu": 1, "shift": 2.0}],
        [{"kind": "lw_chi2", "nu": 1}],
        [{"kind": "chi2", "nu": True}],
    ])
    def test_schema_rejections(self, tmp_path, capsys, payload):
        combo = write_combo(tmp_path, payload)
        code, _, err = run(
            ["conv", "qf", "--combo", combo, "--p", "0.5"], capsys)
        assert code == 2
        assert "error:" in err

    def test_missing_file(self, capsys):
        code, _, err = run(
            ["conv", "qf", "--combo", "/nonexistent/x.json", "--p", "0.5"],
            capsys)
        assert code == 2
        assert "error:" in err

    def test_node_budget_exhaustion_is_exit_3(self, tmp_path, capsys):
        combo = write_combo(tmp_path, CHI2_10)
        code, _, err = run(
            ["conv", "cdf", "--combo", combo, "--y", "18.307",
             "--max-nodes", "1000"], capsys)
        assert code == 3
        assert "error:" in err


class TestLrtVariance:
    def test_null_value_report(self, capsys):
        code, out, err = run(
            ["lrt", "variance", "--s2", "2.0", "--sigma0-sq", "2.0",
             "--nu", "5"], capsys)
        assert code == 0 and err == ""
        report = json.loads(out)
        assert report["test"] == "variance"
        assert report["statistic"] == 0.0
        assert report["p_value"] == 1.0
        assert report["decision"] == "accept"
        lo, hi = report["ci_lrt"]
        assert lo < 2.0 < hi
        assert report["level"] == pytest.approx(0.95)
        lo2, hi2 = report["ci_minlength"]
        assert hi2 - lo2 <= (hi - lo) * (1.0 + 1e-9)

    def test_far_alternative_rejects(self, capsys):
        code, out, _ = run(
            ["lrt", "variance", "--s2", "30.0", "--sigma0-sq", "1.0",
             "--nu", "10", "--digits", "10"], capsys)
        assert code == 0
        report = json.loads(out)
        assert report["decision"] == "reject"
        assert report["p_value"] < 1e-6
        assert report["statistic"] == pytest.approx(
            10.0 * (30.0 - 1.0 - math.log(30.0)), rel=1e-9)

    def test_bad_inputs(self, capsys):
        code, _, err = run(
            ["lrt", "variance", "--s2", "-1.0", "--sigma0-sq", "1.0",
             "--nu", "5"], capsys)
        assert code == 2
        assert "error:" in err


class TestLrtRegression:
    def write_csv_file(self, tmp_path, text, name="reg.csv"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    def test_hand_example(self, tmp_path, capsys):
        data = self.write_csv_file(tmp_path, "y,x1\n0,1\n0,1\n3,1\n")
        code, out, _ = run(
            ["lrt", "regression", "--data", data, "--beta0", "0",
             "--sigma0-sq", "1", "--digits", "12"], capsys)
        assert code == 0
        report = json.loads(out)
        expected = 3.0 + 3.0 * (1.0 - math.log(2.0))
        assert report["statistic"] == pytest.approx(expected, rel=1e-9)
        assert report["n"] == 3 and report["k"] == 1
        assert report["test"] == "regression"
        assert report["decision"] in ("accept", "reject")

    def test_bad_header(self, tmp_path, capsys):
        data = self.write_csv_file(tmp_path, "target,x1\n0,1\n1,1\n")
        code, _, err = run(
            ["lrt", "regression", "--data", data, "--beta0", "0",
             "--sigma0-sq", "1"], capsys)
        assert code == 2
        assert "error:" in err

    def test_beta0_length_mismatch(self, tmp_path, capsys):
        data = self.write_csv_file(tmp_path, "y,x1\n0,1\n1,1\n2,1\n")
        code, _, err = run(
            ["lrt", "regression", "--data", data, "--beta0", "0", "1",
             "--sigma0-sq", "1"], capsys)
        assert code == 2
        assert "error:" in err


def table2_csv_text(theta0, theta_true=None):
    if theta_true is None:
        lines = ["rho,nu,U,theta0"]
        for r, n, u, t in zip(TABLE2_RHO, TABLE2_NU, TABLE2_U, theta0):
            lines.append(f"{r},{n},{u},{t}")
    else:
        lines = ["rho,nu,U,theta0,theta_true"]
        for r, n, u, t, tt in zip(TABLE2_RHO, TABLE2_NU, TABLE2_U,
                                  theta0, theta_true):
            lines.append(f"{r},{n},{u},{t},{tt}")
    return "\n".join(lines) + "\n"


class TestLrtCanonical:
    def test_first_hypothesis(self, tmp_path, capsys):
        path = tmp_path / "h01.csv"
        path.write_text(table2_csv_text(THETA_H01))
        code, out, _ = run(
            ["lrt", "canonical", "--data", str(path), "--digits", "10"],
            capsys)
        assert code == 0
        report = json.loads(out)
        assert report["test"] == "canonical"
        assert report["n_components"] == 10
        assert report["statistic"] == pytest.approx(
            LRT_REPORTED["H01"], abs=0.05)
        assert report["decision"] == "accept"
        assert report["asymptotic_decision"] == "accept"

    def test_second_hypothesis_asymptotic_disagrees(self, tmp_path, capsys):
        path = tmp_path / "h02.csv"
        path.write_text(table2_csv_text(THETA_H02))
        code, out, _ = run(
            ["lrt", "canonical", "--data", str(path), "--digits", "10"],
            capsys)
        assert code == 0
        report = json.loads(out)
        assert report["statistic"] == pytest.approx(
            LRT_REPORTED["H02"], abs=0.05)
        # the exact test keeps the null; the chi-squared approximation
        # would wrongly reject it
        assert report["decision"] == "accept"
        assert report["asymptotic_decision"] == "reject"
        assert report["statistic"] > report["asymptotic_null_quantile"]
        assert report["statistic"] < report["null_quantile"]

    def test_power_reported_with_theta_true(self, tmp_path, capsys):
        path = tmp_path / "h01_tt.csv"
        ones = tuple(1.0 for _ in THETA_H01)
        path.write_text(table2_csv_text(THETA_H01, theta_true=ones))
        code, out, _ = run(
            ["lrt", "canonical", "--data", str(path)], capsys)
        assert code == 0
        report = json.loads(out)
        assert "power_at_theta_true" in report
        assert 0.0 <= report["power_at_theta_true"] <= 1.0

    def test_bad_header(self, tmp_path, capsys):
        path = tmp_path / "bad.csv"
        path.write_text("rho,nu,stat,theta0\n1,1,1,1\n")
        code, _, err = run(
            ["lrt", "canonical", "--data", str(path)], capsys)
        assert code == 2
        assert "error:" in err


class TestMc:
    def test_deterministic_output(self, capsys):
        argv = ["mc", "--chi2-nu", "2", "--count", "5000", "--seed", "17"]
        code1, out1, _ = run(argv, capsys)
        code2, out2, _ = run(argv, capsys)
        assert code1 == code2 == 0
        assert out1 == out2

    def test_chi2_summary_fields(self, capsys):
        code, out, _ = run(
            ["mc", "--chi2-nu", "2", "--count", "20000", "--seed", "5",
             "--quantiles", "0.5", "0.9"], capsys)
        assert code == 0
        report = json.loads(out)
        assert report["count"] == 20000 and report["seed"] == 5
        assert report["mean"] == pytest.approx(2.0, abs=0.1)
        assert report["ks_vs_analytic"] <= 0.02
        assert set(report["quantiles"]) == {"0.5", "0.9"}
        assert report["quantiles"]["0.5"] == pytest.approx(1.386, abs=0.1)

    def test_lw_target(self, capsys):
        code, out, _ = run(
            ["mc", "--nu", "2", "--standard", "--count", "20000",
             "--seed", "9"], capsys)
        assert code == 0
        report = json.loads(out)
        assert report["mean"] == pytest.approx(1.1544, abs=0.05)
        assert report["ks_vs_analytic"] <= 0.02

    def test_combo_target_has_no_analytic_ks(self, tmp_path, capsys):
        combo = write_combo(tmp_path, CHI2_10)
        code, out, _ = run(
            ["mc", "--combo", combo, "--count", "5000", "--seed", "3"],
            capsys)
        assert code == 0
        report = json.loads(out)
        assert report["ks_vs_analytic"] is None
        assert report["mean"] == pytest.approx(10.0, abs=0.3)

    def test_target_selection_errors(self, tmp_path, capsys):
        combo = write_combo(tmp_path, CHI2_10)
        code, _, err = run(
            ["mc", "--chi2-nu", "2", "--combo", combo,
             "--count", "100", "--seed", "1"], capsys)
        assert code == 2 and "error:" in err
        code, _, err = run(["mc", "--count", "100", "--seed", "1"], capsys)
        assert code == 2 and "error:" in err

    def test_bad_quantile_level(self, capsys):
        code, _, err = run(
            ["mc", "--chi2-nu", "2", "--count", "100", "--seed", "1",
             "--quantiles", "1.5"], capsys)
        assert code == 2 and "error:" in err

    def test_nonpositive_count(self, capsys):
        code, _, err = run(
            ["mc", "--chi2-nu", "2", "--count", "0", "--seed", "1"], capsys)
        assert code == 2 and "error:" in err
