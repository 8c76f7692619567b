"""CLI behaviour: unit conversion, table output, exit codes, file round trips."""
import csv
import json
import math

import pytest

from metadist.cli import EXIT_IO, EXIT_MATH, EXIT_OK, EXIT_USAGE, db_to_linear, dbm_to_mw, main, mw_to_dbm
from metadist.specfun import reg_inc_beta

from oracles import beta_moments


def _read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


class TestUnitConversions:
    def test_db(self):
        assert db_to_linear(0.0) == 1.0
        assert db_to_linear(10.0) == pytest.approx(10.0)
        assert db_to_linear(float("-inf")) == 0.0

    def test_dbm(self):
        assert dbm_to_mw(0.0) == 1.0
        assert dbm_to_mw(-100.0) == pytest.approx(1e-10, rel=1e-12)
        assert mw_to_dbm(1.0) == 0.0
        assert mw_to_dbm(0.0) == float("-inf")


class TestMomentsCommand:
    def test_zero_threshold_all_ones(self, tmp_path):
        out = tmp_path / "m.csv"
        rc = main(["moments", "--theta-db=-inf", "--n-max", "4", "--out", str(out)])
        assert rc == EXIT_OK
        header, rows = _read_csv(out)
        assert header == ["n", "mu_exact", "mu_approx", "abs_diff", "error_bound"]
        for row in rows:
            assert float(row[1]) == pytest.approx(1.0, abs=1e-10)
            assert float(row[2]) == pytest.approx(1.0, abs=1e-10)

    def test_diff_within_bound(self, tmp_path):
        out = tmp_path / "m.csv"
        rc = main(["moments", "--n-max", "10", "--out", str(out)])
        assert rc == EXIT_OK
        _, rows = _read_csv(out)
        assert len(rows) == 10
        for row in rows:
            assert float(row[3]) <= float(row[4])

    def test_gamma_near_two(self, tmp_path):
        out = tmp_path / "m.csv"
        rc = main(["moments", "--gamma", "2.01", "--n-max", "3", "--out", str(out)])
        assert rc == EXIT_OK
        _, rows = _read_csv(out)
        for row in rows:
            assert abs(float(row[1]) - float(row[2])) <= 1e-4

    def test_invalid_gamma_is_usage_error(self):
        assert main(["moments", "--gamma", "1.5"]) == EXIT_USAGE

    def test_json_format(self, capsys):
        rc = main(["moments", "--n-max", "2", "--format", "json"])
        assert rc == EXIT_OK
        doc = json.loads(capsys.readouterr().out)
        assert doc["columns"][0] == "n"
        assert len(doc["rows"]) == 2

    def test_method_selection(self, tmp_path):
        out = tmp_path / "m.csv"
        assert main(["moments", "--method", "exact", "--n-max", "2", "--out", str(out)]) == EXIT_OK
        header, _ = _read_csv(out)
        assert header == ["n", "mu_exact"]


class TestReconstructCommand:
    def _write_moment_file(self, path, values):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["mu"])
            for v in values:
                writer.writerow([repr(v)])

    def test_beta_moment_file(self, tmp_path):
        mfile = tmp_path / "mu.csv"
        self._write_moment_file(mfile, beta_moments(2.7, 1.3, 10))
        out = tmp_path / "rec.csv"
        rc = main([
            "reconstruct", "--moments-file", str(mfile), "--order", "10",
            "--grid-points", "21", "--out", str(out),
        ])
        assert rc == EXIT_OK
        _, rows = _read_csv(out)
        assert float(rows[0][3]) == 1.0  # x = 0: reliability 1
        assert float(rows[-1][3]) == 0.0  # x = 1: reliability 0
        for row in rows:
            x = float(row[0])
            expected = 1.0 - reg_inc_beta(x, 2.7, 1.3)
            assert float(row[3]) == pytest.approx(expected, abs=1e-8)
        meta = json.loads((tmp_path / "rec.csv.meta.json").read_text())
        assert meta["basis"]["order"] == 10
        assert not meta["convergence"]["warning"]

    def test_degenerate_moments_exit(self, tmp_path):
        mfile = tmp_path / "mu.csv"
        self._write_moment_file(mfile, [1.0] * 11)
        rc = main(["reconstruct", "--moments-file", str(mfile), "--order", "10"])
        assert rc == EXIT_MATH

    def test_explicit_basis(self, tmp_path):
        out = tmp_path / "rec.csv"
        rc = main([
            "reconstruct", "--order", "6", "--basis", "explicit",
            "--alpha", "0.0", "--beta", "0.0", "--grid-points", "11",
            "--out", str(out),
        ])
        assert rc == EXIT_OK
        meta = json.loads((tmp_path / "rec.csv.meta.json").read_text())
        assert meta["basis"]["alpha"] == 0.0

    def test_explicit_basis_requires_parameters(self):
        assert main(["reconstruct", "--basis", "explicit"]) == EXIT_MATH


class TestSimulateCommand:
    def test_deterministic_output_files(self, tmp_path):
        out_a = tmp_path / "a.csv"
        out_b = tmp_path / "b.csv"
        for out in (out_a, out_b):
            rc = main([
                "simulate", "--realizations", "200", "--seed", "9", "--out", str(out),
            ])
            assert rc == EXIT_OK
        assert out_a.read_bytes() == out_b.read_bytes()
        sum_a = json.loads((tmp_path / "a.json").read_text())
        sum_b = json.loads((tmp_path / "b.json").read_text())
        assert sum_a == sum_b

    def test_summary_contents(self, tmp_path):
        out = tmp_path / "c.csv"
        rc = main([
            "simulate", "--realizations", "100", "--seed", "4", "--out", str(out),
        ])
        assert rc == EXIT_OK
        summary = json.loads((tmp_path / "c.json").read_text())
        assert summary["config"]["num_realizations"] == 100
        assert len(summary["empirical_moments"]) == 11
        assert summary["empirical_moments"][0] == 1.0
        assert len(summary["reliability_grid"]["x"]) == 101


class TestCompareCommand:
    def test_round_trip_moments(self, tmp_path):
        samples = tmp_path / "s.csv"
        assert main(["simulate", "--realizations", "300", "--seed", "2",
                     "--out", str(samples)]) == EXIT_OK
        recorded = json.loads((tmp_path / "s.json").read_text())["empirical_moments"]
        out = tmp_path / "cmp.csv"
        assert main(["compare", "--samples", str(samples), "--order", "8",
                     "--out", str(out)]) == EXIT_OK
        meta = json.loads((tmp_path / "cmp.csv.meta.json").read_text())
        assert len(meta["empirical_moments"]) == len(recorded)
        for a, b in zip(meta["empirical_moments"], recorded):
            assert abs(a - b) <= 1e-12

    def test_zero_threshold_degenerate(self, tmp_path):
        samples = tmp_path / "s.csv"
        assert main(["simulate", "--theta-db=-inf", "--realizations", "50",
                     "--seed", "1", "--out", str(samples)]) == EXIT_OK
        out = tmp_path / "cmp.csv"
        assert main(["compare", "--theta-db=-inf", "--samples", str(samples),
                     "--out", str(out)]) == EXIT_OK
        _, rows = _read_csv(out)
        assert len(rows) > 0
        for row in rows:
            assert float(row[1]) == 1.0
            assert float(row[2]) == 1.0
            assert float(row[3]) == 1.0
            assert float(row[4]) == 0.0
            assert float(row[5]) == 0.0

    def test_missing_samples_is_io_error(self, tmp_path):
        rc = main(["compare", "--samples", str(tmp_path / "absent.csv")])
        assert rc == EXIT_IO


class TestPowerCommand:
    def test_slope_in_meta(self, tmp_path):
        out = tmp_path / "p.csv"
        rc = main([
            "power", "--x-rel", "0.2", "--epsilon", "0.5", "--gamma", "4",
            "--theta-db", "-10", "--out", str(out),
        ])
        assert rc == EXIT_OK
        meta = json.loads((tmp_path / "p.csv.meta.json").read_text())
        assert abs(meta["loglog_slope"] + 2.0) <= 1e-6
        _, rows = _read_csv(out)
        assert len(rows) == 9
        p0 = float(rows[0][1])
        assert float(rows[0][2]) == pytest.approx(10.0 * math.log10(p0), rel=1e-12)

    def test_gamma_five_slope(self, tmp_path):
        out = tmp_path / "p.csv"
        rc = main([
            "power", "--x-rel", "0.2", "--epsilon", "0.5", "--gamma", "5",
            "--theta-db", "-10", "--out", str(out),
        ])
        assert rc == EXIT_OK
        meta = json.loads((tmp_path / "p.csv.meta.json").read_text())
        assert abs(meta["loglog_slope"] + 2.5) <= 1e-6

    def test_infeasible_exit(self):
        rc = main(["power", "--x-rel", "0.9", "--epsilon", "0.05", "--gamma", "5",
                   "--theta-db", "10"])
        assert rc == EXIT_MATH

    def test_invalid_qos_is_usage_error(self):
        assert main(["power", "--x-rel", "1.5", "--epsilon", "0.5"]) == EXIT_USAGE
        assert main(["power", "--x-rel", "0.5", "--epsilon", "0.5",
                     "--gamma", "2.0"]) == EXIT_USAGE
